from functools import lru_cache
from pathlib import Path
from typing import Mapping, MutableMapping, Optional, Sequence, Tuple, Type

import toml

from planarcrn.exceptions import ConfigError


# section -> key -> accepted python types after toml parsing
KNOWN_KEYS: Mapping[str, Mapping[str, Tuple[Type[object], ...]]] = {
    "sim": {
        "rel_tol": (float, int),
        "abs_tol": (float, int),
        "t_max": (float, int),
        "max_steps": (int,),
        "converge_tol": (float, int),
        "dwell_time": (float, int),
        "sample_interval": (float, int),
        "workers": (int,),
    },
    "curves": {
        "resolution": (int,),
        "window_q": (list,),
        "window_shifted": (list,),
    },
    "construct": {
        "tau": (float, int),
    },
    "output": {
        "directory": (str,),
    },
    "http": {
        "host": (str,),
        "port": (int,),
    },
}

_config_path_override: Optional[Path] = None


def set_config_path(path: Optional[Path]) -> None:
    global _config_path_override
    _config_path_override = path
    _get_config.cache_clear()


def __get_config_filename() -> Optional[str]:
    if _config_path_override is not None:
        if not _config_path_override.exists():
            raise ConfigError(f"config file {_config_path_override} does not exist")
        return str(_config_path_override.absolute())
    potential_paths: Sequence[Path] = [
        Path("config.toml"),
        Path("~/.planarcrn/config.toml").expanduser(),
        Path("/etc/planarcrn/config.toml"),
    ]
    try:
        path = next(
            path for path in potential_paths if path.exists() and not path.is_dir()
        )
    except StopIteration:
        return None
    return str(path.absolute())


@lru_cache(maxsize=None)
def _get_config() -> MutableMapping[str, object]:
    filename = __get_config_filename()
    if filename is None:
        return {}
    with open(filename, "r") as file:
        toml_string = file.read()
    try:
        return toml.loads(toml_string)
    except toml.TomlDecodeError as error:
        raise ConfigError(f"{filename} is not valid TOML: {error}")


def validate() -> None:
    config = _get_config()
    for section, values in config.items():
        known = KNOWN_KEYS.get(section)
        if known is None:
            raise ConfigError(f"unknown section [{section}]")
        if not isinstance(values, dict):
            raise ConfigError(f"[{section}] must be a table")
        for key, value in values.items():
            if key not in known:
                raise ConfigError(f"unknown key {key} in [{section}]")
            # bools are ints to python, but never a valid setting here
            if isinstance(value, bool) or not isinstance(value, known[key]):
                raise ConfigError(f"{section}.{key} has the wrong type")


def _get_setting(section: str, key: str, default: object) -> object:
    section_config = _get_config().get(section)
    if not isinstance(section_config, dict):
        return default
    return section_config.get(key, default)


def _get_window(key: str, default: Tuple[float, float, float, float]) -> Tuple[
    float, float, float, float
]:
    value = _get_setting("curves", key, None)
    if value is None:
        return default
    if not isinstance(value, list) or len(value) != 4:
        raise ConfigError(f"curves.{key} must be [x_min, x_max, y_min, y_max]")
    x_min, x_max, y_min, y_max = (float(v) for v in value)
    return (x_min, x_max, y_min, y_max)


def get_rel_tol() -> float:
    return float(str(_get_setting("sim", "rel_tol", 1e-9)))


def get_abs_tol() -> float:
    return float(str(_get_setting("sim", "abs_tol", 1e-12)))


def get_t_max() -> float:
    return float(str(_get_setting("sim", "t_max", 200.0)))


def get_max_steps() -> int:
    return int(str(_get_setting("sim", "max_steps", 2_000_000)))


def get_converge_tol() -> float:
    return float(str(_get_setting("sim", "converge_tol", 1e-6)))


def get_dwell_time() -> float:
    return float(str(_get_setting("sim", "dwell_time", 5.0)))


def get_sample_interval() -> float:
    return float(str(_get_setting("sim", "sample_interval", 0.01)))


def get_workers() -> int:
    return int(str(_get_setting("sim", "workers", 1)))


def get_resolution() -> int:
    return int(str(_get_setting("curves", "resolution", 512)))


def get_window_q() -> Tuple[float, float, float, float]:
    return _get_window("window_q", (-1.5, 1.5, -1.5, 1.5))


def get_window_shifted() -> Tuple[float, float, float, float]:
    return _get_window("window_shifted", (0.3, 4.0, 0.3, 4.0))


def get_tau() -> float:
    return float(str(_get_setting("construct", "tau", 1e-9)))


def get_output_directory() -> Path:
    return Path(str(_get_setting("output", "directory", "out")))


def get_http_host() -> str:
    return str(_get_setting("http", "host", "0.0.0.0"))


def get_http_port() -> int:
    return int(str(_get_setting("http", "port", 5050)))
