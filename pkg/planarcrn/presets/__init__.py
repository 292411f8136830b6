"""
Named reaction networks, named planar systems, and pinned figure setups.

Figure presets live next to this module as TOML files, one per figure, and
are loaded on demand.
"""
import logging
import pathlib
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, List, Mapping, Optional, Tuple

import toml

from planarcrn.construct import (
    NAMED_PAIRS,
    build_christopher,
    build_general,
    build_gradient,
    product_curve,
    shift_and_multiply,
)
from planarcrn.curves import (
    CUBIC,
    H9,
    THREE_OVAL_QUARTIC,
    CurveSpec,
    ParamValue,
    catalog,
    q_curve,
)
from planarcrn.curves.ovals import Window
from planarcrn.exceptions import BadParams, UnknownPreset
from planarcrn.file_formats.network import parse_network
from planarcrn.file_formats.recipe import parse_rational_value
from planarcrn.network import (
    Network,
    PlanarSystem,
    derive_mass_action,
    lotka_volterra_network,
    multiply_system,
)
from planarcrn.polynomial import Poly2
from planarcrn.sim import Point, boundary_starts, grid_starts


logger: logging.Logger = logging.getLogger(__name__)

PRESET_DIRECTORY: pathlib.Path = pathlib.Path(__file__).parent

NETWORK_PRESETS: Mapping[str, str] = {
    "lotka_volterra": "X -> 2X @ 1\nX + Y -> 2Y @ 1\nY -> 0 @ 1\n",
    "linear": "0 -> X @ 1\nX -> Y @ 1\nY -> 0 @ 1\n",
    "linear_times": (
        "0 -> X @ 1\nX -> Y @ 1\nY -> 0 @ 1\n"
        "2X + Y -> 3X + Y @ 1\n3X + Y -> 2X + 2Y @ 1\n2X + 2Y -> 2X + Y @ 1\n"
    ),
    "unit_square": (
        "0 -> X @ 1\nX -> 0 @ 1\n0 -> Y @ 1\nY -> 0 @ 1\n"
        "X -> X + Y @ 1\nX + Y -> X @ 1\nY -> X + Y @ 1\nX + Y -> Y @ 1\n"
    ),
}


def network_preset(name: str) -> Network:
    text = NETWORK_PRESETS.get(name)
    if text is None:
        raise UnknownPreset(name)
    return parse_network(text)


ESCHER_F: Poly2 = Poly2.parse("2 x^2 - x y + 3/2")
ESCHER_G: Poly2 = Poly2.parse("5/2 x^2 - x y - y + 17/4")
CHRISTOPHER_LINE: Poly2 = Poly2.parse("y - 7 x")

Params = Mapping[str, ParamValue]


def _number(params: Params, key: str) -> Fraction:
    value = params[key]
    if isinstance(value, tuple):
        raise BadParams(f"{key} must be a single number")
    return value


def _chavarriga(params: Params) -> PlanarSystem:
    c = _number(params, "c")
    f = Poly2.parse("2 + 4 x + 12 x y") + Poly2.monomial(-4 * c, 2, 0)
    g = (
        Poly2.constant(8 - 3 * c)
        + Poly2.monomial(-14 * c, 1, 0)
        + Poly2.monomial(-2 * c, 1, 1)
        + Poly2.monomial(-8, 0, 2)
    )
    # the cycle lies above y = -1, so move it up one unit and multiply by y
    return shift_and_multiply(PlanarSystem(f, g), 0, 1, Poly2.y())


def _product(params: Params) -> PlanarSystem:
    deltas = params["deltas"]
    if not isinstance(deltas, tuple):
        deltas = (deltas,)
    f0, g0 = NAMED_PAIRS["unit_square"]
    return build_general(product_curve(deltas), f0, g0, _number(params, "eps"))


@dataclass(frozen=True)
class SystemPreset:
    build: Callable[[Params], PlanarSystem]
    defaults: Mapping[str, ParamValue] = field(default_factory=dict)
    # catalog curve kept invariant by the system, if any
    curve: Optional[str] = None

    def curve_spec(self, params: Params) -> Optional[CurveSpec]:
        if self.curve is None:
            return None
        keys = {"product": ("deltas",), "q_shifted": ("mu",)}.get(self.curve, ())
        return catalog(self.curve, {key: params[key] for key in keys})


SYSTEM_PRESETS: Mapping[str, SystemPreset] = {
    "lotka_volterra": SystemPreset(
        lambda p: derive_mass_action(
            lotka_volterra_network(
                _number(p, "k1"), _number(p, "k2"), _number(p, "k3")
            )
        ),
        {"k1": Fraction(1), "k2": Fraction(1), "k3": Fraction(1)},
    ),
    "linear": SystemPreset(lambda p: derive_mass_action(network_preset("linear"))),
    "linear_times": SystemPreset(
        lambda p: multiply_system(
            derive_mass_action(network_preset("linear")), Poly2.parse("1 + x^2 y")
        )
    ),
    "escher": SystemPreset(lambda p: PlanarSystem(ESCHER_F, ESCHER_G), curve="ellipse"),
    "chavarriga": SystemPreset(_chavarriga, {"c": Fraction(1, 8)}),
    "boros": SystemPreset(
        lambda p: build_general(CUBIC, *NAMED_PAIRS["linear"], _number(p, "eps")),
        {"eps": Fraction(1)},
        "cubic",
    ),
    "unit_square": SystemPreset(
        lambda p: derive_mass_action(network_preset("unit_square"))
    ),
    "min_reversible": SystemPreset(
        lambda p: build_general(H9, *NAMED_PAIRS["unit_square"], _number(p, "eps")),
        {"eps": Fraction(0)},
        "h9",
    ),
    "product": SystemPreset(
        _product,
        {
            "deltas": (Fraction(1), Fraction(2), Fraction(3), Fraction(4)),
            "eps": Fraction(1, 10),
        },
        "product",
    ),
    "christopher": SystemPreset(
        lambda p: build_christopher(THREE_OVAL_QUARTIC, CHRISTOPHER_LINE),
        curve="threeoval",
    ),
    "gradient_quartic": SystemPreset(
        lambda p: build_gradient(
            q_curve(_number(p, "mu")).shift(2, 2), _number(p, "eps")
        ),
        {"mu": Fraction(39), "eps": Fraction(1)},
        "q_shifted",
    ),
}


def _resolve_params(
    name: str, params: Optional[Params]
) -> Tuple[SystemPreset, Dict[str, ParamValue]]:
    preset = SYSTEM_PRESETS.get(name)
    if preset is None:
        raise UnknownPreset(name)
    merged: Dict[str, ParamValue] = dict(preset.defaults)
    for key, value in (params or {}).items():
        if key not in preset.defaults:
            raise BadParams(f"system {name} takes no parameter {key}")
        merged[key] = value
    return preset, merged


def system_preset(name: str, params: Optional[Params] = None) -> PlanarSystem:
    preset, merged = _resolve_params(name, params)
    system = preset.build(merged)
    logger.debug(f"built preset {name} of degree {system.degree}")
    return system


def system_preset_curve(
    name: str, params: Optional[Params] = None
) -> Optional[CurveSpec]:
    preset, merged = _resolve_params(name, params)
    return preset.curve_spec(merged)


@dataclass(frozen=True)
class StartSpec:
    kind: str
    window: Optional[Window] = None
    count: int = 0
    nx: int = 0
    ny: int = 0
    points: Tuple[Point, ...] = ()

    def generate(self) -> List[Point]:
        if self.kind == "points":
            return list(self.points)
        window = self.window
        assert window is not None
        if self.kind == "grid":
            return grid_starts(window, self.nx, self.ny)
        if self.kind == "boundary":
            return boundary_starts(window, self.count)
        return [
            (window.x_min, window.y_min),
            (window.x_max, window.y_min),
            (window.x_max, window.y_max),
            (window.x_min, window.y_max),
        ]


START_KINDS = ("points", "grid", "boundary", "corners")


@dataclass(frozen=True)
class FigurePreset:
    name: str
    description: str
    curve: str
    curve_params: Tuple[Tuple[str, ParamValue], ...] = ()
    curve_window: Optional[Window] = None
    system: Optional[str] = None
    system_params: Tuple[Tuple[str, ParamValue], ...] = ()
    starts: Tuple[StartSpec, ...] = ()
    sim: Tuple[Tuple[str, float], ...] = ()
    plot_window: Optional[Window] = None
    log_scale: bool = False
    shade: bool = False
    line: Optional[Poly2] = None

    def curve_spec(self) -> CurveSpec:
        return catalog(self.curve, dict(self.curve_params), self.curve_window)

    def build_system(self) -> Optional[PlanarSystem]:
        if self.system is None:
            return None
        return system_preset(self.system, dict(self.system_params))

    def start_points(self) -> List[Point]:
        points: List[Point] = []
        for spec in self.starts:
            points += spec.generate()
        return points


def _window(name: str, value: Any, log_scale: bool = False) -> Window:
    if (
        not isinstance(value, list)
        or len(value) != 4
        or any(isinstance(v, bool) or not isinstance(v, (int, float)) for v in value)
    ):
        raise BadParams(f"{name} must be a list of four numbers")
    return Window(*(float(v) for v in value), log_scale=log_scale)


def _params(name: str, table: Any) -> Tuple[Tuple[str, ParamValue], ...]:
    if not isinstance(table, dict):
        raise BadParams(f"{name} must be a table")
    parsed: Dict[str, ParamValue] = {}
    for key, value in table.items():
        if isinstance(value, list):
            parsed[key] = tuple(parse_rational_value(key, v) for v in value)
        else:
            parsed[key] = parse_rational_value(key, value)
    return tuple(sorted(parsed.items()))


def _start_spec(table: Any) -> StartSpec:
    if not isinstance(table, dict) or table.get("kind") not in START_KINDS:
        raise BadParams(f"start kinds are {', '.join(START_KINDS)}")
    kind = table["kind"]
    if kind == "points":
        return StartSpec(
            kind, points=tuple((float(x), float(y)) for x, y in table.get("points", []))
        )
    window = _window("starts.window", table.get("window"))
    return StartSpec(
        kind,
        window=window,
        count=int(table.get("count", 0)),
        nx=int(table.get("nx", 0)),
        ny=int(table.get("ny", 0)),
    )


def parse_figure_preset(name: str, data: Mapping[str, Any]) -> FigurePreset:
    curve = data.get("curve", {})
    if not isinstance(curve, dict) or "name" not in curve:
        raise BadParams(f"figure preset {name} needs a [curve] table with a name")
    system = data.get("system", {})
    plot = data.get("plot", {})
    sim = data.get("sim", {})
    log_scale = bool(plot.get("log_scale", False))
    curve_window: Optional[Window] = None
    if "window" in curve:
        curve_log = bool(curve.get("log_scale", False))
        curve_window = _window("curve.window", curve["window"], curve_log)
    plot_window: Optional[Window] = None
    if "window" in plot:
        plot_window = _window("plot.window", plot["window"], log_scale)
    return FigurePreset(
        name=name,
        description=str(data.get("description", "")),
        curve=curve["name"],
        curve_params=_params("curve.params", curve.get("params", {})),
        curve_window=curve_window,
        system=system.get("name"),
        system_params=_params("system.params", system.get("params", {})),
        starts=tuple(_start_spec(table) for table in data.get("starts", [])),
        sim=tuple(sorted(sim.items())),
        plot_window=plot_window,
        log_scale=log_scale,
        shade=bool(plot.get("shade", False)),
        line=Poly2.parse(plot["line"]) if "line" in plot else None,
    )


def figure_names() -> List[str]:
    return sorted(path.stem for path in PRESET_DIRECTORY.glob("*.toml"))


def figure_preset(name: str) -> FigurePreset:
    path = PRESET_DIRECTORY / f"{name}.toml"
    if not path.exists():
        raise UnknownPreset(name)
    return parse_figure_preset(name, toml.load(path))
