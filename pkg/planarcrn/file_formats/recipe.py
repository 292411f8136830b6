from fractions import Fraction
from typing import Any, Dict, MutableMapping, Optional, Tuple

import toml

from planarcrn.curves import ParamValue
from planarcrn.curves.ovals import Window
from planarcrn.exceptions import PlanarCRNException, RecipeError
from planarcrn.file_formats import TextFileFormat
from planarcrn.polynomial import Poly2, format_rational, parse_rational
from planarcrn.recipe import Builder, Recipe, recipe_params


RECIPE_KEYS = (
    "builder",
    "eps",
    "curve",
    "params",
    "h",
    "shift",
    "pair",
    "f0",
    "g0",
    "line",
    "multiply",
    "window",
)


def parse_rational_value(key: str, value: object) -> Fraction:
    """
    Rationals are written as integers or as strings such as ``"1/10"``;
    TOML floats are refused so that recipes stay exact.
    """
    if isinstance(value, bool):
        raise RecipeError(f"{key} must be a rational number, got {value}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return parse_rational(value)
        except ValueError:
            raise RecipeError(f"{key} must be a rational number, got {repr(value)}")
    raise RecipeError(
        f"{key} must be an integer or a string such as \"1/10\", got {repr(value)}"
    )


def _parse_param(key: str, value: object) -> ParamValue:
    if isinstance(value, list):
        return tuple(parse_rational_value(key, item) for item in value)
    return parse_rational_value(key, value)


def _parse_poly(key: str, value: object) -> Optional[Poly2]:
    if value is None:
        return None
    if not isinstance(value, str):
        raise RecipeError(f"{key} must be a polynomial string, got {repr(value)}")
    return Poly2.parse(value)


def _render_param(value: ParamValue) -> Any:
    if isinstance(value, tuple):
        return [format_rational(item) for item in value]
    return format_rational(value)


class RecipeFile(TextFileFormat[Recipe]):
    """
    A construction recipe in TOML, for example::

        curve = "q"
        shift = ["2", "2"]
        builder = "gradient"
        eps = "1"

        [params]
        mu = "39"
    """

    extension: str = ".recipe"

    @classmethod
    def loads(cls, text: str) -> Recipe:
        try:
            data: MutableMapping[str, Any] = toml.loads(text)
        except toml.TomlDecodeError as error:
            raise RecipeError(f"not valid TOML: {error}")
        return cls.from_mapping(data)

    @classmethod
    def from_mapping(cls, data: MutableMapping[str, Any]) -> Recipe:
        unknown = sorted(set(data) - set(RECIPE_KEYS))
        if unknown:
            raise RecipeError(f"unknown recipe keys: {', '.join(unknown)}")
        if "builder" not in data:
            raise RecipeError("a recipe needs a builder")
        try:
            builder = Builder(data["builder"])
        except ValueError:
            raise RecipeError(
                f"unknown builder {repr(data['builder'])}, expected one of "
                + ", ".join(b.value for b in Builder)
            )
        params = data.get("params", {})
        if not isinstance(params, dict):
            raise RecipeError("params must be a table")
        shift: Optional[Tuple[Fraction, Fraction]] = None
        if "shift" in data:
            raw_shift = data["shift"]
            if not isinstance(raw_shift, list) or len(raw_shift) != 2:
                raise RecipeError("shift must be a list of two rationals")
            shift = (
                parse_rational_value("shift", raw_shift[0]),
                parse_rational_value("shift", raw_shift[1]),
            )
        window: Optional[Window] = None
        if "window" in data:
            raw_window = data["window"]
            if not isinstance(raw_window, list) or len(raw_window) != 4:
                raise RecipeError("window must be a list of four numbers")
            if not all(
                isinstance(v, (int, float)) and not isinstance(v, bool)
                for v in raw_window
            ):
                raise RecipeError("window must be a list of four numbers")
            window = Window(*(float(v) for v in raw_window))
        curve = data.get("curve")
        if curve is not None and not isinstance(curve, str):
            raise RecipeError("curve must be a catalog name")
        pair = data.get("pair")
        if pair is not None and not isinstance(pair, str):
            raise RecipeError("pair must be a name")
        try:
            return Recipe(
                builder=builder,
                eps=parse_rational_value("eps", data.get("eps", 0)),
                curve=curve,
                params=recipe_params(
                    {key: _parse_param(key, value) for key, value in params.items()}
                ),
                h=_parse_poly("h", data.get("h")),
                shift=shift,
                pair=pair,
                f0=_parse_poly("f0", data.get("f0")),
                g0=_parse_poly("g0", data.get("g0")),
                line=_parse_poly("line", data.get("line")),
                multiplier=_parse_poly("multiply", data.get("multiply")),
                window=window,
            )
        except RecipeError:
            raise
        except PlanarCRNException as error:
            raise RecipeError(str(error))

    @classmethod
    def to_mapping(cls, value: Recipe) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "builder": value.builder.value,
            "eps": format_rational(value.eps),
        }
        if value.curve is not None:
            data["curve"] = value.curve
        if value.h is not None:
            data["h"] = str(value.h)
        if value.shift is not None:
            data["shift"] = [format_rational(v) for v in value.shift]
        if value.pair is not None:
            data["pair"] = value.pair
        for key, poly in (
            ("f0", value.f0),
            ("g0", value.g0),
            ("line", value.line),
            ("multiply", value.multiplier),
        ):
            if poly is not None:
                data[key] = str(poly)
        if value.window is not None:
            data["window"] = list(value.window.bounds)
        if value.params:
            data["params"] = {key: _render_param(v) for key, v in value.params}
        return data

    @classmethod
    def dumps(cls, value: Recipe) -> str:
        return toml.dumps(cls.to_mapping(value))
