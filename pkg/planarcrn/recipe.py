import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Mapping, Optional, Tuple

from pyre_extensions import none_throws

from planarcrn import config
from planarcrn.construct import (
    NAMED_PAIRS,
    build_christopher,
    build_general,
    build_gradient,
)
from planarcrn.curves import CurveSpec, ParamValue, catalog
from planarcrn.curves.ovals import Window
from planarcrn.exceptions import RecipeError
from planarcrn.network import PlanarSystem, multiply_system
from planarcrn.polynomial import Poly2


logger: logging.Logger = logging.getLogger(__name__)


class Builder(Enum):
    GENERAL = "general"
    GRADIENT = "gradient"
    CHRISTOPHER = "christopher"


@dataclass(frozen=True)
class Recipe:
    """
    Everything needed to build a system with a prescribed invariant curve:
    the curve (a catalog entry or an explicit polynomial, optionally
    translated), the builder and its inputs, and an optional polynomial the
    finished system is multiplied by.
    """

    builder: Builder
    eps: Fraction = Fraction(0)
    curve: Optional[str] = None
    params: Tuple[Tuple[str, ParamValue], ...] = ()
    h: Optional[Poly2] = None
    shift: Optional[Tuple[Fraction, Fraction]] = None
    pair: Optional[str] = None
    f0: Optional[Poly2] = None
    g0: Optional[Poly2] = None
    line: Optional[Poly2] = None
    multiplier: Optional[Poly2] = None
    window: Optional[Window] = None

    def __post_init__(self) -> None:
        if (self.curve is None) == (self.h is None):
            raise RecipeError("give exactly one of curve or h")
        if self.h is not None and self.params:
            raise RecipeError("curve parameters need a catalog curve")
        if self.builder == Builder.GENERAL:
            explicit = self.f0 is not None or self.g0 is not None
            if self.pair is not None and explicit:
                raise RecipeError("give either pair or f0 and g0, not both")
            if self.pair is None and (self.f0 is None or self.g0 is None):
                raise RecipeError("the general builder needs f0 and g0, or a pair")
            if self.pair is not None and self.pair not in NAMED_PAIRS:
                raise RecipeError(
                    f"unknown pair {repr(self.pair)}, known pairs are "
                    + ", ".join(sorted(NAMED_PAIRS))
                )
        elif self.pair is not None or self.f0 is not None or self.g0 is not None:
            raise RecipeError(f"the {self.builder.value} builder takes no f0 or g0")
        if self.builder == Builder.CHRISTOPHER:
            if self.line is None:
                raise RecipeError("the christopher builder needs a line")
        elif self.line is not None:
            raise RecipeError(f"the {self.builder.value} builder takes no line")

    def curve_spec(self) -> CurveSpec:
        if self.curve is not None:
            spec = catalog(self.curve, dict(self.params))
        else:
            spec = CurveSpec(
                "custom",
                none_throws(self.h),
                (),
                Window(*config.get_window_shifted()),
            )
        if self.shift is not None:
            dx, dy = self.shift
            window = spec.window
            spec = CurveSpec(
                spec.name,
                spec.poly.shift(dx, dy),
                spec.params + (("dx", dx), ("dy", dy)),
                Window(
                    window.x_min + float(dx),
                    window.x_max + float(dx),
                    window.y_min + float(dy),
                    window.y_max + float(dy),
                    window.log_scale,
                ),
                spec.expected_ovals,
            )
        if self.window is not None:
            spec = CurveSpec(
                spec.name, spec.poly, spec.params, self.window, spec.expected_ovals
            )
        return spec

    def transversal_pair(self) -> Tuple[Poly2, Poly2]:
        if self.pair is not None:
            return NAMED_PAIRS[self.pair]
        return none_throws(self.f0), none_throws(self.g0)


def build_from_recipe(recipe: Recipe) -> PlanarSystem:
    h = recipe.curve_spec().poly
    if recipe.builder == Builder.GRADIENT:
        system = build_gradient(h, recipe.eps)
    elif recipe.builder == Builder.GENERAL:
        f0, g0 = recipe.transversal_pair()
        system = build_general(h, f0, g0, recipe.eps)
    else:
        system = build_christopher(h, none_throws(recipe.line))
    if recipe.multiplier is not None:
        system = multiply_system(system, recipe.multiplier)
    logger.debug(
        f"{recipe.builder.value} construction on a degree {h.degree} curve"
        f" gave a degree {system.degree} system"
    )
    return system


def recipe_params(
    values: Mapping[str, ParamValue]
) -> Tuple[Tuple[str, ParamValue], ...]:
    return tuple(sorted(values.items()))
