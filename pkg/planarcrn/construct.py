import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import TYPE_CHECKING, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from planarcrn.exceptions import (
    DegreeError,
    DuplicateDelta,
    EmptyOvalSet,
    NonpositiveDelta,
    ZeroCurve,
)
from planarcrn.network import PlanarSystem, SystemMeta
from planarcrn.polynomial import Poly2, RatLike, Var, format_rational

if TYPE_CHECKING:
    from planarcrn.curves.ovals import OvalSet


logger: logging.Logger = logging.getLogger(__name__)

XY: Poly2 = Poly2.monomial(1, 1, 1)


@dataclass(frozen=True)
class CofactorResult:
    is_invariant: bool
    cofactor: Optional[Poly2] = None


class Stability(Enum):
    STABLE = "Stable"
    UNSTABLE = "Unstable"
    MIXED = "Mixed"


@dataclass(frozen=True)
class StabilityVerdict:
    tags: Tuple[Stability, ...]
    samples: Tuple[np.ndarray, ...]

    def indices(self, tag: Stability) -> List[int]:
        return [index for index, value in enumerate(self.tags) if value == tag]


def build_general(h: Poly2, f0: Poly2, g0: Poly2, eps: RatLike) -> PlanarSystem:
    """
    Builds ``f = h f0 - eps x y h_y`` and ``g = h g0 + eps x y h_x``, which
    keeps ``h = 0`` invariant with cofactor ``f0 h_x + g0 h_y`` for any eps.
    """
    eps = Fraction(eps)
    h_x = h.partial(Var.X)
    h_y = h.partial(Var.Y)
    f = h * f0 - XY * h_y * eps
    g = h * g0 + XY * h_x * eps
    if f.is_zero() and g.is_zero():
        logger.warning("construction produced the zero system")
    return PlanarSystem(f, g, SystemMeta(h=h, f0=f0, g0=g0, eps=eps))


def build_gradient(h: Poly2, eps: RatLike) -> PlanarSystem:
    f0 = -XY * h.partial(Var.X)
    g0 = -XY * h.partial(Var.Y)
    system = build_general(h, f0, g0, eps)
    logger.debug(f"gradient construction of degree {system.degree}")
    return system


def build_christopher(h: Poly2, line: Poly2) -> PlanarSystem:
    # constant and zero lines are accepted, line = 0 gives (h, h)
    if line.degree > 1:
        raise DegreeError("the line", 1, line.degree)
    return PlanarSystem(
        h + line * h.partial(Var.Y),
        h - line * h.partial(Var.X),
    )


def hi_curve(delta: RatLike) -> Poly2:
    delta = Fraction(delta)
    return Poly2(
        {
            (2, 2): 1,
            (2, 1): 1,
            (1, 2): 1,
            (2, 0): 1,
            (0, 2): 1,
            (1, 0): 1,
            (0, 1): 1,
            (0, 0): 1,
            (1, 1): -(8 + delta),
        }
    )


def product_curve(deltas: Sequence[RatLike]) -> Poly2:
    values = [Fraction(delta) for delta in deltas]
    if not values:
        raise NonpositiveDelta("an empty list")
    seen = set()
    for delta in values:
        if delta <= 0:
            raise NonpositiveDelta(format_rational(delta))
        if delta in seen:
            raise DuplicateDelta(format_rational(delta))
        seen.add(delta)
    result = Poly2.constant(1)
    for delta in values:
        result = result * hi_curve(delta)
    return result


def check_invariant_curve(h: Poly2, sys: PlanarSystem) -> CofactorResult:
    if h.is_zero():
        raise ZeroCurve()
    flow = h.partial(Var.X) * sys.f + h.partial(Var.Y) * sys.g
    cofactor = flow.try_div_exact(h)
    if cofactor is None:
        return CofactorResult(is_invariant=False)
    return CofactorResult(is_invariant=True, cofactor=cofactor)


def transversality_field(h: Poly2, f0: Poly2, g0: Poly2) -> Poly2:
    return f0 * h.partial(Var.X) + g0 * h.partial(Var.Y)


def classify_transversality(
    h: Poly2, f0: Poly2, g0: Poly2, ovals: "OvalSet", tau: float
) -> StabilityVerdict:
    if not ovals.ovals:
        raise EmptyOvalSet()
    field = transversality_field(h, f0, g0).lower()
    tags: List[Stability] = []
    samples: List[np.ndarray] = []
    for oval in ovals.ovals:
        # the closing vertex repeats the first one
        points = oval[:-1]
        values = field.grid(points[:, 0], points[:, 1])
        samples.append(values)
        scale = float(np.max(np.abs(values))) if len(values) else 0.0
        if scale == 0.0:
            tags.append(Stability.MIXED)
            continue
        normalized = values / scale
        if np.all(normalized < -tau):
            tags.append(Stability.STABLE)
        elif np.all(normalized > tau):
            tags.append(Stability.UNSTABLE)
        else:
            tags.append(Stability.MIXED)
    logger.debug(f"transversality verdicts: {[tag.value for tag in tags]}")
    return StabilityVerdict(tags=tuple(tags), samples=tuple(samples))


def shift_and_multiply(
    sys: PlanarSystem, dx: RatLike, dy: RatLike, factor: Poly2
) -> PlanarSystem:
    return PlanarSystem(
        sys.f.shift(dx, dy) * factor,
        sys.g.shift(dx, dy) * factor,
    )


UNIT_SQUARE_F0: Poly2 = Poly2.parse("1 - x + y - x y")
UNIT_SQUARE_G0: Poly2 = Poly2.parse("1 + x - y - x y")

# (f0, g0) pairs that recipes and presets refer to by name
NAMED_PAIRS: Mapping[str, Tuple[Poly2, Poly2]] = {
    # vanishes only at (1, 1) in the positive quadrant
    "unit_square": (UNIT_SQUARE_F0, UNIT_SQUARE_G0),
    "linear": (Poly2.parse("1 - x"), Poly2.parse("x - y")),
}
