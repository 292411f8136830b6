"""
Catalog of the named algebraic curves and closed-form facts about them.

The quartic family

    q(x, y) = 16 (x^4 + y^4) - 25 (x^2 + y^2) + mu x^2 y^2 + 9

meets the axes in the same eight points for every mu and has one oval for
mu <= -32, two nested ovals for -32 < mu < 337/9, and four ovals for
mu > 337/9. At mu = 337/9 the curve is connected with four crunodes.
"""
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Mapping, Optional, Tuple, Union

from planarcrn import config
from planarcrn.construct import hi_curve, product_curve
from planarcrn.curves.ovals import OvalSet, Window, extract_zero_set
from planarcrn.exceptions import BadParams, NonpositiveDelta, UnknownCurve
from planarcrn.polynomial import Poly2, RatLike, format_rational, parse_rational


logger: logging.Logger = logging.getLogger(__name__)

ParamValue = Union[Fraction, Tuple[Fraction, ...]]
Point = Tuple[Fraction, Fraction]

CRUNODE_MU = Fraction(337, 9)


@dataclass(frozen=True)
class CurveSpec:
    name: str
    poly: Poly2
    params: Tuple[Tuple[str, ParamValue], ...]
    window: Window
    expected_ovals: Optional[int] = None

    def param(self, key: str) -> ParamValue:
        for name, value in self.params:
            if name == key:
                return value
        raise BadParams(f"curve {self.name} has no parameter {key}")

    def rational_param(self, key: str) -> Fraction:
        value = self.param(key)
        if isinstance(value, tuple):
            raise BadParams(f"parameter {key} of {self.name} is a list")
        return value

    def describe_params(self) -> str:
        rendered = []
        for name, value in self.params:
            if isinstance(value, tuple):
                joined = ",".join(format_rational(v) for v in value)
                rendered.append(f"{name}={joined}")
            else:
                rendered.append(f"{name}={format_rational(value)}")
        return " ".join(rendered)


def q_curve(mu: RatLike) -> Poly2:
    return Poly2(
        {
            (4, 0): 16,
            (0, 4): 16,
            (2, 0): -25,
            (0, 2): -25,
            (2, 2): Fraction(mu),
            (0, 0): 9,
        }
    )


ELLIPSE: Poly2 = Poly2.parse("10 x^2 - 12 x y + 4 y^2 + 20 x - 16 y + 19")
THREE_OVAL_QUARTIC: Poly2 = Poly2.parse(
    "x^2 y^2 - 9/1000 x^3 y - 9/1000 x y^3 + 6/10000 x^3 + 6/10000 y^3"
    " + 2/50 x^2 y + 2/50 x y^2 - 2 x y + 934/1000"
)
CUBIC: Poly2 = Poly2.parse("x^2 + x y^2 + y - 4 x y")
H9: Poly2 = Poly2.parse("x^2 y^2 + x^2 y + x y^2 + x^2 + y^2 + x + y + 1 - 9 x y")


def harnack_bound(degree: int) -> int:
    """
    Maximal number of connected components of a real algebraic curve of the
    given degree.
    """
    return 1 + (degree - 1) * (degree - 2) // 2


def oval_count_for_mu(mu: RatLike) -> Optional[int]:
    mu = Fraction(mu)
    if mu <= -32:
        return 1
    if mu < CRUNODE_MU:
        return 2
    if mu == CRUNODE_MU:
        return None
    return 4


def _outer_diagonal_root(mu: Fraction) -> Optional[float]:
    if not (-32 < mu < CRUNODE_MU):
        return None
    return math.sqrt((25 + math.sqrt(337 - 9 * float(mu))) / (32 + float(mu)))


def _q_window(mu: Fraction) -> Window:
    x_min, x_max, y_min, y_max = config.get_window_q()
    outer = _outer_diagonal_root(mu)
    if outer is not None:
        # the outer oval reaches far along the diagonal as mu nears -32
        reach = 1.15 * outer
        x_min, y_min = min(x_min, -reach), min(y_min, -reach)
        x_max, y_max = max(x_max, reach), max(y_max, reach)
    return Window(x_min, x_max, y_min, y_max)


def _shifted_window() -> Window:
    return Window(*config.get_window_shifted())


def _require(params: Mapping[str, ParamValue], key: str) -> Fraction:
    if key not in params:
        raise BadParams(f"missing parameter {key}")
    value = params[key]
    if isinstance(value, tuple):
        raise BadParams(f"parameter {key} must be a single number")
    return Fraction(value)


def _require_list(params: Mapping[str, ParamValue], key: str) -> Tuple[Fraction, ...]:
    if key not in params:
        raise BadParams(f"missing parameter {key}")
    value = params[key]
    if not isinstance(value, tuple):
        return (Fraction(value),)
    return tuple(Fraction(v) for v in value)


def _ellipse(params: Mapping[str, ParamValue]) -> CurveSpec:
    return CurveSpec("ellipse", ELLIPSE, (), Window(0.0, 4.0, 2.5, 7.5), 1)


def _three_oval(params: Mapping[str, ParamValue]) -> CurveSpec:
    # the ovals spread over two decades along xy = 1
    window = Window(0.05, 20.0, 0.05, 20.0, log_scale=True)
    return CurveSpec("threeoval", THREE_OVAL_QUARTIC, (), window, 3)


def _cubic(params: Mapping[str, ParamValue]) -> CurveSpec:
    return CurveSpec("cubic", CUBIC, (), Window(0.0, 4.0, 0.0, 4.0), 1)


def _h9(params: Mapping[str, ParamValue]) -> CurveSpec:
    return CurveSpec("h9", H9, (), _shifted_window(), 1)


def _h_i(params: Mapping[str, ParamValue]) -> CurveSpec:
    delta = _require(params, "delta")
    if delta <= 0:
        raise NonpositiveDelta(format_rational(delta))
    return CurveSpec("h_i", hi_curve(delta), (("delta", delta),), _shifted_window(), 1)


def _product(params: Mapping[str, ParamValue]) -> CurveSpec:
    deltas = _require_list(params, "deltas")
    return CurveSpec(
        "product",
        product_curve(deltas),
        (("deltas", deltas),),
        _shifted_window(),
        len(deltas),
    )


def _q(params: Mapping[str, ParamValue]) -> CurveSpec:
    mu = _require(params, "mu")
    return CurveSpec(
        "q", q_curve(mu), (("mu", mu),), _q_window(mu), oval_count_for_mu(mu)
    )


def _q_shifted(params: Mapping[str, ParamValue]) -> CurveSpec:
    mu = _require(params, "mu")
    dx = Fraction(params.get("dx", Fraction(2)))  # pyre-ignore[6]
    dy = Fraction(params.get("dy", Fraction(2)))  # pyre-ignore[6]
    expected = oval_count_for_mu(mu) if mu >= 0 else None
    return CurveSpec(
        "q_shifted",
        q_curve(mu).shift(dx, dy),
        (("mu", mu), ("dx", dx), ("dy", dy)),
        _shifted_window(),
        expected,
    )


CATALOG: Mapping[str, Callable[[Mapping[str, ParamValue]], CurveSpec]] = {
    "ellipse": _ellipse,
    "threeoval": _three_oval,
    "cubic": _cubic,
    "h9": _h9,
    "h_i": _h_i,
    "product": _product,
    "q": _q,
    "q_shifted": _q_shifted,
}

CATALOG_PARAMS: Mapping[str, Tuple[str, ...]] = {
    "ellipse": (),
    "threeoval": (),
    "cubic": (),
    "h9": (),
    "h_i": ("delta",),
    "product": ("deltas",),
    "q": ("mu",),
    "q_shifted": ("mu", "dx", "dy"),
}


def parse_param_text(key: str, text: str) -> ParamValue:
    """
    A parameter written as a rational, or as a comma separated list of them.
    """
    try:
        numbers = tuple(parse_rational(part) for part in text.split(","))
    except ValueError as error:
        raise BadParams(f"parameter {key}: {error}")
    return numbers if len(numbers) > 1 else numbers[0]


def catalog(
    name: str,
    params: Optional[Mapping[str, ParamValue]] = None,
    window: Optional[Window] = None,
) -> CurveSpec:
    builder = CATALOG.get(name)
    if builder is None:
        raise UnknownCurve(name)
    params = params or {}
    unknown = set(params) - set(CATALOG_PARAMS[name])
    if unknown:
        raise BadParams(f"curve {name} takes no parameter {', '.join(sorted(unknown))}")
    spec = builder(params)
    if window is not None:
        spec = CurveSpec(spec.name, spec.poly, spec.params, window, spec.expected_ovals)
    return spec


def extract_ovals(spec: CurveSpec, resolution: int) -> OvalSet:
    ovals = extract_zero_set(spec.poly, spec.window, resolution)
    if spec.expected_ovals is not None and ovals.count != spec.expected_ovals:
        logger.warning(
            f"{spec.name} {spec.describe_params()}: expected {spec.expected_ovals}"
            f" ovals, found {ovals.count} at resolution {ovals.resolution}"
        )
    return ovals


def _require_q_family(spec: CurveSpec) -> None:
    if spec.name not in ("q", "q_shifted"):
        raise BadParams(f"{spec.name} is not a member of the quartic family")


def axis_intersections(spec: CurveSpec) -> List[Point]:
    """
    The points where q meets the coordinate axes: the roots of
    16 t^4 - 25 t^2 + 9 = (t^2 - 1)(16 t^2 - 9) on each axis.
    """
    _require_q_family(spec)
    roots = [Fraction(-1), Fraction(-3, 4), Fraction(3, 4), Fraction(1)]
    points: List[Point] = [(root, Fraction(0)) for root in roots]
    points += [(Fraction(0), root) for root in roots]
    if spec.name == "q_shifted":
        dx = spec.rational_param("dx")
        dy = spec.rational_param("dy")
        points = [(x + dx, y + dy) for x, y in points]
    return points


def diagonal_roots(spec: CurveSpec) -> List[float]:
    """
    Real roots of q(x, x) = (32 + mu) x^4 - 50 x^2 + 9, in increasing order.
    A double root at mu = 337/9 is reported once.
    """
    _require_q_family(spec)
    mu = spec.rational_param("mu")
    if mu == -32:
        root = 3 / (5 * math.sqrt(2))
        return [-root, root]
    if mu > CRUNODE_MU:
        return []
    discriminant = math.sqrt(337 - 9 * float(mu))
    squares = [
        (25 + sign * discriminant) / (32 + float(mu)) for sign in (-1.0, 1.0)
    ]
    magnitudes = sorted({math.sqrt(s) for s in squares if s > 0})
    return [-m for m in reversed(magnitudes)] + magnitudes


def hi_x_range(delta: RatLike) -> Tuple[float, float]:
    delta = Fraction(delta)
    if delta <= 0:
        raise NonpositiveDelta(format_rational(delta))
    d = float(delta)
    spread = math.sqrt(d * (12 + d))
    return (1 + (d - spread) / 6, 1 + (d + spread) / 6)


def catalog_summary() -> Dict[str, Tuple[str, ...]]:
    return dict(CATALOG_PARAMS)
