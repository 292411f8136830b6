"""
Membership in the classes S_n and M_n of planar polynomial systems that are
mass-action systems of some reaction network, and the constructive
realizations that witness membership.

A system ``(f, g)`` with ``f = sum a[i,j] x^i y^j`` and
``g = sum b[i,j] x^i y^j`` of degree at most ``n`` is in S_n when every pure
power of y in ``f`` and every pure power of x in ``g`` has a nonnegative
coefficient. It is in M_n when additionally ``a[i,n-i] + b[i,n-i] <= 0`` for
every monomial of top degree ``n``; those systems are realized by networks of
molecularity at most ``n``.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Tuple

from planarcrn.exceptions import BadParams, EmptyRealization, NotInClass
from planarcrn.network import Network, PlanarSystem, Reaction
from planarcrn.polynomial import format_rational


logger: logging.Logger = logging.getLogger(__name__)

# (which coefficient family, i, j, value); "a+b" marks a top-degree pair
Violation = Tuple[str, int, int, Fraction]


@dataclass(frozen=True)
class ClassReport:
    degree: int
    in_S_n: Mapping[int, bool] = field(default_factory=dict)
    in_M_n: Mapping[int, bool] = field(default_factory=dict)
    violating_coefficients: Tuple[Violation, ...] = ()

    @property
    def passed(self) -> bool:
        return all(self.in_S_n.values()) and all(self.in_M_n.values())

    def merge(self, other: "ClassReport") -> "ClassReport":
        violations = list(self.violating_coefficients)
        violations += [
            v for v in other.violating_coefficients if v not in violations
        ]
        return ClassReport(
            degree=self.degree,
            in_S_n={**self.in_S_n, **other.in_S_n},
            in_M_n={**self.in_M_n, **other.in_M_n},
            violating_coefficients=tuple(violations),
        )

    def to_text(self) -> str:
        lines = [f"degree: {self.degree}"]
        for n, member in sorted(self.in_S_n.items()):
            lines.append(f"S_{n}: {'yes' if member else 'no'}")
        for n, member in sorted(self.in_M_n.items()):
            lines.append(f"M_{n}: {'yes' if member else 'no'}")
        if self.violating_coefficients:
            lines.append("violating coefficients:")
            for which, i, j, value in self.violating_coefficients:
                lines.append(f"  {which}[{i},{j}] = {format_rational(value)}")
        return "\n".join(lines) + "\n"

    def to_kv(self) -> Dict[str, str]:
        values: Dict[str, str] = {"degree": str(self.degree)}
        for n, member in sorted(self.in_S_n.items()):
            values[f"S_{n}"] = str(member).lower()
        for n, member in sorted(self.in_M_n.items()):
            values[f"M_{n}"] = str(member).lower()
        values["violations"] = ";".join(
            f"{which}[{i},{j}]={format_rational(value)}"
            for which, i, j, value in self.violating_coefficients
        )
        return values


def _condition_o_violations(sys: PlanarSystem, n: int) -> List[Violation]:
    violations: List[Violation] = []
    for which, p in (("a", sys.f), ("b", sys.g)):
        for (i, j), value in p:
            if i + j > n:
                violations.append((which, i, j, value))
    for i in range(n + 1):
        a = sys.f.coefficient(0, i)
        if a < 0:
            violations.append(("a", 0, i, a))
        b = sys.g.coefficient(i, 0)
        if b < 0:
            violations.append(("b", i, 0, b))
    return violations


def _check_n(n: int) -> None:
    if n < 1:
        raise BadParams(f"class index n must be at least 1, got {n}")


def is_S_n(sys: PlanarSystem, n: int) -> ClassReport:
    _check_n(n)
    violations = _condition_o_violations(sys, n)
    return ClassReport(
        degree=sys.degree,
        in_S_n={n: not violations},
        violating_coefficients=tuple(violations),
    )


def is_M_n(sys: PlanarSystem, n: int) -> ClassReport:
    _check_n(n)
    s_violations = _condition_o_violations(sys, n)
    m_violations: List[Violation] = []
    for i in range(n + 1):
        total = sys.f.coefficient(i, n - i) + sys.g.coefficient(i, n - i)
        if total > 0:
            m_violations.append(("a+b", i, n - i, total))
    return ClassReport(
        degree=sys.degree,
        in_S_n={n: not s_violations},
        in_M_n={n: not (s_violations or m_violations)},
        violating_coefficients=tuple(s_violations + m_violations),
    )


def _monomial_reactions(
    sys: PlanarSystem, max_degree: int
) -> List[Reaction]:
    # one reaction per monomial of f and of g, below the given degree bound
    reactions: List[Reaction] = []
    for (i, j), a in sys.f:
        if i + j > max_degree:
            continue
        step = 1 if a > 0 else -1
        reactions.append(Reaction(i, j, i + step, j, abs(a)))
    for (i, j), b in sys.g:
        if i + j > max_degree:
            continue
        step = 1 if b > 0 else -1
        reactions.append(Reaction(i, j, i, j + step, abs(b)))
    return reactions


def _top_degree_reactions(i: int, n: int, a: Fraction, b: Fraction) -> List[
    Reaction
]:
    j = n - i
    if i == 0:
        candidates = [(1, j - 1, a), (0, j - 1, -a - b)]
    elif i == n:
        # mirror image of the i = 0 case with X and Y swapped
        candidates = [(i - 1, 1, b), (i - 1, 0, -a - b)]
    elif a >= b:
        candidates = [(i + 1, j - 1, (a - b) / 2), (i - 1, j - 1, (-a - b) / 2)]
    else:
        candidates = [(i - 1, j + 1, (b - a) / 2), (i - 1, j - 1, (-a - b) / 2)]
    return [
        Reaction(i, j, gamma, delta, rate)
        for gamma, delta, rate in candidates
        if rate != 0
    ]


def _with_both_species(reactions: List[Reaction]) -> List[Reaction]:
    # a species absent from every reaction gets a birth and a death at equal
    # rates, which cancel in the derived system
    padded = list(reactions)
    if not any(r.alpha or r.gamma for r in reactions):
        padded += [Reaction(1, 0, 2, 0, 1), Reaction(1, 0, 0, 0, 1)]
    if not any(r.beta or r.delta for r in reactions):
        padded += [Reaction(0, 1, 0, 2, 1), Reaction(0, 1, 0, 0, 1)]
    return padded


def realize_S_n(sys: PlanarSystem) -> Network:
    if sys.is_zero():
        raise EmptyRealization()
    n = max(sys.degree, 1)
    report = is_S_n(sys, n)
    if not report.passed:
        raise NotInClass(f"S_{n}", report)
    network = Network(tuple(_with_both_species(_monomial_reactions(sys, n))))
    logger.debug(f"realized S_{n} system with {len(network)} reactions")
    return network


def realize_M_n(sys: PlanarSystem, n: int) -> Network:
    report = is_M_n(sys, n)
    if not report.passed:
        raise NotInClass(f"M_{n}", report)
    if sys.is_zero():
        raise EmptyRealization()
    reactions = _monomial_reactions(sys, n - 1)
    for i in range(n + 1):
        a = sys.f.coefficient(i, n - i)
        b = sys.g.coefficient(i, n - i)
        if a == 0 and b == 0:
            continue
        reactions += _top_degree_reactions(i, n, a, b)
    network = Network(tuple(_with_both_species(reactions)))
    logger.debug(f"realized M_{n} system with {len(network)} reactions")
    return network
