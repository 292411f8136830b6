"""
Exact sparse polynomials in two variables over the rationals.

Every identity checked by the toolkit (cofactors, class conditions,
realization roundtrips) is verified on :class:`Poly2` values, whose
coefficients are :class:`fractions.Fraction` and therefore exact. Floating
point only enters through :meth:`Poly2.eval_f64`, :meth:`Poly2.eval_grid`
and :class:`LoweredPoly2`, which are used by the numerical modules.
"""
import re
from enum import Enum
from fractions import Fraction
from math import comb
from types import MappingProxyType
from typing import (
    Dict,
    Iterator,
    List,
    Mapping,
    Optional,
    Sequence,
    Tuple,
    Union,
)

import numpy as np

from planarcrn.exceptions import NotDivisible, PolynomialSyntaxError, ZeroDivisor


Rat = Fraction
Monomial = Tuple[int, int]
RatLike = Union[int, Fraction]


class Var(Enum):
    X = "x"
    Y = "y"


def _grlex_key(monomial: Monomial) -> Tuple[int, int]:
    # graded lexicographic order with x > y
    i, j = monomial
    return (i + j, i)


class LoweredPoly2:
    """
    Floating point evaluation form of a :class:`Poly2`, stored as a dense
    table of coefficients indexed by the power of x and then the power of y.
    """

    __slots__ = ("rows",)

    def __init__(self, rows: Sequence[Sequence[float]]) -> None:
        self.rows: Tuple[Tuple[float, ...], ...] = tuple(tuple(row) for row in rows)

    def __call__(self, x: float, y: float) -> float:
        total = 0.0
        for row in reversed(self.rows):
            inner = 0.0
            for coefficient in reversed(row):
                inner = inner * y + coefficient
            total = total * x + inner
        return total

    def grid(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        xs = np.asarray(xs, dtype=np.float64)
        ys = np.asarray(ys, dtype=np.float64)
        total = np.zeros(np.broadcast(xs, ys).shape, dtype=np.float64)
        for row in reversed(self.rows):
            inner = np.zeros_like(total)
            for coefficient in reversed(row):
                inner = inner * ys + coefficient
            total = total * xs + inner
        return total


class Poly2:
    __slots__ = ("_terms", "_lowered")

    def __init__(self, terms: Optional[Mapping[Monomial, RatLike]] = None) -> None:
        cleaned: Dict[Monomial, Fraction] = {}
        for (i, j), coefficient in (terms or {}).items():
            if i < 0 or j < 0:
                raise ValueError(f"negative exponent in monomial {(i, j)}")
            value = Fraction(coefficient)
            if value != 0:
                cleaned[(i, j)] = value
        self._terms: Dict[Monomial, Fraction] = cleaned
        self._lowered: Optional[LoweredPoly2] = None

    @classmethod
    def constant(cls, value: RatLike) -> "Poly2":
        return cls({(0, 0): value})

    @classmethod
    def monomial(cls, coefficient: RatLike, i: int, j: int) -> "Poly2":
        return cls({(i, j): coefficient})

    @classmethod
    def x(cls) -> "Poly2":
        return cls({(1, 0): 1})

    @classmethod
    def y(cls) -> "Poly2":
        return cls({(0, 1): 1})

    @classmethod
    def zero(cls) -> "Poly2":
        return cls()

    @classmethod
    def parse(cls, text: str) -> "Poly2":
        return _PolynomialParser(text).parse()

    @property
    def terms(self) -> Mapping[Monomial, Fraction]:
        return MappingProxyType(self._terms)

    @property
    def degree(self) -> int:
        if not self._terms:
            return -1
        return max(i + j for i, j in self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def coefficient(self, i: int, j: int) -> Fraction:
        return self._terms.get((i, j), Fraction(0))

    def monomials(self) -> List[Monomial]:
        return sorted(self._terms, key=_grlex_key, reverse=True)

    def leading_monomial(self) -> Monomial:
        if not self._terms:
            raise ValueError("the zero polynomial has no leading monomial")
        return max(self._terms, key=_grlex_key)

    def homogeneous_part(self, degree: int) -> "Poly2":
        return Poly2(
            {(i, j): c for (i, j), c in self._terms.items() if i + j == degree}
        )

    def __iter__(self) -> Iterator[Tuple[Monomial, Fraction]]:
        for monomial in self.monomials():
            yield monomial, self._terms[monomial]

    def __len__(self) -> int:
        return len(self._terms)

    def __add__(self, other: Union["Poly2", RatLike]) -> "Poly2":
        other = _coerce(other)
        terms = dict(self._terms)
        for monomial, coefficient in other._terms.items():
            terms[monomial] = terms.get(monomial, Fraction(0)) + coefficient
        return Poly2(terms)

    __radd__ = __add__

    def __neg__(self) -> "Poly2":
        return Poly2({m: -c for m, c in self._terms.items()})

    def __sub__(self, other: Union["Poly2", RatLike]) -> "Poly2":
        return self + (-_coerce(other))

    def __rsub__(self, other: Union["Poly2", RatLike]) -> "Poly2":
        return _coerce(other) - self

    def __mul__(self, other: Union["Poly2", RatLike]) -> "Poly2":
        other = _coerce(other)
        terms: Dict[Monomial, Fraction] = {}
        for (i1, j1), c1 in self._terms.items():
            for (i2, j2), c2 in other._terms.items():
                key = (i1 + i2, j1 + j2)
                terms[key] = terms.get(key, Fraction(0)) + c1 * c2
        return Poly2(terms)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "Poly2":
        if exponent < 0:
            raise ValueError("negative powers are not polynomials")
        result = Poly2.constant(1)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Poly2.constant(other)
        if not isinstance(other, Poly2):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __repr__(self) -> str:
        return f"Poly2({str(self)!r})"

    def __str__(self) -> str:
        return format_polynomial(self)

    def __getstate__(self) -> Tuple[Dict[Monomial, Fraction]]:
        # wrapped so the zero polynomial still round-trips through pickle
        return (self._terms,)

    def __setstate__(self, state: Tuple[Dict[Monomial, Fraction]]) -> None:
        self._terms = state[0]
        self._lowered = None

    def partial(self, var: Var) -> "Poly2":
        terms: Dict[Monomial, Fraction] = {}
        for (i, j), coefficient in self._terms.items():
            if var == Var.X and i > 0:
                terms[(i - 1, j)] = coefficient * i
            elif var == Var.Y and j > 0:
                terms[(i, j - 1)] = coefficient * j
        return Poly2(terms)

    def _rows(self) -> Dict[int, Dict[int, Fraction]]:
        rows: Dict[int, Dict[int, Fraction]] = {}
        for (i, j), coefficient in self._terms.items():
            rows.setdefault(i, {})[j] = coefficient
        return rows

    def eval(self, x: RatLike, y: RatLike) -> Fraction:
        x = Fraction(x)
        y = Fraction(y)
        rows = self._rows()
        if not rows:
            return Fraction(0)
        total = Fraction(0)
        for i in range(max(rows), -1, -1):
            row = rows.get(i, {})
            inner = Fraction(0)
            for j in range(max(row, default=0), -1, -1):
                inner = inner * y + row.get(j, 0)
            total = total * x + inner
        return total

    def lower(self) -> LoweredPoly2:
        if self._lowered is None:
            rows = self._rows()
            dense: List[List[float]] = []
            for i in range(max(rows, default=-1) + 1):
                row = rows.get(i, {})
                dense.append(
                    [float(row.get(j, 0)) for j in range(max(row, default=-1) + 1)]
                )
            self._lowered = LoweredPoly2(dense)
        return self._lowered

    def eval_f64(self, x: float, y: float) -> float:
        return self.lower()(x, y)

    def eval_grid(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        return self.lower().grid(xs, ys)

    def shift(self, dx: RatLike, dy: RatLike) -> "Poly2":
        """
        Returns ``p(x - dx, y - dy)`` expanded into monomials.
        """
        dx = Fraction(dx)
        dy = Fraction(dy)
        terms: Dict[Monomial, Fraction] = {}
        for (i, j), coefficient in self._terms.items():
            for a in range(i + 1):
                x_part = comb(i, a) * (-dx) ** (i - a)
                if x_part == 0:
                    continue
                for b in range(j + 1):
                    y_part = comb(j, b) * (-dy) ** (j - b)
                    if y_part == 0:
                        continue
                    key = (a, b)
                    terms[key] = (
                        terms.get(key, Fraction(0)) + coefficient * x_part * y_part
                    )
        return Poly2(terms)

    def substitute(self, x: "Poly2", y: "Poly2") -> "Poly2":
        result = Poly2()
        for (i, j), coefficient in self._terms.items():
            result = result + (x ** i) * (y ** j) * coefficient
        return result

    def try_div_exact(self, den: "Poly2") -> Optional["Poly2"]:
        """
        Divides by ``den`` under the graded lexicographic order and returns
        the quotient when the remainder vanishes, ``None`` otherwise.
        """
        if den.is_zero():
            raise ZeroDivisor()
        lead = den.leading_monomial()
        lead_coefficient = den._terms[lead]
        remaining = dict(self._terms)
        quotient: Dict[Monomial, Fraction] = {}
        while remaining:
            monomial = max(remaining, key=_grlex_key)
            i, j = monomial
            if i < lead[0] or j < lead[1]:
                # the leading term goes to the remainder, which must be zero
                return None
            factor_monomial = (i - lead[0], j - lead[1])
            factor = remaining[monomial] / lead_coefficient
            quotient[factor_monomial] = factor
            for (di, dj), c in den._terms.items():
                key = (factor_monomial[0] + di, factor_monomial[1] + dj)
                value = remaining.get(key, Fraction(0)) - factor * c
                if value == 0:
                    remaining.pop(key, None)
                else:
                    remaining[key] = value
        return Poly2(quotient)

    def div_exact(self, den: "Poly2") -> "Poly2":
        quotient = self.try_div_exact(den)
        if quotient is None:
            raise NotDivisible(str(self), str(den))
        return quotient


def _coerce(value: Union[Poly2, RatLike]) -> Poly2:
    if isinstance(value, Poly2):
        return value
    if isinstance(value, (int, Fraction)):
        return Poly2.constant(value)
    raise TypeError(f"cannot use {type(value).__name__} as a polynomial")


def gradient(p: Poly2) -> Tuple[Poly2, Poly2]:
    return p.partial(Var.X), p.partial(Var.Y)


def format_rational(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    if not re.fullmatch(r"[+-]?\d+(/\d+)?", text):
        raise ValueError(f"{repr(text)} is not an integer or a fraction p/q")
    value = Fraction(text)
    return value


def _format_monomial(i: int, j: int) -> str:
    factors = []
    if i > 0:
        factors.append("x" if i == 1 else f"x^{i}")
    if j > 0:
        factors.append("y" if j == 1 else f"y^{j}")
    return " ".join(factors)


def format_polynomial(p: Poly2) -> str:
    if p.is_zero():
        return "0"
    pieces: List[str] = []
    for (i, j), coefficient in p:
        sign = "-" if coefficient < 0 else "+"
        magnitude = abs(coefficient)
        monomial = _format_monomial(i, j)
        if not monomial:
            body = format_rational(magnitude)
        elif magnitude == 1:
            body = monomial
        else:
            body = f"{format_rational(magnitude)} {monomial}"
        if not pieces:
            pieces.append(body if sign == "+" else f"-{body}")
        else:
            pieces.append(f"{sign} {body}")
    return " ".join(pieces)


class _PolynomialParser:
    def __init__(self, text: str) -> None:
        self.text = text
        # whitespace carries no meaning in the format
        self.source = re.sub(r"\s+", "", text)
        self.position = 0

    def error(self, message: str) -> PolynomialSyntaxError:
        return PolynomialSyntaxError(self.text, self.position, message)

    def peek(self) -> str:
        if self.position < len(self.source):
            return self.source[self.position]
        return ""

    def integer(self) -> int:
        match = re.match(r"\d+", self.source[self.position :])
        if match is None:
            raise self.error("expected an integer")
        self.position += len(match.group(0))
        return int(match.group(0))

    def parse(self) -> Poly2:
        if not self.source:
            raise self.error("empty polynomial")
        result = Poly2()
        first = True
        while self.position < len(self.source):
            sign = 1
            if self.peek() in "+-":
                sign = -1 if self.peek() == "-" else 1
                self.position += 1
            elif not first:
                raise self.error(f"expected + or -, got {repr(self.peek())}")
            result = result + self.term() * sign
            first = False
        return result

    def term(self) -> Poly2:
        coefficient = Fraction(1)
        seen_anything = False
        if self.peek().isdigit():
            numerator = self.integer()
            denominator = 1
            if self.peek() == "/":
                self.position += 1
                denominator = self.integer()
                if denominator == 0:
                    raise self.error("zero denominator")
            coefficient = Fraction(numerator, denominator)
            seen_anything = True
        i = j = 0
        while self.peek() in ("x", "y", "*"):
            if self.peek() == "*":
                self.position += 1
                continue
            var = self.peek()
            self.position += 1
            power = 1
            if self.peek() == "^":
                self.position += 1
                power = self.integer()
            if var == "x":
                i += power
            else:
                j += power
            seen_anything = True
        if not seen_anything:
            raise self.error("expected a coefficient or a monomial")
        return Poly2.monomial(coefficient, i, j)
