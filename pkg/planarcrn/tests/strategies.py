from fractions import Fraction
from typing import Callable, Dict, Tuple

from hypothesis import strategies as st

from planarcrn.network import Network, PlanarSystem, Reaction
from planarcrn.polynomial import Poly2


rationals: st.SearchStrategy[Fraction] = st.fractions(
    min_value=-12, max_value=12, max_denominator=7
)
nonzero_rationals: st.SearchStrategy[Fraction] = rationals.filter(lambda v: v != 0)


def polynomials(max_degree: int = 3, max_terms: int = 6) -> st.SearchStrategy[Poly2]:
    monomials = st.tuples(
        st.integers(0, max_degree), st.integers(0, max_degree)
    ).filter(lambda m: m[0] + m[1] <= max_degree)
    return st.dictionaries(monomials, rationals, max_size=max_terms).map(Poly2)


def nonzero_polynomials(max_degree: int = 3) -> st.SearchStrategy[Poly2]:
    return polynomials(max_degree).filter(lambda p: not p.is_zero())


def _with_terms(
    p: Poly2, adjust: Callable[[int, int, Fraction], Fraction]
) -> Poly2:
    terms: Dict[Tuple[int, int], Fraction] = {}
    for (i, j), value in p:
        terms[(i, j)] = adjust(i, j, value)
    return Poly2(terms)


def _condition_o(f: Poly2, g: Poly2) -> Tuple[Poly2, Poly2]:
    # pure powers of y in f and of x in g made nonnegative
    f = _with_terms(f, lambda i, j, v: abs(v) if i == 0 else v)
    g = _with_terms(g, lambda i, j, v: abs(v) if j == 0 else v)
    return f, g


@st.composite
def s_n_systems(draw: Callable, max_degree: int = 5) -> PlanarSystem:  # pyre-ignore[24]
    f, g = _condition_o(
        draw(polynomials(max_degree, 8)), draw(polynomials(max_degree, 8))
    )
    system = PlanarSystem(f, g)
    if system.is_zero():
        system = PlanarSystem(Poly2.constant(1), Poly2.zero())
    return system


@st.composite
def m_n_systems(draw: Callable, n: int) -> PlanarSystem:  # pyre-ignore[24]
    f, g = _condition_o(draw(polynomials(n, 8)), draw(polynomials(n, 8)))
    f_terms = dict(f.terms)
    g_terms = dict(g.terms)
    for i in range(n + 1):
        key = (i, n - i)
        a = f_terms.get(key, Fraction(0))
        b = g_terms.get(key, Fraction(0))
        if a + b > 0:
            # lower b, or a where b is a pure power of x and must stay put
            if i == n:
                f_terms[key] = -b
            else:
                g_terms[key] = -a
    system = PlanarSystem(Poly2(f_terms), Poly2(g_terms))
    if system.is_zero():
        system = PlanarSystem(Poly2.monomial(1, 0, 0), Poly2.monomial(-1, 0, 1))
    return system


@st.composite
def networks(draw: Callable, max_order: int = 3) -> Network:  # pyre-ignore[24]
    complexes = st.tuples(
        st.integers(0, max_order), st.integers(0, max_order)
    ).filter(lambda c: c[0] + c[1] <= max_order)
    rates = st.fractions(min_value=Fraction(1, 7), max_value=12, max_denominator=7)
    reactions = draw(
        st.lists(
            st.tuples(complexes, complexes, rates).filter(lambda r: r[0] != r[1]),
            min_size=1,
            max_size=8,
            unique_by=lambda r: (r[0], r[1]),
        )
    )
    return Network(
        tuple(Reaction(a, b, c, d, k) for (a, b), (c, d), k in reactions)
    )
