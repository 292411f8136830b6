import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import (
    Callable,
    Dict,
    FrozenSet,
    Hashable,
    Iterator,
    List,
    Mapping,
    MutableMapping,
    Optional,
    Sequence,
    Set,
    Tuple,
    TypeVar,
)

from planarcrn.exceptions import (
    BadParams,
    DuplicateReaction,
    EmptyNetwork,
    MissingSpecies,
    NonpositiveRate,
    TrivialReaction,
)
from planarcrn.polynomial import Poly2, RatLike, Var, format_rational


logger: logging.Logger = logging.getLogger(__name__)

# a complex aX + bY as its lattice point (a, b)
Complex = Tuple[int, int]
T = TypeVar("T", bound=Hashable)


def format_complex(complex_: Complex) -> str:
    a, b = complex_
    parts: List[str] = []
    if a > 0:
        parts.append("X" if a == 1 else f"{a}X")
    if b > 0:
        parts.append("Y" if b == 1 else f"{b}Y")
    return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class Reaction:
    alpha: int
    beta: int
    gamma: int
    delta: int
    k: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "k", Fraction(self.k))
        if min(self.alpha, self.beta, self.gamma, self.delta) < 0:
            raise BadParams(f"negative stoichiometric coefficient in {self}")
        if self.source == self.target:
            raise TrivialReaction(str(self))
        if self.k <= 0:
            raise NonpositiveRate(str(self), format_rational(self.k))

    @property
    def source(self) -> Complex:
        return (self.alpha, self.beta)

    @property
    def target(self) -> Complex:
        return (self.gamma, self.delta)

    @property
    def stoichiometry(self) -> Tuple[int, int, int, int]:
        return (self.alpha, self.beta, self.gamma, self.delta)

    def reverse(self, k: RatLike) -> "Reaction":
        return Reaction(self.gamma, self.delta, self.alpha, self.beta, Fraction(k))

    def __str__(self) -> str:
        return (
            f"{format_complex(self.source)} -> {format_complex(self.target)}"
            f" @ {format_rational(self.k)}"
        )


@dataclass(frozen=True)
class Network:
    reactions: Tuple[Reaction, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "reactions", tuple(self.reactions))
        if not self.reactions:
            raise EmptyNetwork()
        seen: Set[Tuple[int, int, int, int]] = set()
        for reaction in self.reactions:
            if reaction.stoichiometry in seen:
                raise DuplicateReaction(str(reaction))
            seen.add(reaction.stoichiometry)

    def __iter__(self) -> Iterator[Reaction]:
        return iter(self.reactions)

    def __len__(self) -> int:
        return len(self.reactions)

    def check_species(self) -> None:
        """
        Raises :class:`MissingSpecies` unless both X and Y take part in
        some reaction, as a reactant or as a product.
        """
        missing = []
        if not any(r.alpha or r.gamma for r in self.reactions):
            missing.append("X")
        if not any(r.beta or r.delta for r in self.reactions):
            missing.append("Y")
        if missing:
            raise MissingSpecies(missing)

    def normalized(self) -> "Network":
        return Network(tuple(sorted(self.reactions, key=lambda r: r.stoichiometry)))

    def complexes(self) -> FrozenSet[Complex]:
        return frozenset(
            complex_
            for reaction in self.reactions
            for complex_ in (reaction.source, reaction.target)
        )

    def merge(self, other: "Network") -> "Network":
        return Network(self.reactions + other.reactions)

    def is_reversible(self) -> bool:
        stoichiometries = {r.stoichiometry for r in self.reactions}
        return all(
            (r.gamma, r.delta, r.alpha, r.beta) in stoichiometries
            for r in self.reactions
        )


@dataclass(frozen=True)
class SystemMeta:
    h: Poly2
    f0: Poly2
    g0: Poly2
    eps: Fraction


@dataclass(frozen=True)
class PlanarSystem:
    f: Poly2
    g: Poly2
    meta: Optional[SystemMeta] = None

    def __post_init__(self) -> None:
        if self.meta is None:
            return
        h, f0, g0, eps = self.meta.h, self.meta.f0, self.meta.g0, self.meta.eps
        xy = Poly2.monomial(1, 1, 1)
        expected_f = h * f0 - xy * h.partial(Var.Y) * eps
        expected_g = h * g0 + xy * h.partial(Var.X) * eps
        if self.f != expected_f or self.g != expected_g:
            raise BadParams("construction record does not reproduce (f, g)")

    @property
    def degree(self) -> int:
        return max(self.f.degree, self.g.degree)

    def is_zero(self) -> bool:
        return self.f.is_zero() and self.g.is_zero()

    def without_meta(self) -> "PlanarSystem":
        return PlanarSystem(self.f, self.g)


@dataclass(frozen=True)
class EGraph:
    nodes: FrozenSet[Complex]
    edges: FrozenSet[Tuple[Complex, Complex]]

    def adjacency(self) -> Dict[Complex, List[Complex]]:
        graph: Dict[Complex, List[Complex]] = {node: [] for node in sorted(self.nodes)}
        for source, target in sorted(self.edges):
            graph[source].append(target)
        return graph


def derive_mass_action(net: Network) -> PlanarSystem:
    f_terms: Dict[Tuple[int, int], Fraction] = {}
    g_terms: Dict[Tuple[int, int], Fraction] = {}
    for r in net:
        monomial = r.source
        f_terms[monomial] = f_terms.get(monomial, Fraction(0)) + r.k * (
            r.gamma - r.alpha
        )
        g_terms[monomial] = g_terms.get(monomial, Fraction(0)) + r.k * (
            r.delta - r.beta
        )
    system = PlanarSystem(Poly2(f_terms), Poly2(g_terms))
    logger.debug(f"derived degree {system.degree} system from {len(net)} reactions")
    return system


def order(net: Network) -> int:
    return max(r.alpha + r.beta for r in net)


def molecularity(net: Network) -> int:
    return max(max(r.alpha + r.beta, r.gamma + r.delta) for r in net)


def egraph(net: Network) -> EGraph:
    return EGraph(
        nodes=net.complexes(),
        edges=frozenset((r.source, r.target) for r in net),
    )


def strongly_connected_components(
    graph: Mapping[T, Sequence[T]]
) -> Sequence[Tuple[T, ...]]:
    """
    Tarjan's algorithm. Components come out in reverse topological order.
    """
    index_counter: List[int] = [0]
    stack: List[T] = []
    on_stack: Set[T] = set()
    lowlinks: MutableMapping[T, int] = {}
    index: MutableMapping[T, int] = {}
    result: List[Tuple[T, ...]] = []

    def strongconnect(node: T) -> None:
        index[node] = index_counter[0]
        lowlinks[node] = index_counter[0]
        index_counter[0] += 1
        stack.append(node)
        on_stack.add(node)

        for successor in graph.get(node, []):
            if successor not in lowlinks:
                strongconnect(successor)
                lowlinks[node] = min(lowlinks[node], lowlinks[successor])
            elif successor in on_stack:
                lowlinks[node] = min(lowlinks[node], index[successor])

        if lowlinks[node] == index[node]:
            component: List[T] = []
            while True:
                successor = stack.pop()
                on_stack.discard(successor)
                component.append(successor)
                if successor == node:
                    break
            result.append(tuple(component))

    for node in graph:
        if node not in lowlinks:
            strongconnect(node)

    return result


def is_weakly_reversible(net: Network) -> bool:
    graph = egraph(net)
    component_of: Dict[Complex, int] = {}
    for number, component in enumerate(
        strongly_connected_components(graph.adjacency())
    ):
        for node in component:
            component_of[node] = number
    return all(
        component_of[source] == component_of[target] for source, target in graph.edges
    )


def multiply_system(sys: PlanarSystem, p: Poly2) -> PlanarSystem:
    return PlanarSystem(sys.f * p, sys.g * p)


def reversibilize(net: Network, eps: RatLike) -> Network:
    eps = Fraction(eps)
    if eps <= 0:
        raise NonpositiveRate("reverse reactions", format_rational(eps))
    present = {r.stoichiometry for r in net}
    added: List[Reaction] = []
    for reaction in net:
        reverse = reaction.reverse(eps)
        if reverse.stoichiometry not in present:
            present.add(reverse.stoichiometry)
            added.append(reverse)
    logger.debug(f"added {len(added)} reverse reactions")
    return Network(net.reactions + tuple(added))


def lotka_volterra_network(
    k1: RatLike = 1, k2: RatLike = 1, k3: RatLike = 1
) -> Network:
    return Network(
        (
            Reaction(1, 0, 2, 0, Fraction(k1)),
            Reaction(1, 1, 0, 2, Fraction(k2)),
            Reaction(0, 1, 0, 0, Fraction(k3)),
        )
    )


def lotka_volterra_invariant(
    k1: float, k2: float, k3: float
) -> Callable[[float, float], float]:
    """
    First integral of the Lotka-Volterra system, constant along each of its
    closed orbits in the positive quadrant.
    """

    def invariant(x: float, y: float) -> float:
        return k2 * (x + y) - k3 * math.log(x) - k1 * math.log(y)

    return invariant
