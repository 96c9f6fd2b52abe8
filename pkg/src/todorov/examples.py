"""Shipped fixtures: the classical constructions as validated lattice data.

Each builder returns a branch configuration whose Gram matrix was
derived by hand from the classical intersection theory (pullbacks along
double covers multiply intersection numbers by 2; exceptional curves of
a blow-up are orthogonal to total transforms).  The toolkit re-verifies
every stated invariant; the underlying geometric existence statements
(Kummer quartics, non-Kummer Hessians, the tangent-cubics pencil) are
taken as established classical facts.
"""

from __future__ import annotations

from dataclasses import dataclass

from .config import BranchConfiguration
from .cover import InfinitelyNearPoint, PlaneBranchCurve
from .lattice import DivisorClass, IntLattice, class_sum

__all__ = [
    "FixtureDescriptor",
    "a17_config",
    "a17_plane_branch",
    "build_example",
    "cubic_pullback",
    "describe",
    "kummer_config",
    "list_examples",
    "nine_node_sextic",
    "non_kummer_config",
    "smooth_sextic",
]


@dataclass(frozen=True)
class FixtureDescriptor:
    """Name, provenance and expected invariants of a shipped fixture."""

    name: str
    citation: str
    parameters: dict
    expected_t: int
    expected_K2: int
    expected_Bp2: int
    expected_census: dict

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "citation": self.citation,
            "parameters": dict(self.parameters),
            "expected": {
                "t": self.expected_t,
                "K2": self.expected_K2,
                "Bp2": self.expected_Bp2,
                "census": dict(self.expected_census),
            },
        }


def kummer_config(j: int) -> BranchConfiguration:
    """Double cover of a Kummer quartic over a quadric section and nodes.

    The lattice is spanned by the hyperplane class h (h^2 = 4) and the
    sixteen disjoint nodal classes N_i (the classical even set: their
    sum is 2-divisible).  The branch is a quadric section through j of
    the nodes, 0 <= j <= 7, plus the remaining 16 - j nodes:
    B' = 2h - N_1 - ... - N_j, so B'^2 = 16 - 2j and t = 16 - j.
    """
    if not 0 <= j <= 7:
        raise ValueError(f"j must lie in 0..7, got {j}")
    n = 17
    gram = [[0] * n for _ in range(n)]
    gram[0][0] = 4
    for i in range(1, n):
        gram[i][i] = -2
    labels = ("h",) + tuple(f"N{i}" for i in range(1, 17))
    node_sum = DivisorClass((0,) + (1,) * 16)
    lat = IntLattice(tuple(tuple(r) for r in gram), labels, declared_even=(node_sum,))
    h = lat.basis_class(0)
    nodes = [lat.basis_class(i) for i in range(1, 17)]
    Bp = 2 * h - class_sum(nodes[:j], n)
    return BranchConfiguration(
        lattice=lat,
        Bp=Bp,
        A=tuple(nodes[j:]),
        inventory=(h,) + tuple(nodes),
    )


def non_kummer_config(variant: str) -> BranchConfiguration:
    """Branch data over the desingularized Hessian double plane.

    H is the pullback of a general line (H^2 = 2); A_1, A_2 come from
    the conic tangent to both branch cubics (the conic pulls back to two
    disjoint (-2)-curves, each meeting H twice since line.conic = 2);
    A_3..A_11 lie over the cubics, so H + A_3 + ... + A_11 is
    2-divisible.  Variant "two" takes B' = H + A_2 with branch curves
    A_2..A_11 (t = 10); variant "three" takes B' = H + A_1 + A_2 with
    branch curves A_1..A_11 (t = 11).
    """
    if variant not in ("two", "three"):
        raise ValueError(f"variant must be 'two' or 'three', got {variant!r}")
    n = 12
    gram = [[0] * n for _ in range(n)]
    gram[0][0] = 2
    for i in range(1, n):
        gram[i][i] = -2
    gram[0][1] = gram[1][0] = 2
    gram[0][2] = gram[2][0] = 2
    labels = ("H",) + tuple(f"A{i}" for i in range(1, 12))
    declared = DivisorClass((1, 0, 0) + (1,) * 9)  # H + A_3 + ... + A_11
    lat = IntLattice(tuple(tuple(r) for r in gram), labels, declared_even=(declared,))
    H = lat.basis_class(0)
    A = [lat.basis_class(i) for i in range(1, 12)]
    if variant == "two":
        Bp = H + A[1]
        branch_curves = tuple(A[1:])
    else:
        Bp = H + A[0] + A[1]
        branch_curves = tuple(A)
    return BranchConfiguration(
        lattice=lat,
        Bp=Bp,
        A=branch_curves,
        inventory=(H,) + tuple(A),
    )


def a17_config() -> BranchConfiguration:
    """Branch data on the quartic model with an A17 and an A1 singularity.

    Basis: H the pullback of the line through the two cubic nodes
    (H^2 = 2, H.l = 2), l the (-2)-curve over its strict transform, and
    the seventeen-curve chain A_1-E_1-A_2-...-E_8-A_9 over the ninefold
    contact point.  B' = H + l (so B'.l = 0, B'^2 = 4); the branch
    curves are A_1..A_9 and l, and the full branch class
    H + 2l + A_1 + ... + A_9 is declared 2-divisible.
    """
    n = 19  # H, l, A1..A9, E1..E8
    gram = [[0] * n for _ in range(n)]
    gram[0][0] = 2
    for i in range(1, n):
        gram[i][i] = -2
    gram[0][1] = gram[1][0] = 2

    def a_index(i: int) -> int:  # A_1..A_9 -> 2..10
        return 1 + i

    def e_index(i: int) -> int:  # E_1..E_8 -> 11..18
        return 10 + i

    for i in range(1, 9):
        ai, ei, anext = a_index(i), e_index(i), a_index(i + 1)
        gram[ai][ei] = gram[ei][ai] = 1
        gram[ei][anext] = gram[anext][ei] = 1
    labels = (
        ("H", "l")
        + tuple(f"A{i}" for i in range(1, 10))
        + tuple(f"E{i}" for i in range(1, 9))
    )
    branch_coords = [0] * n
    branch_coords[0] = 1
    branch_coords[1] = 2
    for i in range(1, 10):
        branch_coords[a_index(i)] = 1
    declared = DivisorClass(tuple(branch_coords))  # H + 2l + A_1 + ... + A_9
    lat = IntLattice(tuple(tuple(r) for r in gram), labels, declared_even=(declared,))
    H = lat.basis_class(0)
    l = lat.basis_class(1)
    A = [lat.basis_class(a_index(i)) for i in range(1, 10)]
    E = [lat.basis_class(e_index(i)) for i in range(1, 9)]
    return BranchConfiguration(
        lattice=lat,
        Bp=H + l,
        A=tuple(A) + (l,),
        inventory=(H,) + tuple(A) + tuple(E) + (l,),
    )


def cubic_pullback(cfg: BranchConfiguration) -> DivisorClass:
    """Class of the preimage of a plane cubic under the terminal degree-2 map.

    At the terminal state (t = 9, B'^2 = 2) the free system |B'| maps
    the K3 two-to-one onto the plane with B' the pullback of a line, so
    a cubic pulls back to 3B'.
    """
    if cfg.t != 9 or cfg.lattice.square(cfg.Bp) != 2:
        raise ValueError("cubic pullback is only defined at t = 9 with Bp^2 = 2")
    return 3 * cfg.Bp


def smooth_sextic() -> PlaneBranchCurve:
    """A smooth plane sextic: the branch of the generic K3 double plane."""
    return PlaneBranchCurve(degree=6)


def nine_node_sextic() -> PlaneBranchCurve:
    """Two general cubics: a sextic with nine ordinary nodes."""
    points = tuple(InfinitelyNearPoint(f"q{i}", None, 2) for i in range(1, 10))
    return PlaneBranchCurve(degree=6, points=points)


def a17_plane_branch() -> PlaneBranchCurve:
    """Two nodal cubics meeting with multiplicity nine at one point.

    The ninefold contact resolves into a chain of nine infinitely near
    double points; the two cubic nodes are free double points.
    """
    chain = [InfinitelyNearPoint("p1", None, 2)]
    for i in range(2, 10):
        chain.append(InfinitelyNearPoint(f"p{i}", f"p{i - 1}", 2))
    nodes = [InfinitelyNearPoint("q1", None, 2), InfinitelyNearPoint("q2", None, 2)]
    return PlaneBranchCurve(degree=6, points=tuple(chain + nodes))


def _kummer_descriptor(j: int, name: str | None = None) -> FixtureDescriptor:
    return FixtureDescriptor(
        name=name or f"kummer-{j}",
        citation=(
            "Double cover of a Kummer quartic branched over a quadric section "
            f"through {j} node(s) and the remaining {16 - j} nodes"
        ),
        parameters={"j": j},
        expected_t=16 - j,
        expected_K2=8 - j,
        expected_Bp2=16 - 2 * j,
        expected_census={"A1": 16 - j},
    )


_REGISTRY: dict[str, tuple] = {}
for _j in range(8):
    _REGISTRY[f"kummer-{_j}"] = (
        (lambda j=_j: kummer_config(j)),
        _kummer_descriptor(_j),
    )
_REGISTRY["kunev"] = (
    (lambda: kummer_config(7)),
    FixtureDescriptor(
        name="kunev",
        citation=(
            "Kunev surface with K^2 = p_g = 1: bidouble cover of the plane "
            "ramified over two cubics and a line"
        ),
        parameters={"j": 7},
        expected_t=9,
        expected_K2=1,
        expected_Bp2=2,
        expected_census={"A1": 9},
    ),
)
_REGISTRY["non-kummer-2"] = (
    (lambda: non_kummer_config("two")),
    FixtureDescriptor(
        name="non-kummer-2",
        citation=(
            "Double plane over a non-Kummer Hessian quartic: two cubics "
            "tangent to a conic; K^2 = 2"
        ),
        parameters={"variant": "two"},
        expected_t=10,
        expected_K2=2,
        expected_Bp2=4,
        expected_census={"A1": 10},
    ),
)
_REGISTRY["non-kummer-3"] = (
    (lambda: non_kummer_config("three")),
    FixtureDescriptor(
        name="non-kummer-3",
        citation=(
            "Double plane over a non-Kummer Hessian quartic: two cubics "
            "tangent to a conic; K^2 = 3"
        ),
        parameters={"variant": "three"},
        expected_t=11,
        expected_K2=3,
        expected_Bp2=6,
        expected_census={"A1": 11},
    ),
)
_REGISTRY["a17"] = (
    a17_config,
    FixtureDescriptor(
        name="a17",
        citation=(
            "Quartic K3 with A17 and A1 singularities from two cubics with "
            "ninefold contact; K^2 = 2"
        ),
        parameters={},
        expected_t=10,
        expected_K2=2,
        expected_Bp2=4,
        expected_census={"A17": 1, "A1": 1},
    ),
)


def list_examples() -> tuple[FixtureDescriptor, ...]:
    """Descriptors of every registered fixture."""
    return tuple(descriptor for _, descriptor in _REGISTRY.values())


def describe(name: str) -> FixtureDescriptor:
    if name not in _REGISTRY:
        raise ValueError(f"unknown example {name!r}; known: {', '.join(sorted(_REGISTRY))}")
    return _REGISTRY[name][1]


def build_example(name: str) -> BranchConfiguration:
    """Build a registered fixture by name."""
    if name not in _REGISTRY:
        raise ValueError(f"unknown example {name!r}; known: {', '.join(sorted(_REGISTRY))}")
    return _REGISTRY[name][0]()
