"""Dual graphs of (-2)-classes and their ADE combinatorics.

A dual graph records a set of (-2)-classes together with the 0/1
adjacency extracted from their pairings.  Connected components are
classified into the simply-laced Dynkin types, fundamental cycles are
computed by the incremental anti-nef algorithm, and the subsets of
vertices that can simultaneously be branch curves of an even divisor
are enumerated by an exhaustive parity search.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .lattice import DivisorClass, IntLattice, class_sum

__all__ = [
    "ADEComponent",
    "DualGraph",
    "DynkinType",
    "FundamentalCycle",
    "NOT_ADE",
    "build_dual_graph",
    "classify",
    "dynkin_graph",
    "even_markings",
    "fundamental_cycle",
]

MARKING_ENUMERATION_CAP = 24


@dataclass(frozen=True)
class DynkinType:
    """A simply-laced Dynkin type, or the non-ADE marker."""

    series: str  # "A", "D", "E"; empty string marks a non-ADE graph
    rank: int = 0

    @property
    def is_ade(self) -> bool:
        return bool(self.series)

    def __str__(self) -> str:
        return f"{self.series}{self.rank}" if self.series else "NotADE"


NOT_ADE = DynkinType("", 0)


@dataclass(frozen=True)
class DualGraph:
    """(-2)-classes with the simple adjacency induced by their pairings."""

    lattice: IntLattice
    vertices: tuple[DivisorClass, ...]
    adjacency: tuple[tuple[int, ...], ...]

    def __len__(self) -> int:
        return len(self.vertices)

    def neighbors(self, i: int) -> tuple[int, ...]:
        return tuple(j for j, e in enumerate(self.adjacency[i]) if e)

    def degree(self, i: int) -> int:
        return sum(self.adjacency[i])

    def components(self) -> tuple[tuple[int, ...], ...]:
        """Connected components, each sorted, ordered by least vertex."""
        seen: set[int] = set()
        comps: list[tuple[int, ...]] = []
        for start in range(len(self.vertices)):
            if start in seen:
                continue
            stack = [start]
            comp = {start}
            while stack:
                cur = stack.pop()
                for nb in self.neighbors(cur):
                    if nb not in comp:
                        comp.add(nb)
                        stack.append(nb)
            seen |= comp
            comps.append(tuple(sorted(comp)))
        return tuple(comps)


@dataclass(frozen=True)
class ADEComponent:
    """A connected component of a dual graph with its Dynkin type."""

    vertices: tuple[int, ...]
    dynkin: DynkinType


def build_dual_graph(lat: IntLattice, curves: Sequence[DivisorClass]) -> DualGraph:
    """Assemble the dual graph of a set of (-2)-classes.

    Rejects any class of square != -2 and any pairing outside {0, 1}
    between distinct classes (multiple edges would mean a non-simple
    configuration, which is out of scope).
    """
    verts = tuple(curves)
    for i, v in enumerate(verts):
        s = lat.square(v)
        if s != -2:
            raise ValueError(f"vertex {i} has self-intersection {s}, expected -2")
    n = len(verts)
    adj = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            p = lat.pair(verts[i], verts[j])
            if p not in (0, 1):
                raise ValueError(
                    f"pairing of vertices {i} and {j} is {p}; "
                    "only simple configurations (pairings 0 or 1) are supported"
                )
            adj[i][j] = adj[j][i] = p
    return DualGraph(lat, verts, tuple(tuple(row) for row in adj))


def _component_positions(g: DualGraph, component: Sequence[int]) -> tuple[int, ...]:
    comp = tuple(sorted(set(component)))
    if not comp:
        raise ValueError("component must be nonempty")
    for i in comp:
        if not 0 <= i < len(g.vertices):
            raise ValueError(f"vertex index {i} out of range")
    return comp


def _check_connected(g: DualGraph, comp: tuple[int, ...]) -> None:
    inside = set(comp)
    stack = [comp[0]]
    reached = {comp[0]}
    while stack:
        cur = stack.pop()
        for nb in g.neighbors(cur):
            if nb in inside and nb not in reached:
                reached.add(nb)
                stack.append(nb)
    if reached != inside:
        raise ValueError("vertex set is not connected")


def classify(g: DualGraph, component: Sequence[int]) -> DynkinType:
    """Dynkin type of a connected vertex set, by degree-sequence analysis.

    A path is A(n); a tree with a single degree-3 vertex is D or E
    according to its leg lengths; everything else (cycles, high-degree
    vertices, several branch points) is not ADE.
    """
    comp = _component_positions(g, component)
    _check_connected(g, comp)
    n = len(comp)
    local = {v: [w for w in g.neighbors(v) if w in set(comp)] for v in comp}
    edges = sum(len(nbs) for nbs in local.values()) // 2
    if edges != n - 1:
        return NOT_ADE  # contains a cycle
    degrees = {v: len(local[v]) for v in comp}
    branch = [v for v, d in degrees.items() if d >= 3]
    if any(d > 3 for d in degrees.values()) or len(branch) > 1:
        return NOT_ADE
    if not branch:
        return DynkinType("A", n)
    center = branch[0]
    legs = []
    for nb in local[center]:
        length = 1
        prev, cur = center, nb
        while degrees[cur] == 2:
            nxt = next(w for w in local[cur] if w != prev)
            prev, cur = cur, nxt
            length += 1
        legs.append(length)
    legs.sort()
    a, b, c = legs
    if a == 1 and b == 1:
        return DynkinType("D", c + 3)
    if (a, b) == (1, 2) and c in (2, 3, 4):
        return DynkinType("E", c + 4)
    return NOT_ADE


@dataclass(frozen=True)
class FundamentalCycle:
    """Minimal positive cycle Z with Z.v <= 0 for all component vertices."""

    vertex_indices: tuple[int, ...]
    multiplicities: tuple[int, ...]
    divisor: DivisorClass
    self_intersection: int


def fundamental_cycle(g: DualGraph, component: Sequence[int]) -> FundamentalCycle:
    """Fundamental cycle of an ADE component.

    Incremental algorithm: start from a single vertex and repeatedly add
    any vertex pairing positively with the current cycle.  For a
    negative-definite configuration this terminates at the unique
    minimal anti-nef cycle, which for ADE graphs has square -2.
    """
    dt = classify(g, component)
    if not dt.is_ade:
        raise ValueError("fundamental cycle requires an ADE component")
    comp = _component_positions(g, component)
    n = len(comp)
    local = [
        [-2 if i == j else g.adjacency[comp[i]][comp[j]] for j in range(n)]
        for i in range(n)
    ]
    mult = [0] * n
    mult[0] = 1
    for _ in range(64 * n + 64):
        dots = [sum(mult[i] * local[i][j] for i in range(n)) for j in range(n)]
        grow = next((j for j, d in enumerate(dots) if d > 0), None)
        if grow is None:
            break
        mult[grow] += 1
    else:  # pragma: no cover - impossible for negative definite graphs
        raise RuntimeError("fundamental cycle iteration failed to converge")
    z2 = sum(mult[i] * mult[j] * local[i][j] for i in range(n) for j in range(n))
    if z2 != -2:
        raise RuntimeError(f"fundamental cycle has square {z2}, expected -2")
    rank = g.lattice.rank
    divisor = class_sum((mult[i] * g.vertices[comp[i]] for i in range(n)), rank)
    return FundamentalCycle(comp, tuple(mult), divisor, z2)


def even_markings(g: DualGraph, component: Sequence[int]) -> tuple[tuple[int, ...], ...]:
    """All nonempty vertex subsets S with even S-neighbor count everywhere.

    This is the parity condition a set of branch curves inside the
    component must satisfy when the total branch divisor is 2-divisible:
    for each vertex C the pairing B.C must be even, and since C^2 = -2
    only the neighbors of C lying in S contribute mod 2.  Enumeration is
    exhaustive over subsets (components are capped at 24 vertices).
    """
    dt = classify(g, component)
    if not dt.is_ade:
        raise ValueError("even markings require an ADE component")
    comp = _component_positions(g, component)
    n = len(comp)
    if n > MARKING_ENUMERATION_CAP:
        raise ValueError(f"component has {n} vertices; enumeration capped at {MARKING_ENUMERATION_CAP}")
    index = {v: p for p, v in enumerate(comp)}
    nbr = [0] * n
    for p, v in enumerate(comp):
        for w in g.neighbors(v):
            if w in index:
                nbr[p] |= 1 << index[w]
    out = []
    for mask in range(1, 1 << n):
        if all((nbr[p] & mask).bit_count() % 2 == 0 for p in range(n)):
            out.append(tuple(comp[p] for p in range(n) if mask >> p & 1))
    return tuple(out)


def dynkin_graph(series: str, rank: int) -> DualGraph:
    """Standard dual graph of a simply-laced Dynkin type.

    Vertex order: A(n) is the path v1..vn.  D(n) lists the two fork ends
    first, then the branch vertex, then the tail out to its end.  E(n)
    is the path v1..v(n-1) with vn attached to v3.
    """
    if series == "A":
        if rank < 1:
            raise ValueError("A-type rank must be >= 1")
        edges = [(i, i + 1) for i in range(rank - 1)]
    elif series == "D":
        if rank < 4:
            raise ValueError("D-type rank must be >= 4")
        edges = [(0, 2), (1, 2)] + [(i, i + 1) for i in range(2, rank - 1)]
    elif series == "E":
        if rank not in (6, 7, 8):
            raise ValueError("E-type rank must be 6, 7 or 8")
        edges = [(i, i + 1) for i in range(rank - 2)] + [(2, rank - 1)]
    else:
        raise ValueError(f"unknown Dynkin series {series!r}")
    gram = [[-2 if i == j else 0 for j in range(rank)] for i in range(rank)]
    for i, j in edges:
        gram[i][j] = gram[j][i] = 1
    lat = IntLattice(
        tuple(tuple(row) for row in gram),
        labels=tuple(f"v{i + 1}" for i in range(rank)),
    )
    return build_dual_graph(lat, [lat.basis_class(i) for i in range(rank)])
