"""Canonical resolution bookkeeping for double covers of the plane.

A branch curve of even degree 2k with a forest of (infinitely near)
singular points is resolved point by point: blowing up a point of
multiplicity m replaces the branch class by its total transform minus
2*floor(m/2) times the exceptional curve, and adjusts the cover datum L
and the canonical class K accordingly.  The end state supports the
numerical double-cover formulas for chi and K^2.
"""

from __future__ import annotations

from dataclasses import dataclass

from .lattice import DivisorClass, IntLattice

__all__ = [
    "BlowUpRecord",
    "InfinitelyNearPoint",
    "PlaneBranchCurve",
    "ResolutionState",
    "canonical_resolution",
    "double_plane_invariants",
    "is_negligible",
]


@dataclass(frozen=True)
class InfinitelyNearPoint:
    """A singular point of the branch: free (parent None) or infinitely near."""

    id: str
    parent: str | None
    mult: int


@dataclass(frozen=True)
class PlaneBranchCurve:
    """Even-degree plane curve with a forest of singular points."""

    degree: int
    points: tuple[InfinitelyNearPoint, ...] = ()

    def __post_init__(self) -> None:
        pts = tuple(self.points)
        object.__setattr__(self, "points", pts)
        if self.degree <= 0 or self.degree % 2:
            raise ValueError(f"branch degree must be a positive even integer, got {self.degree}")
        ids = [p.id for p in pts]
        if len(set(ids)) != len(ids):
            raise ValueError("point ids must be distinct")
        by_id = {p.id: p for p in pts}
        for p in pts:
            if p.mult < 2:
                raise ValueError(f"point {p.id!r} has multiplicity {p.mult}; singular points need >= 2")
            if p.parent is not None and p.parent not in by_id:
                raise ValueError(f"point {p.id!r} refers to unknown parent {p.parent!r}")
        for p in pts:
            seen = {p.id}
            cur = p
            while cur.parent is not None:
                if cur.parent in seen:
                    raise ValueError(f"parent links of point {p.id!r} form a cycle")
                seen.add(cur.parent)
                cur = by_id[cur.parent]

    def point(self, point_id: str) -> InfinitelyNearPoint:
        for p in self.points:
            if p.id == point_id:
                return p
        raise ValueError(f"unknown point {point_id!r}")

    def children_of(self, point_id: str) -> tuple[InfinitelyNearPoint, ...]:
        return tuple(p for p in self.points if p.parent == point_id)

    def topological_order(self) -> tuple[InfinitelyNearPoint, ...]:
        """Points ordered parents-first, stable with respect to input order."""
        done: set[str] = set()
        order: list[InfinitelyNearPoint] = []
        pending = list(self.points)
        while pending:
            progressed = False
            remaining = []
            for p in pending:
                if p.parent is None or p.parent in done:
                    order.append(p)
                    done.add(p.id)
                    progressed = True
                else:
                    remaining.append(p)
            pending = remaining
            if not progressed:  # pragma: no cover - excluded by acyclicity check
                raise ValueError("point forest is not well founded")
        return tuple(order)

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "points": [{"id": p.id, "parent": p.parent, "mult": p.mult} for p in self.points],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "PlaneBranchCurve":
        if "degree" not in doc:
            raise ValueError("plane-branch document requires 'degree'")
        return cls(
            degree=int(doc["degree"]),
            points=tuple(
                InfinitelyNearPoint(str(p["id"]), p.get("parent"), int(p["mult"]))
                for p in doc.get("points", [])
            ),
        )


def is_negligible(curve: PlaneBranchCurve, point_id: str) -> bool:
    """Whether the singularity at a point is negligible for the double cover.

    Negligible means a double point, or a triple point whose infinitely
    near points are at most double points; such singularities contribute
    nothing to chi under canonical resolution.
    """
    p = curve.point(point_id)
    if p.mult == 2:
        return True
    if p.mult == 3:
        return all(c.mult <= 2 for c in curve.children_of(point_id))
    return False


@dataclass(frozen=True)
class BlowUpRecord:
    point: str
    mult: int
    basis_index: int


@dataclass(frozen=True)
class ResolutionState:
    """State of the plane after resolving every recorded branch point.

    The lattice has basis {h, e_1, ..., e_n} with gram diag(1, -1, ...,
    -1).  Two identities are enforced: branch = 2L (the cover datum
    stays halved) and K = -3h + sum(e_i).
    """

    lattice: IntLattice
    L: DivisorClass
    K: DivisorClass
    branch: DivisorClass
    log: tuple[BlowUpRecord, ...]

    def __post_init__(self) -> None:
        if self.branch != 2 * self.L:
            raise ValueError("resolution state broken: branch class is not 2L")
        n = self.lattice.rank - 1
        expected_K = DivisorClass((-3,) + (1,) * n)
        if self.K != expected_K:
            raise ValueError("resolution state broken: K != -3h + sum of exceptionals")

    def to_json(self) -> dict:
        return {
            "basis": list(self.lattice.labels),
            "L": list(self.L.coords),
            "K": list(self.K.coords),
            "branch": list(self.branch.coords),
            "blowups": [
                {"point": r.point, "mult": r.mult, "basis_index": r.basis_index}
                for r in self.log
            ],
        }


def canonical_resolution(curve: PlaneBranchCurve) -> ResolutionState:
    """Resolve the branch curve, blowing up each point in forest order.

    At a point of multiplicity m the updates are
    branch <- s*branch - 2*floor(m/2)*E, L <- s*L - floor(m/2)*E,
    K <- s*K + E, starting from branch = 2k*h, L = k*h, K = -3h.
    For odd m the exceptional curve stays in the branch automatically
    (residual coefficient 2*floor(m/2) keeps the parity right).
    """
    order = curve.topological_order()
    n = len(order)
    labels = ("h",) + tuple(p.id for p in order)
    gram = tuple(
        tuple((1 if i == 0 else -1) if i == j else 0 for j in range(n + 1))
        for i in range(n + 1)
    )
    lat = IntLattice(gram, labels=labels, even=False)
    k = curve.degree // 2
    L = [k] + [0] * n
    K = [-3] + [0] * n
    branch = [2 * k] + [0] * n
    log = []
    for idx, p in enumerate(order, start=1):
        half = p.mult // 2
        branch[idx] = -2 * half
        L[idx] = -half
        K[idx] = 1
        log.append(BlowUpRecord(point=p.id, mult=p.mult, basis_index=idx))
    return ResolutionState(
        lattice=lat,
        L=DivisorClass(tuple(L)),
        K=DivisorClass(tuple(K)),
        branch=DivisorClass(tuple(branch)),
        log=tuple(log),
    )


def double_plane_invariants(state: ResolutionState) -> tuple[int, int]:
    """(chi, K_V^2) of the double cover determined by the resolved branch.

    chi = 2 + L.(L+K)/2 and K_V^2 = 2*(K+L)^2; an odd value of L.(L+K)
    means the input did not describe a genuine halved branch datum.
    """
    lat = state.lattice
    lk = lat.pair(state.L, state.L + state.K)
    if lk % 2:
        raise ValueError(f"L.(L+K) = {lk} is odd; malformed resolution data")
    kl = state.K + state.L
    return 2 + lk // 2, 2 * lat.pair(kl, kl)
