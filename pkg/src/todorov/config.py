"""Branch configurations on a K3 lattice and their surface invariants.

A branch configuration is the lattice data of a double-cover branch
divisor B = B' + A_1 + ... + A_t on a K3 surface: a big class B'
orthogonal to t disjoint (-2)-curves, with the total divisor 2-divisible
and of half-square -4.  Validation checks each clause exactly;
invariants of the covering surface follow from t alone.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .ade import DualGraph, build_dual_graph, classify
from .lattice import DivisorClass, EvennessCertificate, IntLattice, class_sum

__all__ = [
    "BranchConfiguration",
    "SurfaceInvariants",
    "ValidationReport",
    "invariants",
    "validate",
    "xi_census",
    "xi_graph",
]

T_MIN = 9
T_MAX = 16


@dataclass(frozen=True)
class BranchConfiguration:
    """Lattice model of a branch divisor B' + A_1 + ... + A_t.

    ``inventory`` lists every curve class the fixture knows about; it is
    the reference set for the partial nef certificate and for the graph
    of curves orthogonal to B'.  ``negligible_ok`` is the geometric
    assertion (not derivable from lattice data) that B' has at most
    negligible singularities.  ``sd_obstructed`` optionally marks
    classes whose orthogonal component maps to the singular point of a
    non-birational model; the descent selection skips such components.
    """

    lattice: IntLattice
    Bp: DivisorClass
    A: tuple[DivisorClass, ...]
    inventory: tuple[DivisorClass, ...] = ()
    negligible_ok: bool = True
    sd_obstructed: tuple[DivisorClass, ...] = ()

    def __post_init__(self) -> None:
        def coerce(items) -> tuple[DivisorClass, ...]:
            return tuple(
                c if isinstance(c, DivisorClass) else DivisorClass(tuple(c)) for c in items
            )

        object.__setattr__(self, "A", coerce(self.A))
        object.__setattr__(self, "inventory", coerce(self.inventory) or self.A)
        object.__setattr__(self, "sd_obstructed", coerce(self.sd_obstructed))
        rank = self.lattice.rank
        for name, classes in (
            ("Bp", (self.Bp,)),
            ("A", self.A),
            ("inventory", self.inventory),
            ("sd_obstructed", self.sd_obstructed),
        ):
            for c in classes:
                if len(c) != rank:
                    raise ValueError(f"{name} entry has length {len(c)}, rank is {rank}")

    @property
    def t(self) -> int:
        return len(self.A)

    @property
    def branch_class(self) -> DivisorClass:
        """The total branch divisor B = B' + sum A_i."""
        return self.Bp + class_sum(self.A, self.lattice.rank)

    def to_json(self) -> dict:
        doc = {
            "lattice": self.lattice.to_json(),
            "Bprime": list(self.Bp.coords),
            "A": [list(a.coords) for a in self.A],
            "inventory": [list(c.coords) for c in self.inventory],
            "negligible_ok": self.negligible_ok,
        }
        if self.sd_obstructed:
            doc["sd_obstructed"] = [list(c.coords) for c in self.sd_obstructed]
        return doc

    @classmethod
    def from_json(cls, doc: dict) -> "BranchConfiguration":
        for key in ("lattice", "Bprime", "A"):
            if key not in doc:
                raise ValueError(f"configuration document requires {key!r}")
        lat = IntLattice.from_json(doc["lattice"])
        return cls(
            lattice=lat,
            Bp=DivisorClass(tuple(doc["Bprime"])),
            A=tuple(DivisorClass(tuple(a)) for a in doc["A"]),
            inventory=tuple(DivisorClass(tuple(c)) for c in doc.get("inventory", doc["A"])),
            negligible_ok=bool(doc.get("negligible_ok", True)),
            sd_obstructed=tuple(DivisorClass(tuple(c)) for c in doc.get("sd_obstructed", [])),
        )


@dataclass(frozen=True)
class SurfaceInvariants:
    """Numerical invariants of the double cover branched over B."""

    q: int
    p_g: int
    K2: int
    chi: int

    def __post_init__(self) -> None:
        if self.chi != 1 + self.p_g - self.q:
            raise ValueError("chi must equal 1 + p_g - q")

    def to_json(self) -> dict:
        return {"q": self.q, "p_g": self.p_g, "K2": self.K2, "chi": self.chi}


@dataclass(frozen=True)
class ValidationReport:
    """Result of checking every clause of a branch configuration."""

    ok: bool
    violations: tuple[str, ...]
    t: int
    Bp2: int
    branch_square: int
    half_square: Fraction
    evenness: EvennessCertificate
    nef_classes_checked: int

    def to_json(self) -> dict:
        doc = {
            "valid": self.ok,
            "violations": list(self.violations),
            "t": self.t,
            "Bp2": self.Bp2,
            "B2": self.branch_square,
            "half_square": str(self.half_square),
            "evenness": self.evenness.to_json(),
            # Nefness of B' can only be certified against the classes the
            # fixture lists, hence "partial".
            "nef_partial_certificate": {"classes_checked": self.nef_classes_checked},
        }
        if self.ok:
            doc.update(SurfaceInvariants(0, 1, self.t - 8, 2).to_json())
        return doc


def validate(cfg: BranchConfiguration) -> ValidationReport:
    """Check every clause of the branch-configuration contract.

    Violations are collected, not raised.  On a clean pass the derived
    identity Bp^2 = 2(t - 8) is also asserted (it is forced by B^2 = -16
    together with orthogonality, so its failure flags an internal
    inconsistency rather than bad input).
    """
    lat = cfg.lattice
    v: list[str] = []
    t = cfg.t
    if not T_MIN <= t <= T_MAX:
        v.append(f"t = {t} outside {{{T_MIN},...,{T_MAX}}}")
    for i, a in enumerate(cfg.A):
        s = lat.square(a)
        if s != -2:
            v.append(f"A[{i}]^2 = {s}, expected -2")
    for i in range(t):
        for j in range(i + 1, t):
            p = lat.pair(cfg.A[i], cfg.A[j])
            if p != 0:
                v.append(f"A[{i}].A[{j}] = {p}, expected 0 (curves must be disjoint)")
    for i, a in enumerate(cfg.A):
        p = lat.pair(cfg.Bp, a)
        if p != 0:
            v.append(f"Bp.A[{i}] = {p}, expected 0")
    bp2 = lat.square(cfg.Bp)
    if bp2 <= 0:
        v.append(f"Bp^2 = {bp2}, expected positive (big class)")
    inventory_coords = {c.coords for c in cfg.inventory}
    for i, a in enumerate(cfg.A):
        if a.coords not in inventory_coords:
            v.append(f"A[{i}] missing from the curve inventory")
    for k, c in enumerate(cfg.inventory):
        p = lat.pair(cfg.Bp, c)
        if p < 0:
            v.append(f"partial nef certificate: Bp.inventory[{k}] = {p} < 0")
    if not cfg.negligible_ok:
        v.append("B' is not asserted to have at most negligible singularities")
    branch = cfg.branch_class
    cert = lat.is_even(branch)
    if not cert:
        v.append("branch class B is not 2-divisible over the declared classes")
    hs = lat.half_square(branch)
    if hs != -4:
        v.append(f"(B/2)^2 = {hs}, expected -4")
    if not v and bp2 != 2 * (t - 8):
        v.append(f"derived identity Bp^2 = 2(t-8) fails: {bp2} != {2 * (t - 8)}")
    return ValidationReport(
        ok=not v,
        violations=tuple(v),
        t=t,
        Bp2=bp2,
        branch_square=lat.square(branch),
        half_square=hs,
        evenness=cert,
        nef_classes_checked=len(cfg.inventory),
    )


def invariants(cfg: BranchConfiguration) -> SurfaceInvariants:
    """Invariants of the branched double cover: q = 0, p_g = 1, K^2 = t - 8.

    The q and p_g values are the vanishing conclusions of the standard
    double-cover argument given the configuration clauses; they are
    emitted, not recomputed from cohomology.
    """
    report = validate(cfg)
    if not report.ok:
        raise ValueError("invalid configuration: " + "; ".join(report.violations))
    return SurfaceInvariants(q=0, p_g=1, K2=cfg.t - 8, chi=2)


def xi_graph(cfg: BranchConfiguration) -> DualGraph:
    """Dual graph of the inventory classes orthogonal to B'.

    An orthogonal class of nonnegative square contradicts the Hodge
    index theorem (the orthogonal complement of a big class is negative
    definite) and is rejected as inconsistent input.
    """
    lat = cfg.lattice
    orthogonal = []
    for k, c in enumerate(cfg.inventory):
        if lat.pair(cfg.Bp, c) != 0:
            continue
        s = lat.square(c)
        if s >= 0:
            raise ValueError(
                f"inventory[{k}] is orthogonal to Bp but has square {s} >= 0; "
                "this violates the Hodge index bound"
            )
        orthogonal.append(c)
    return build_dual_graph(lat, orthogonal)


def xi_census(cfg: BranchConfiguration) -> dict[str, int]:
    """Count of orthogonal-graph components by Dynkin type."""
    g = xi_graph(cfg)
    census: dict[str, int] = {}
    for comp in g.components():
        key = str(classify(g, comp))
        census[key] = census.get(key, 0) + 1
    return census
