"""The K^2 descent on branch configurations and its supporting checks.

One descent step picks an admissible component G of the graph of curves
orthogonal to B', subtracts its fundamental cycle Z from B', and swaps
the branch curves inside G for the complementary vertex set determined
by the congruence N = Z + sum(S) mod 2.  The result is again a valid
configuration with one fewer branch curve and B'^2 lowered by 2.

The module also verifies the four non-birational models a big-and-free
system on a K3 can have (cone cases), derives the branch-curve
exclusions they force, and certifies the terminal two-cubics splitting
of the branch sextic.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Sequence

from .ade import ADEComponent, DualGraph, FundamentalCycle, classify, fundamental_cycle
from .config import BranchConfiguration, ValidationReport, validate, xi_graph
from .lattice import DivisorClass, EvennessCertificate, IntLattice, class_sum

__all__ = [
    "CubicSplittingReport",
    "DescentStep",
    "SDCase",
    "SDExclusionReport",
    "SDExclusionWitness",
    "branch_vertex_update",
    "cubic_splitting_certificate",
    "descent_step",
    "full_descent",
    "sd_exclusions",
    "select_graph",
    "verify_sd_case",
]

SD_TAGS = ("i", "ii", "iii.a", "iii.b")
_GAMMA_COUNT = {"i": 1, "ii": 2, "iii.a": 2}


@dataclass(frozen=True)
class SDCase:
    """One of the four cone configurations of a non-birational model.

    Tags: "i" cone over a quartic (D = 4E + 2G), "ii" cone over a cubic
    (D = 3E + 2G0 + G1), "iii.a"/"iii.b" quadric cone (D = 2E + G0 + G1,
    resp. D = 2E + 2G0 + ... + 2GN + G(N+1) + G(N+2)).
    """

    tag: str
    E: DivisorClass
    gammas: tuple[DivisorClass, ...]

    def __post_init__(self) -> None:
        object.__setattr__(
            self,
            "gammas",
            tuple(
                g if isinstance(g, DivisorClass) else DivisorClass(tuple(g))
                for g in self.gammas
            ),
        )
        if self.tag not in SD_TAGS:
            raise ValueError(f"unknown case tag {self.tag!r}; expected one of {SD_TAGS}")
        if self.tag == "iii.b":
            if len(self.gammas) < 3:
                raise ValueError("case iii.b needs at least three Gamma classes")
        elif len(self.gammas) != _GAMMA_COUNT[self.tag]:
            raise ValueError(
                f"case {self.tag} needs exactly {_GAMMA_COUNT[self.tag]} Gamma classes"
            )

    @property
    def N(self) -> int:
        if self.tag != "iii.b":
            raise ValueError("N is only defined for case iii.b")
        return len(self.gammas) - 3

    @classmethod
    def from_json(cls, doc: dict) -> "SDCase":
        for key in ("case", "E", "gammas"):
            if key not in doc:
                raise ValueError(f"case document requires {key!r}")
        return cls(
            tag=str(doc["case"]),
            E=DivisorClass(tuple(doc["E"])),
            gammas=tuple(DivisorClass(tuple(g)) for g in doc["gammas"]),
        )


def _expected_pairings(case: SDCase) -> dict[tuple[int, int], int]:
    """Pairing table among [E, Gamma_0, Gamma_1, ...]; index 0 is E."""
    table: dict[tuple[int, int], int] = {}
    g = len(case.gammas)

    def put(i: int, j: int, value: int) -> None:
        table[(min(i, j), max(i, j))] = value

    for a in range(g + 1):
        for b in range(a + 1, g + 1):
            put(a, b, 0)
    if case.tag == "i":
        put(0, 1, 1)
    elif case.tag == "ii":
        put(0, 1, 1)  # E.G0 = 1
        put(1, 2, 1)  # G0.G1 = 1
    elif case.tag == "iii.a":
        put(0, 1, 1)
        put(0, 2, 1)
    else:  # iii.b: chain G0-..-GN, both tips on GN, E attached to G0
        n = case.N
        put(0, 1, 1)  # E.G0 = 1
        for k in range(n):
            put(k + 1, k + 2, 1)  # Gk.G(k+1) = 1
        put(n + 1, n + 2, 1)  # GN.G(N+1)
        put(n + 1, n + 3, 1)  # GN.G(N+2)
    return table


def _decomposition(case: SDCase) -> DivisorClass:
    rank = len(case.E)
    if case.tag == "i":
        return 4 * case.E + 2 * case.gammas[0]
    if case.tag == "ii":
        return 3 * case.E + 2 * case.gammas[0] + case.gammas[1]
    if case.tag == "iii.a":
        return 2 * case.E + case.gammas[0] + case.gammas[1]
    n = case.N
    delta = class_sum((2 * g for g in case.gammas[: n + 1]), rank)
    return 2 * case.E + delta + case.gammas[n + 1] + case.gammas[n + 2]


def verify_sd_case(lat: IntLattice, D: DivisorClass, case: SDCase) -> bool:
    """Check the stated cone configuration coordinate-exactly.

    True iff E^2 = 0, E.D = 2, every Gamma is a (-2)-class, the linear
    decomposition of D holds, and the full pairing table of the case is
    reproduced (including all required zeroes).
    """
    if lat.square(case.E) != 0:
        return False
    if lat.pair(case.E, D) != 2:
        return False
    for g in case.gammas:
        if lat.square(g) != -2:
            return False
    if D != _decomposition(case):
        return False
    elements = (case.E,) + case.gammas
    for (a, b), expected in _expected_pairings(case).items():
        if lat.pair(elements[a], elements[b]) != expected:
            return False
    return True


@dataclass(frozen=True)
class SDExclusionWitness:
    """An excluded Gamma that actually occurs among the branch curves."""

    gamma_index: int
    witness: str
    pairing: int  # pairing of the witness class with B; odd exposes the clash


@dataclass(frozen=True)
class SDExclusionReport:
    excluded: tuple[int, ...]
    fired: tuple[SDExclusionWitness, ...]

    def to_json(self) -> dict:
        return {
            "excluded": list(self.excluded),
            "fired": [
                {"gamma": w.gamma_index, "witness": w.witness, "pairing": w.pairing}
                for w in self.fired
            ],
        }


def sd_exclusions(cfg: BranchConfiguration, case: SDCase) -> SDExclusionReport:
    """Which chain curves of a iii.b configuration can never be branch curves.

    The interior chain Gamma_0..Gamma_N is always excluded: if Gamma_0
    were a branch curve then E.B = 2 + E.Gamma_0 = 3 is odd, if Gamma_1
    were then Gamma_0.B = 1 is odd, and so on down the chain.  Only the
    two tips Gamma_{N+1}, Gamma_{N+2} may appear.  For every excluded
    curve actually present in cfg.A the report carries the witness class
    and its (odd) pairing with B.
    """
    if case.tag != "iii.b":
        raise ValueError("exclusions are only defined for case iii.b")
    if not verify_sd_case(cfg.lattice, cfg.Bp, case):
        raise ValueError("configuration does not verify as case iii.b")
    n = case.N
    excluded = tuple(range(n + 1))
    branch = cfg.branch_class
    a_coords = {a.coords for a in cfg.A}
    fired = []
    for k in excluded:
        if case.gammas[k].coords not in a_coords:
            continue
        if k == 0:
            witness_class, witness_name = case.E, "E"
        else:
            witness_class, witness_name = case.gammas[k - 1], f"Gamma{k - 1}"
        fired.append(
            SDExclusionWitness(
                gamma_index=k,
                witness=witness_name,
                pairing=cfg.lattice.pair(witness_class, branch),
            )
        )
    return SDExclusionReport(excluded=excluded, fired=tuple(fired))


def _marking_is_admissible(g: DualGraph, comp: tuple[int, ...], marked: set[int]) -> bool:
    # Parity condition: every component vertex has an even number of
    # marked neighbors.  (Direct check; no subset enumeration needed.)
    comp_set = set(comp)
    for v in comp:
        count = sum(1 for w in g.neighbors(v) if w in comp_set and w in marked)
        if count % 2:
            return False
    return True


def _admissible_component(
    cfg: BranchConfiguration, g: DualGraph
) -> tuple[ADEComponent, tuple[int, ...]]:
    """First component whose A-vertex set is a usable marking.

    Returns the component and the marked vertex indices.  Skips
    components without branch curves, components containing a declared
    obstructed class, parity-inadmissible markings and non-ADE graphs.
    """
    a_coords = {a.coords for a in cfg.A}
    obstructed = {c.coords for c in cfg.sd_obstructed}
    for comp in g.components():
        marked = {v for v in comp if g.vertices[v].coords in a_coords}
        if not marked:
            continue
        if any(g.vertices[v].coords in obstructed for v in comp):
            continue
        if not _marking_is_admissible(g, comp, marked):
            continue
        dynkin = classify(g, comp)
        if not dynkin.is_ade:
            continue
        return ADEComponent(vertices=comp, dynkin=dynkin), tuple(sorted(marked))
    raise ValueError(
        "no admissible component: every orthogonal component either lacks branch "
        "curves, is obstructed, or fails the parity condition"
    )


def _require_valid(cfg: BranchConfiguration) -> ValidationReport:
    report = validate(cfg)
    if not report.ok:
        raise ValueError("invalid configuration: " + "; ".join(report.violations))
    return report


def select_graph(cfg: BranchConfiguration) -> ADEComponent:
    """Deterministically choose the component consumed by the next step.

    Lowest-indexed component of the orthogonal graph that contains a
    branch curve, whose full A-vertex set is parity-admissible, and that
    is not declared obstructed by the fixture.
    """
    _require_valid(cfg)
    if cfg.t < 10:
        raise ValueError(f"descent requires t >= 10, got t = {cfg.t}")
    component, _ = _admissible_component(cfg, xi_graph(cfg))
    return component


def branch_vertex_update(
    multiplicities: Sequence[int], marked: Sequence[bool]
) -> tuple[int, ...]:
    """Positions of the new branch vertices inside a consumed component.

    The new set N satisfies N = Z + sum(S) mod 2 as vertex indicators;
    for an odd chain with alternating marking this is exactly the set of
    in-between vertices.
    """
    if len(multiplicities) != len(marked):
        raise ValueError("multiplicity and marking vectors must have equal length")
    return tuple(
        p for p, (m, s) in enumerate(zip(multiplicities, marked)) if (m + int(s)) % 2
    )


@dataclass(frozen=True)
class DescentStep:
    """Record of one descent step."""

    component: ADEComponent
    component_classes: tuple[DivisorClass, ...]
    marking: tuple[int, ...]  # graph vertex indices of the consumed branch curves
    cycle: FundamentalCycle
    new_Bp: DivisorClass
    new_A: tuple[DivisorClass, ...]
    evenness: EvennessCertificate
    halved_difference: DivisorClass  # (B_old - B_new) / 2
    K2_before: int
    K2_after: int

    def to_json(self) -> dict:
        return {
            "component": list(self.component.vertices),
            "type": str(self.component.dynkin),
            "marking": list(self.marking),
            "cycle_multiplicities": list(self.cycle.multiplicities),
            "new_Bp": list(self.new_Bp.coords),
            "new_A": [list(a.coords) for a in self.new_A],
            "evenness": self.evenness.to_json(),
            "halved_difference": list(self.halved_difference.coords),
            "K2": self.K2_after,
        }


def descent_step(cfg: BranchConfiguration) -> tuple[DescentStep, BranchConfiguration]:
    """Perform one descent step: t -> t - 1 and Bp^2 -> Bp^2 - 2.

    With G the selected component, Z its fundamental cycle and S its
    branch-curve vertices: the new big class is Bp - Z and the branch
    curves of G are replaced by the vertex set N = Z + sum(S) mod 2.
    The output is re-validated in full; any failure means the input
    fixture was inconsistent.
    """
    report = _require_valid(cfg)
    if cfg.t < 10:
        raise ValueError(f"descent exhausted: t = {cfg.t}")
    lat = cfg.lattice
    g = xi_graph(cfg)
    component, marking = _admissible_component(cfg, g)
    cycle = fundamental_cycle(g, component.vertices)
    marked_positions = [v in set(marking) for v in cycle.vertex_indices]
    new_positions = branch_vertex_update(cycle.multiplicities, marked_positions)
    new_vertex_classes = tuple(
        g.vertices[cycle.vertex_indices[p]] for p in new_positions
    )
    marking_coords = {g.vertices[v].coords for v in marking}
    new_Bp = cfg.Bp - cycle.divisor
    new_A = new_vertex_classes + tuple(a for a in cfg.A if a.coords not in marking_coords)
    new_cfg = replace(cfg, Bp=new_Bp, A=new_A, sd_obstructed=())

    if lat.square(new_Bp) != report.Bp2 - 2:
        raise ValueError(
            f"descent broke the square drop: {lat.square(new_Bp)} != {report.Bp2 - 2}"
        )
    if len(new_A) != cfg.t - 1:
        raise ValueError(f"descent produced {len(new_A)} branch curves, expected {cfg.t - 1}")
    new_report = validate(new_cfg)
    if not new_report.ok:
        raise ValueError(
            "descended configuration fails validation: " + "; ".join(new_report.violations)
        )
    difference = cfg.branch_class - new_cfg.branch_class
    if any(c % 2 for c in difference.coords):
        raise ValueError("descent changed the branch class by an odd amount")
    halved = DivisorClass(tuple(c // 2 for c in difference.coords))
    step = DescentStep(
        component=component,
        component_classes=tuple(g.vertices[v] for v in component.vertices),
        marking=marking,
        cycle=cycle,
        new_Bp=new_Bp,
        new_A=new_A,
        evenness=new_report.evenness,
        halved_difference=halved,
        K2_before=cfg.t - 8,
        K2_after=cfg.t - 9,
    )
    return step, new_cfg


def full_descent(cfg: BranchConfiguration) -> list[BranchConfiguration]:
    """Iterate descent steps down to t = 9.

    Returns the chain of configurations including the input; K^2 runs
    through t - 8, t - 9, ..., 1.
    """
    _require_valid(cfg)
    chain = [cfg]
    while chain[-1].t > 9:
        _, nxt = descent_step(chain[-1])
        chain.append(nxt)
    return chain


@dataclass(frozen=True)
class CubicSplittingReport:
    """Certificate that the branch sextic splits off a cubic through all nodes.

    J is the half of (pullback of a cubic) - (sum of the nine branch
    curves); it has half-integer coordinates in the modelled lattice.
    Effectivity is certified at lattice level by J^2 >= -2, and the
    multiplicity-one condition by J.A_i = 1 for all i.
    """

    ok: bool
    issues: tuple[str, ...]
    evenness: EvennessCertificate
    J: tuple[Fraction, ...] | None = None
    curve_pairings: tuple[Fraction, ...] | None = None
    J_square: Fraction | None = None

    def __bool__(self) -> bool:
        return self.ok

    def to_json(self) -> dict:
        doc: dict = {
            "ok": self.ok,
            "issues": list(self.issues),
            "evenness": self.evenness.to_json(),
        }
        if self.J is not None:
            doc["J"] = [str(c) for c in self.J]
            doc["J_pairings"] = [str(p) for p in self.curve_pairings or ()]
            doc["J_square"] = str(self.J_square)
        return doc


def cubic_splitting_certificate(
    cfg: BranchConfiguration, pullback_cubic: DivisorClass
) -> CubicSplittingReport:
    """Certify the two-cubics splitting at the terminal descent state.

    Requires t = 9 and Bp^2 = 2.  Solves 2J = pullback_cubic - sum(A_i)
    through the declared divisibilities; on success checks J.A_i = 1 for
    every branch curve and J^2 >= -2 (effectivity on a K3 by
    Riemann-Roch, at lattice level).  A divisibility failure is returned
    as a failed report, not raised.
    """
    report = _require_valid(cfg)
    if cfg.t != 9:
        raise ValueError(f"splitting certificate requires t = 9, got {cfg.t}")
    if report.Bp2 != 2:
        raise ValueError(f"splitting certificate requires Bp^2 = 2, got {report.Bp2}")
    lat = cfg.lattice
    X = pullback_cubic - class_sum(cfg.A, lat.rank)
    cert = lat.is_even(X)
    if not cert:
        return CubicSplittingReport(
            ok=False,
            issues=("pullback_cubic - sum(A_i) is not 2-divisible over the declared classes",),
            evenness=cert,
        )
    J = tuple(Fraction(c, 2) for c in X.coords)
    pairings = tuple(Fraction(lat.pair(X, a), 2) for a in cfg.A)
    j_square = lat.half_square(X)
    issues = [
        f"J.A[{i}] = {p}, expected 1 (multiplicity-one condition)"
        for i, p in enumerate(pairings)
        if p != 1
    ]
    if j_square < -2:
        issues.append(f"J^2 = {j_square} < -2; effectivity certificate fails")
    return CubicSplittingReport(
        ok=not issues,
        issues=tuple(issues),
        evenness=cert,
        J=J,
        curve_pairings=pairings,
        J_square=j_square,
    )
