"""Exact lattice toolkit for Todorov-surface branch configurations.

Pure-integer models of divisor classes on K3 Picard lattices, dual
graphs of (-2)-curves with ADE classification, branch-configuration
validation, canonical resolution of double planes and the K^2 descent.
"""

from .ade import (
    ADEComponent,
    DualGraph,
    DynkinType,
    FundamentalCycle,
    NOT_ADE,
    build_dual_graph,
    classify,
    dynkin_graph,
    even_markings,
    fundamental_cycle,
)
from .config import (
    BranchConfiguration,
    SurfaceInvariants,
    ValidationReport,
    invariants,
    validate,
    xi_census,
    xi_graph,
)
from .cover import (
    InfinitelyNearPoint,
    PlaneBranchCurve,
    ResolutionState,
    canonical_resolution,
    double_plane_invariants,
    is_negligible,
)
from .descent import (
    CubicSplittingReport,
    DescentStep,
    SDCase,
    SDExclusionReport,
    cubic_splitting_certificate,
    descent_step,
    full_descent,
    sd_exclusions,
    select_graph,
    verify_sd_case,
)
from .examples import (
    FixtureDescriptor,
    a17_config,
    a17_plane_branch,
    build_example,
    cubic_pullback,
    describe,
    kummer_config,
    list_examples,
    nine_node_sextic,
    non_kummer_config,
    smooth_sextic,
)
from .lattice import (
    DivisorClass,
    EvennessCertificate,
    IntLattice,
    determinant,
    negative_definite,
    smith_normal_form,
    solve_gf2,
)

__version__ = "0.1.0"
