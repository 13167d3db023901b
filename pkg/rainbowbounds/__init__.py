from .config import CH_CONSTANT, Settings, load_settings
from .data import (
    ConditionResidual,
    TriangleBoundInputs,
    Triple,
    TripleCensus,
    Violation,
)
from .experiment import (
    ExperimentConfig,
    ExperimentReport,
    TrialOutcome,
    emit_bound_table,
    emit_table1,
    generate_instance,
    load_bound_table,
    run_experiment,
)
from .feasibility import (
    CoverBounds,
    FeasibilityReport,
    ParameterPoint,
    SearchResult,
    appendix_a_bound,
    check_ch_system,
    check_surplus_system,
    check_thm31,
    check_thm41,
    cover_quadratic,
    cover_quadratic_root,
    large_cover_bounds,
    minimize_delta,
    minimize_t,
    minimize_t_thm41,
    r_ge5_k_bound,
    sweep_delta,
)
from .graph import (
    EdgeColoredGraph,
    Graph,
    bound_inputs,
    empty_triple_count,
    find_all_rainbow_triangles,
    find_rainbow_triangle,
    goodman_lower_bound,
    happy_triple_count,
    induced_h_count,
    refined_lower_bound,
    triangle_count,
    triple_census,
)
from .happy import (
    ConvexBound,
    DpTable,
    OracleResult,
    brute_force_max_happy,
    build_dp_table,
    convex_argmin,
    extremal_construction,
    f_bound,
    verify_lemma,
)

__version__ = "0.1.0"
