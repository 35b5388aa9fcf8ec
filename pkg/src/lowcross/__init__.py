"""Low-crossing matchings, low-discrepancy colorings, and
epsilon-approximations of finite set systems via randomized primal-dual
reweighing, with geometric range families and brute-force verification
oracles."""

from .approx import (
    ApproxResult,
    approximate,
    calibrate_c_apx,
    eps_error,
    larger_color_class,
    vc_bootstrap_approximate,
)
from .core import (
    AssumptionParams,
    CallCounter,
    Edge,
    ExplicitSetSystem,
    RestrictedSetSystem,
    SetSystem,
    params_from_dual_shatter,
)
from .discrepancy import (
    Coloring,
    color_from_matching,
    discrepancy,
    low_disc_color,
    low_disc_color_dual_shatter,
    random_coloring,
)
from .geometry import (
    Ball,
    GeometricSetSystem,
    HalfSpace,
    SemialgebraicRange,
    build_ball_testset,
    build_halfspace_testset,
    gen_points,
    grid_instance,
    lift_ball_system,
    semialg_dual_shatter_params,
)
from .matching import (
    InfeasibleSampleError,
    Matching,
    MwuConfig,
    build_matching,
    crossing_number,
    partial_matching,
)
from .presample import (
    GridLowerBoundCheck,
    grid_lowerbound_check,
    low_disc_color_presampled,
    matching_presampled,
    presample_probability,
    relaxed_mwu,
)
from .weights import CompleteEdgeSet, ListEdgeSet, WeightedIndex, binomial_subset

__version__ = "0.1.0"
