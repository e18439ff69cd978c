"""Exact tracking of drifting optima with a delayed-gradient recursion.

The iteration x(t+1) = 2 x(t) - x(t-1) - alpha grad f(x(t), t)
+ gamma grad f(x(t-1), t-1) follows minimizers that move at a constant
unknown velocity with zero steady-state error.  The package bundles the
recursion itself, a coefficient-triangle and circle-criterion certification
layer, rate-optimal parameter design, single-integrator baselines for
comparison, and a range-based localization example where the theory's
sector bound is checked numerically rather than assumed.
"""

from .oracles import (
    CostOracle,
    MembershipReport,
    OptimumTrajectory,
    SectorBounds,
    low_discrepancy_samples,
    make_quadratic,
    sector_residual,
    verify_sector_membership,
)
from .tracker import (
    DELAYED_CURRENT,
    DELAYED_PREVIOUS,
    LureState,
    RecursionState,
    SimulationFault,
    TrackerParams,
    Trajectory,
    lure_init,
    lure_matrices,
    run,
    step_lure,
    step_recursion,
)
from .certification import (
    Certificate,
    CharPolyCoeffs,
    DesignResult,
    SegmentJ,
    TriangleRegion,
    UnitCirclePoleError,
    certify,
    char_poly,
    coefficient_segment,
    design_optimal,
    g0_eval,
    h0_eval,
    jury_membership,
    kappa_bar,
    kappa_max,
    r_rate,
    r_rate_argmax,
    rho_star,
    schur_check,
    segment_in_triangle,
    spectral_radius,
    spr_check,
)
from .baselines import (
    METHODS,
    BaselineParams,
    default_baseline_params,
    gd_defaults,
    heavy_ball_defaults,
    run_baseline,
    tmm_defaults,
)
from .toa import (
    ComparisonResult,
    HessianScan,
    Scenario,
    SensorSingularityError,
    hessian_bound_scan,
    make_toa_oracle,
    range_measurements,
    run_comparison,
    toa_cost,
    toa_gradient,
    toa_hessian,
)

__version__ = "0.1.0"

__all__ = [
    "CostOracle",
    "MembershipReport",
    "OptimumTrajectory",
    "SectorBounds",
    "low_discrepancy_samples",
    "make_quadratic",
    "sector_residual",
    "verify_sector_membership",
    "DELAYED_CURRENT",
    "DELAYED_PREVIOUS",
    "LureState",
    "RecursionState",
    "SimulationFault",
    "TrackerParams",
    "Trajectory",
    "lure_init",
    "lure_matrices",
    "run",
    "step_lure",
    "step_recursion",
    "Certificate",
    "CharPolyCoeffs",
    "DesignResult",
    "SegmentJ",
    "TriangleRegion",
    "UnitCirclePoleError",
    "certify",
    "char_poly",
    "coefficient_segment",
    "design_optimal",
    "g0_eval",
    "h0_eval",
    "jury_membership",
    "kappa_bar",
    "kappa_max",
    "r_rate",
    "r_rate_argmax",
    "rho_star",
    "schur_check",
    "segment_in_triangle",
    "spectral_radius",
    "spr_check",
    "METHODS",
    "BaselineParams",
    "default_baseline_params",
    "gd_defaults",
    "heavy_ball_defaults",
    "run_baseline",
    "tmm_defaults",
    "ComparisonResult",
    "HessianScan",
    "Scenario",
    "SensorSingularityError",
    "hessian_bound_scan",
    "make_toa_oracle",
    "range_measurements",
    "run_comparison",
    "toa_cost",
    "toa_gradient",
    "toa_hessian",
    "__version__",
]
