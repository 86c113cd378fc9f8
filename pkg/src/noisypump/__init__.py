"""Second-moment dynamics and entanglement lifetime of two parametrically
coupled oscillators under a phase-diffusing pump.

The package integrates the closed, noise-averaged equations for the
rotating-frame second moments, maps them to two-mode Gaussian covariance
matrices, and tracks the logarithmic negativity: its onset, peak, steady
state and lifetime, the thresholds in pump amplitude and bath temperature,
and the critical boundary in the (noise width, boson number) plane.
"""

from .analysis import (
    AnalysisControls,
    EntanglementReport,
    SteadyStateError,
    analyze_trajectory,
    negativity_series,
    run_point,
    steady_state_negativity,
)
from .boundary_fit import (
    BASELINE_CONSTANTS,
    BoundaryConstants,
    BoundarySample,
    FitResult,
    eval_boundary,
    fit_boundary,
)
from .integrate import IntegrationControls, Trajectory, integrate
from .mc_oracle import (
    OracleReport,
    PathEnsemble,
    default_time_step,
    mc_compare,
    propagate_paths,
    run_ensemble,
    simulate_realization,
)
from .model import (
    PHASE_WINDING,
    Generator,
    MomentState,
    PhysicalMoments,
    SystemParams,
    boson_number,
    boson_number_inverse,
    build_generator,
    delta_star,
    drift_matrix,
    forcing_base,
    forcing_mean,
    thermal_initial_state,
)
from .negativity import (
    SYMPLECTIC_FORM,
    VACUUM_VARIANCE,
    NegativityResult,
    NonPhysicalCovarianceError,
    SymplecticInvariants,
    covariance_blocks,
    covariance_from_moments,
    log_negativity,
    log_negativity_from_spectrum,
    negativity_from_moments,
    physicality_defect,
    symplectic_invariants,
    symplectic_spectrum,
)
from .sweep import (
    AxisSpec,
    BoundaryResult,
    SweepControls,
    SweepRow,
    SweepSpec,
    find_boundary,
    run_grid,
)

__version__ = "0.1.0"
