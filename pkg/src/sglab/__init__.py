"""Numerical laboratory for sine-Gordon and phi^4 kink dynamics.

Closed-form solutions (kinks, breathers, wobblers, the kink-plus-breather
family), the first-order transform linking vacuum and kink neighborhoods with
its lifting/descent solvers, linearized operators and their spectra,
conservative leapfrog evolution, and shift-modulation diagnostics.
"""

__version__ = "0.1.0"

from .grids import (
    ContractError,
    DEFAULT_GRID,
    FieldState,
    GridSpec,
    Model,
    ParameterError,
    PerturbationPair,
    PHI4,
    SINE_GORDON,
    SolverError,
    WeightSpec,
    derivative,
    local_energy_norm,
    pair_norm,
    parity_check,
    pde_residual,
    quadrature,
    second_derivative,
    weighted_norm_sq,
)
from .solutions import (
    KinkParams,
    SolutionSampler,
    ThreeSolitonParams,
    WobblerParams,
    boost,
    breather,
    kink,
    kink_profile,
    linear_mode,
    phi4_kink,
    three_soliton,
    two_kink,
    wobbler,
    zero_sampler,
)
from .conserved import TopologicalState, energy, manifold_momentum, momentum
from .backlund import (
    BtParameter,
    LiftReport,
    bt_pair_residual,
    bt_residual,
    construct_manifold_data,
    descend_kink_to_zero,
    descend_wobbler_to_breather,
    final_speed_from_delta,
    final_speed_from_momentum,
    lift_breather_to_wobbler,
    lift_with_orthogonality,
    lift_zero_to_kink,
    tilde_residual,
    wobbler_pair_residual,
)
from .spectra import (
    SchrodingerOperator,
    apply_operator,
    discrete_spectrum,
    kink_phi4_dual_operator,
    kink_phi4_operator,
    kink_sg_operator,
    lbt_residual_phi4,
    lbt_residual_phi4_dual,
    lbt_residual_sg,
    wave_residual,
)
from .evolution import EvolveConfig, KinkFrame, Trajectory, evolve, evolve_probe
from .modulation import (
    ModulationRecord,
    TubeExitError,
    convergence_classifier,
    decompose,
    rho_rate_check,
    solve_shift,
    stilde_bound_check,
    track_modulation,
)
