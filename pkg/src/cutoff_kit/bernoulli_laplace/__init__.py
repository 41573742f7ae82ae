from cutoff_kit.bernoulli_laplace.chain import (
    BLParams,
    bl_concentration_verify,
    bl_equilibrium,
    bl_exact_moments,
    bl_kernel,
    bl_mean,
    bl_move_probs,
    bl_profiles,
    bl_step_ensemble,
    bl_tv_profile,
    r_n,
)
from cutoff_kit.bernoulli_laplace.coupling import (
    BLCoupledState,
    CouplingReport,
    bl_coupled_ensemble,
    bl_coupled_step,
    bl_coupled_step_ensemble,
    bl_coupling_experiment,
    coupling_probs,
)
from cutoff_kit.bernoulli_laplace.ehrenfest import (
    EhrenfestParams,
    SurrogateReport,
    bl_surrogate_comparison,
    centred_bl_kernel,
    ehrenfest_kernel,
    ehrenfest_stationary,
    ehrenfest_tv_bound,
    ehrenfest_tv_bound_check,
)
from cutoff_kit.bernoulli_laplace.window import (
    DEFAULT_DELTA_GRID,
    WindowFitReport,
    bl_cutoff_check,
    bl_window_fit,
    tv_at_deltas,
)


__all__ = [
    'BLParams',
    'bl_concentration_verify',
    'bl_equilibrium',
    'bl_exact_moments',
    'bl_kernel',
    'bl_mean',
    'bl_move_probs',
    'bl_profiles',
    'bl_step_ensemble',
    'bl_tv_profile',
    'r_n',
    'BLCoupledState',
    'CouplingReport',
    'bl_coupled_ensemble',
    'bl_coupled_step',
    'bl_coupled_step_ensemble',
    'bl_coupling_experiment',
    'coupling_probs',
    'EhrenfestParams',
    'SurrogateReport',
    'bl_surrogate_comparison',
    'centred_bl_kernel',
    'ehrenfest_kernel',
    'ehrenfest_stationary',
    'ehrenfest_tv_bound',
    'ehrenfest_tv_bound_check',
    'DEFAULT_DELTA_GRID',
    'WindowFitReport',
    'bl_cutoff_check',
    'bl_window_fit',
    'tv_at_deltas',
]
