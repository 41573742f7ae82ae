from cutoff_kit.two_host.model import (
    CoupledEpiState,
    EpiParams,
    EpiState,
    Spectral,
    kappa_diagnostic,
    mean_trajectory,
    spectral_decompose,
    theta_norm,
    travel_time,
)
from cutoff_kit.two_host.rates import (
    CoupledEpiJumpModel,
    EpiJumpModel,
    coupled_rates,
    epi_rates,
    generator_on_distance,
    total_exit_rate,
)
from cutoff_kit.two_host.regions import (
    RegionPredicates,
    StartGrid,
    default_H,
    max_exit_rate,
    region_predicates,
    start_grid,
)
from cutoff_kit.two_host.experiments import (
    ContractionReport,
    DeviationReport,
    EpiCutoffReport,
    burn_in_time,
    coalescence_tv_upper,
    contraction_check,
    deviation_exit_fraction,
    epi_cutoff,
    equilibrium_sample,
    equilibrium_summary,
    simulated_mean,
    tv_lower_profile,
)


__all__ = [
    'CoupledEpiState',
    'EpiParams',
    'EpiState',
    'Spectral',
    'kappa_diagnostic',
    'mean_trajectory',
    'spectral_decompose',
    'theta_norm',
    'travel_time',
    'CoupledEpiJumpModel',
    'EpiJumpModel',
    'coupled_rates',
    'epi_rates',
    'generator_on_distance',
    'total_exit_rate',
    'RegionPredicates',
    'StartGrid',
    'default_H',
    'max_exit_rate',
    'region_predicates',
    'start_grid',
    'ContractionReport',
    'DeviationReport',
    'EpiCutoffReport',
    'burn_in_time',
    'coalescence_tv_upper',
    'contraction_check',
    'deviation_exit_fraction',
    'epi_cutoff',
    'equilibrium_sample',
    'equilibrium_summary',
    'simulated_mean',
    'tv_lower_profile',
]
