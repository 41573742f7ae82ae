from cutoff_kit.markov_core.types import (
    DenseKernel,
    JumpModel,
    JumpPath,
    ProbVector,
    RateFunction,
    SeedSpec,
    State,
    as_rate_function,
)
from cutoff_kit.markov_core.distributions import (
    empirical_distribution,
    evolve_distribution,
    stationary_distribution,
    tv_distance,
    tv_lower_bound_from_samples,
    tv_profile,
)
from cutoff_kit.markov_core.simulation import simulate_ctmc, simulate_dtmc, step_ensemble
from cutoff_kit.markov_core.ensemble import EnsembleResult, simulate_ctmc_ensemble
from cutoff_kit.markov_core.parallel import chunk_slices, run_chunks


__all__ = [
    'DenseKernel',
    'JumpModel',
    'JumpPath',
    'ProbVector',
    'RateFunction',
    'SeedSpec',
    'State',
    'as_rate_function',
    'empirical_distribution',
    'evolve_distribution',
    'stationary_distribution',
    'tv_distance',
    'tv_lower_bound_from_samples',
    'tv_profile',
    'simulate_ctmc',
    'simulate_dtmc',
    'step_ensemble',
    'EnsembleResult',
    'simulate_ctmc_ensemble',
    'chunk_slices',
    'run_chunks',
]
