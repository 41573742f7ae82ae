from cutoff_kit.concentration.bounds import (
    BOUND_PARAMS,
    ContinuousChainBoundParams,
    ContractiveParams,
    DiscreteChainBoundParams,
    HittingBoundParams,
    MartingaleBoundParams,
    continuous_chain_tail_bound,
    contractive_bound,
    contractive_denominator,
    discrete_chain_tail_bound,
    evaluate_bound,
    hitting_time_bound,
    mg_tail_bound,
)
from cutoff_kit.concentration.verify import TailReport, empirical_tail_verify, estimate_excursion_constant
from cutoff_kit.concentration.hitting import HittingReport, hitting_walk_experiment, walk_hitting_times


__all__ = [
    'BOUND_PARAMS',
    'ContinuousChainBoundParams',
    'ContractiveParams',
    'DiscreteChainBoundParams',
    'HittingBoundParams',
    'MartingaleBoundParams',
    'continuous_chain_tail_bound',
    'contractive_bound',
    'contractive_denominator',
    'discrete_chain_tail_bound',
    'evaluate_bound',
    'hitting_time_bound',
    'mg_tail_bound',
    'TailReport',
    'empirical_tail_verify',
    'estimate_excursion_constant',
    'HittingReport',
    'hitting_walk_experiment',
    'walk_hitting_times',
]
