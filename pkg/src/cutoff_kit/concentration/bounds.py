"""Closed-form tail and coalescence bounds. Every evaluator clamps to [0, 1]."""
from __future__ import annotations
from typing import Any

import math
from collections.abc import Mapping
from dataclasses import dataclass, fields

from cutoff_kit.enums import BoundName, ContractiveMode


__all__ = [
    'MartingaleBoundParams',
    'DiscreteChainBoundParams',
    'ContinuousChainBoundParams',
    'ContractiveParams',
    'HittingBoundParams',
    'mg_tail_bound',
    'discrete_chain_tail_bound',
    'continuous_chain_tail_bound',
    'contractive_denominator',
    'contractive_bound',
    'hitting_time_bound',
    'BOUND_PARAMS',
    'evaluate_bound',
]


def _non_negative(owner: object, *names: str):
    for name in names:
        value = getattr(owner, name)
        if value is None or not value >= 0 or not math.isfinite(value):
            raise ValueError(f'{type(owner).__name__}.{name} must be a finite number >= 0, got {value!r}')


def _positive(owner: object, *names: str):
    for name in names:
        value = getattr(owner, name)
        if value is None or not value > 0 or not math.isfinite(value):
            raise ValueError(f'{type(owner).__name__}.{name} must be a finite number > 0, got {value!r}')


@dataclass(frozen=True)
class MartingaleBoundParams:
    delta: float
    gamma: float

    def __post_init__(self):
        _non_negative(self, 'delta', 'gamma')


@dataclass(frozen=True)
class DiscreteChainBoundParams:
    beta: float
    a_k: float
    k: int | None = None

    def __post_init__(self):
        _non_negative(self, 'beta', 'a_k')


@dataclass(frozen=True)
class ContinuousChainBoundParams:
    beta_hat: float
    a_hat_t: float
    t: float | None = None

    def __post_init__(self):
        _non_negative(self, 'beta_hat', 'a_hat_t')
        if self.t is not None:
            _non_negative(self, 't')


@dataclass(frozen=True)
class ContractiveParams:
    '''
    L: Lipschitz constant of f in the coupling metric
    D: largest one-step distance
    rho: contraction constant, in (0, 1] for discrete time
    q: bound on the total exit rate (continuous time)
    b: excursion correction b_k / b_t of the restricted-region variants
    horizon: k steps or t time units (required by the excursion variants)
    '''
    L: float
    D: float
    rho: float
    q: float | None = None
    b: float = 0.0
    horizon: float | None = None

    def __post_init__(self):
        _positive(self, 'L', 'D', 'rho')
        _non_negative(self, 'b')
        if self.q is not None:
            _positive(self, 'q')
        if self.horizon is not None:
            _non_negative(self, 'horizon')


@dataclass(frozen=True)
class HittingBoundParams:
    phi: float
    t0: float
    B: float
    eta: float
    r: float
    K_H: float = 1.0

    def __post_init__(self):
        _positive(self, 'phi', 't0', 'eta', 'r')
        _non_negative(self, 'K_H')
        if not self.B >= self.eta:
            raise ValueError(f'HittingBoundParams.B must be >= eta, got B={self.B!r}, eta={self.eta!r}')


def _tail(m: float, denominator: float) -> float:
    if not m >= 0:
        raise ValueError(f'deviation m must be >= 0, got {m!r}')
    if m == 0:
        return 1.0
    if denominator <= 0:
        # no variance and no increments: the deviation is impossible
        return 0.0
    return min(1.0, 2.0 * math.exp(-m * m / denominator))


def mg_tail_bound(m: float, p: MartingaleBoundParams) -> float:
    """min(1, 2 exp(-m^2 / (2 delta + 2 gamma m / 3)))"""
    return _tail(m, 2 * p.delta + 2 * p.gamma * m / 3)


def discrete_chain_tail_bound(m: float, p: DiscreteChainBoundParams) -> float:
    # martingale bound with delta = a_k and increments bounded by 2 beta
    return mg_tail_bound(m, MartingaleBoundParams(delta=p.a_k, gamma=2 * p.beta))


def continuous_chain_tail_bound(m: float, p: ContinuousChainBoundParams) -> float:
    return mg_tail_bound(m, MartingaleBoundParams(delta=p.a_hat_t, gamma=p.beta_hat))


def contractive_denominator(m: float, p: ContractiveParams, mode: ContractiveMode | str) -> float:
    '''
    Raises:
        ValueError: a field the mode needs is missing (q for continuous time,
            horizon for the excursion variants) or rho > 1 in discrete time.
    '''
    mode = ContractiveMode(mode)
    LD = p.L * p.D
    if mode.is_continuous:
        if p.q is None:
            raise ValueError(f'mode {mode} needs the exit-rate bound q')
    elif p.rho > 1:
        raise ValueError(f'discrete-time contraction needs rho <= 1, got {p.rho}')
    if mode.has_excursion_term and p.horizon is None:
        raise ValueError(f'mode {mode} needs a horizon (k steps or t time units)')

    if mode == ContractiveMode.discrete_a:
        return 2 * LD**2 / (2 * p.rho - p.rho**2) + 4 * LD * m / 3
    if mode == ContractiveMode.discrete_b:
        return 2 * LD**2 / (2 * p.rho - p.rho**2) + 16 * p.horizon * p.b**2 + 4 * (LD + 2 * p.b) * m / 3
    if mode == ContractiveMode.continuous_a:
        return p.q * LD**2 / p.rho + 2 * LD * m / 3
    return p.q * LD**2 / p.rho + 16 * p.q * p.horizon * p.b**2 + 2 * (LD + 2 * p.b) * m / 3


def contractive_bound(m: float, p: ContractiveParams, mode: ContractiveMode | str) -> float:
    if not m >= 0:
        raise ValueError(f'deviation m must be >= 0, got {m!r}')
    return _tail(m, contractive_denominator(m, p, mode))


def hitting_time_bound(p: HittingBoundParams) -> float:
    """Bound on P(T* >= t0): min(1, phi/sqrt(t0) + K_H (B / (eta sqrt(r t0)))^(1/4))."""
    return min(1.0, p.phi / math.sqrt(p.t0) + p.K_H * (p.B / (p.eta * math.sqrt(p.r * p.t0))) ** 0.25)


BOUND_PARAMS: dict[BoundName, type] = {
    BoundName.mg: MartingaleBoundParams,
    BoundName.discrete: DiscreteChainBoundParams,
    BoundName.continuous: ContinuousChainBoundParams,
    BoundName.contractive: ContractiveParams,
    BoundName.hitting: HittingBoundParams,
}


def evaluate_bound(
    name: BoundName | str,
    params: Mapping[str, Any],
    m: float | None = None,
    mode: ContractiveMode | str | None = None,
) -> float:
    '''Evaluate a bound from a flat parameter mapping; unused keys are ignored.

    Raises:
        ValueError: m or mode is missing where required, or params are invalid.
    '''
    name = BoundName(name)
    params_cls = BOUND_PARAMS[name]
    accepted = {f.name for f in fields(params_cls)}
    try:
        p = params_cls(**{key: value for key, value in params.items() if key in accepted and value is not None})
    except TypeError as e:
        missing = sorted(accepted - {key for key, value in params.items() if value is not None})
        raise ValueError(f'bound {name} is missing parameters, known fields not given: {missing}') from e
    if name == BoundName.hitting:
        return hitting_time_bound(p)
    if m is None:
        raise ValueError(f'bound {name} needs a deviation m')
    if name == BoundName.mg:
        return mg_tail_bound(m, p)
    if name == BoundName.discrete:
        return discrete_chain_tail_bound(m, p)
    if name == BoundName.continuous:
        return continuous_chain_tail_bound(m, p)
    if mode is None:
        raise ValueError('the contractive bound needs a mode')
    return contractive_bound(m, p, mode)
