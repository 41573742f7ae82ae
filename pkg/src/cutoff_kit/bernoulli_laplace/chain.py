"""Red-ball count of the two-urn exchange chain: kernel, equilibrium, mean and exact profiles."""
from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
import pandas as pd
from scipy.special import gammaln

from cutoff_kit.concentration import (
    ContractiveParams,
    DiscreteChainBoundParams,
    contractive_bound,
    discrete_chain_tail_bound,
    empirical_tail_verify,
)
from cutoff_kit.config import DEFAULT_CHUNK_SIZE
from cutoff_kit.cutoff import TVProfile
from cutoff_kit.enums import ContractiveMode, ProfileKind, TimeDomain
from cutoff_kit.markov_core import DenseKernel, ProbVector, SeedSpec, evolve_distribution, tv_profile


__all__ = [
    'BLParams',
    'bl_move_probs',
    'bl_kernel',
    'bl_equilibrium',
    'bl_mean',
    'r_n',
    'bl_tv_profile',
    'bl_profiles',
    'bl_exact_moments',
    'bl_step_ensemble',
    'bl_concentration_verify',
]


logger = logging.getLogger(__name__)

# absorbs representation error in n log n / 4 + delta n before flooring
_FLOOR_TOL = 1e-9


@dataclass(frozen=True)
class BLParams:
    """n red and n white balls, n in each urn; the state is the red count of the left urn."""
    n: int

    def __post_init__(self):
        if isinstance(self.n, bool) or not isinstance(self.n, (int, np.integer)) or self.n < 2:
            raise ValueError(f'BLParams.n must be an integer >= 2, got {self.n!r}')
        object.__setattr__(self, 'n', int(self.n))

    @property
    def size(self) -> int:
        return self.n + 1

    def check_state(self, j: int):
        if not 0 <= j <= self.n:
            raise ValueError(f'state {j} outside 0..{self.n}')


def bl_move_probs(j, n: int) -> tuple[np.ndarray, np.ndarray]:
    """(up, down) probabilities at red count j: (1 - j/n)^2 and (j/n)^2."""
    x = np.asarray(j, dtype=float) / n
    return (1 - x) ** 2, x**2


def bl_kernel(p: BLParams) -> DenseKernel:
    n = p.n
    j = np.arange(n + 1)
    up, down = bl_move_probs(j, n)
    x = j / n
    rows = np.zeros((n + 1, n + 1))
    rows[j[:-1], j[:-1] + 1] = up[:-1]
    rows[j[1:], j[1:] - 1] = down[1:]
    # 1 - up - down, written so it is exactly 0 at both ends
    rows[j, j] = 2 * x * (1 - x)
    return DenseKernel(rows)


def bl_equilibrium(p: BLParams) -> ProbVector:
    '''Hypergeometric(2n, n, n): pi(j) = C(n, j) C(n, n - j) / C(2n, n).

    Evaluated in log space; factorials overflow doubles near n = 90.
    '''
    n = p.n
    j = np.arange(n + 1)
    log_choose = gammaln(n + 1) - gammaln(j + 1) - gammaln(n - j + 1)
    log_pi = 2 * log_choose - (gammaln(2 * n + 1) - 2 * gammaln(n + 1))
    weights = np.exp(log_pi - log_pi.max())
    return ProbVector.normalized(weights)


def bl_mean(j: int, p: BLParams, r: int) -> float:
    """E_j X(r) = n [(j/n - 1/2)(1 - 2/n)^r + 1/2]."""
    p.check_state(j)
    if r < 0:
        raise ValueError(f'number of steps must be >= 0, got {r}')
    n = p.n
    return n * ((j / n - 0.5) * (1 - 2 / n) ** r + 0.5)


def r_n(delta: float, p: BLParams) -> int:
    """floor(n log n / 4 + delta n), natural log; a negative value is an error."""
    n = p.n
    value = math.floor(n * math.log(n) / 4 + delta * n + _FLOOR_TOL)
    if value < 0:
        raise ValueError(f'r_n({delta}) is negative ({value}) for n={n}; need delta >= {-math.log(n) / 4:.6g}')
    return value


def bl_tv_profile(p: BLParams, j0: int, r_max: int) -> TVProfile:
    """Exact TV(L_j0(X(r)), pi) for r = 0..r_max."""
    p.check_state(j0)
    values = tv_profile(bl_kernel(p), ProbVector.point_mass(p.size, j0), bl_equilibrium(p), r_max)
    return TVProfile(
        times=np.arange(r_max + 1),
        values=values,
        kind=ProfileKind.exact,
        time_domain=TimeDomain.discrete,
        notes=(f'bernoulli-laplace n={p.n} start={j0}',),
    )


def bl_profiles(
    ns: Sequence[int],
    r_max: dict[int, int] | int | None = None,
    delta_max: float = 3.0,
    threads: int = 1,
) -> dict[int, TVProfile]:
    '''Worst-case (start j0 = n) exact profiles for several n, computed in parallel.

    r_max defaults to r_n(delta_max) for each n.
    '''
    def horizon(n: int) -> int:
        if r_max is None:
            return r_n(delta_max, BLParams(n))
        return r_max[n] if isinstance(r_max, dict) else int(r_max)

    def compute(n: int) -> TVProfile:
        logger.debug('exact profile n=%d up to r=%d', n, horizon(n))
        return bl_tv_profile(BLParams(n), n, horizon(n))

    ns = [int(n) for n in ns]
    with ThreadPoolExecutor(max_workers=max(1, min(threads, len(ns)))) as pool:
        return dict(zip(ns, pool.map(compute, ns)))


def bl_exact_moments(p: BLParams, j0: int, r_max: int) -> pd.DataFrame:
    """Exact mean and variance of X(r) from j0 for r = 0..r_max (columns r, mean, variance)."""
    p.check_state(j0)
    kernel = bl_kernel(p)
    dist = ProbVector.point_mass(p.size, j0)
    means, variances = np.empty(r_max + 1), np.empty(r_max + 1)
    for r in range(r_max + 1):
        means[r], variances[r] = dist.mean(), dist.variance()
        dist = evolve_distribution(kernel, dist, 1)
    return pd.DataFrame({'r': np.arange(r_max + 1), 'mean': means, 'variance': variances})


def bl_step_ensemble(states: np.ndarray, n: int, rng: np.random.Generator) -> np.ndarray:
    """One chain step for every entry of `states`, from a single uniform each."""
    up, down = bl_move_probs(states, n)
    u = rng.random(states.shape[0])
    return states + (u < up) - ((u >= up) & (u < up + down))


def _run_chain(n: int, j0: int, r: int, size: int, rng: np.random.Generator) -> np.ndarray:
    states = np.full(size, j0, dtype=np.int64)
    for _ in range(r):
        states = bl_step_ensemble(states, n, rng)
    return states


def bl_concentration_verify(
    p: BLParams,
    j0: int,
    r_grid: Sequence[int],
    c_grid: Sequence[float],
    trials: int,
    seed: SeedSpec | int,
    *,
    bound: str = 'discrete',
    chunk_size: int = DEFAULT_CHUNK_SIZE,
    threads: int = 1,
    progress: bool = False,
) -> pd.DataFrame:
    '''P(|X(r) - E_j0 X(r)| >= c sqrt(n)) against the chain's tail bound.

    bound='discrete' uses a_k = n/2, beta = 1; bound='contractive' uses the
    contractive form with L = D = 1, rho = 2/n. Both are at most 2 exp(-c^2/2)
    for c <= 3 sqrt(n)/4, which is reported in the `gaussian` column.
    Columns: horizon, c, m, empirical, bound, SE, pass, gaussian.
    '''
    p.check_state(j0)
    n = p.n
    if bound not in ('discrete', 'contractive'):
        raise ValueError(f"bound must be 'discrete' or 'contractive', got {bound!r}")
    chain_params = DiscreteChainBoundParams(beta=1.0, a_k=n / 2)
    contraction = ContractiveParams(L=1.0, D=1.0, rho=2 / n)

    def bound_fn(m: float) -> float:
        if bound == 'discrete':
            return discrete_chain_tail_bound(m, chain_params)
        return contractive_bound(m, contraction, ContractiveMode.discrete_a)

    seed = SeedSpec.coerce(seed)
    c_values = np.asarray(c_grid, dtype=float)
    frames = []
    for i, r in enumerate(r_grid):
        report = empirical_tail_verify(
            lambda size, rng, r=r: _run_chain(n, j0, r, size, rng),
            center=bl_mean(j0, p, r),
            m_grid=c_values * math.sqrt(n),
            bound_fn=bound_fn,
            n_samples=trials,
            seed=seed.child(i),
            chunk_size=chunk_size,
            threads=threads,
            progress=progress,
        )
        frame = report.frame.copy()
        frame.insert(0, 'c', c_values)
        frame.insert(0, 'horizon', r)
        frame['gaussian'] = np.minimum(1.0, 2 * np.exp(-c_values**2 / 2))
        frames.append(frame)
    return pd.concat(frames, ignore_index=True)
