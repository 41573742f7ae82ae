"""Desk experiment for the coalescence bound: hitting time of 0 by a continuous-time walk."""
from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
import pandas as pd

from cutoff_kit.concentration.bounds import HittingBoundParams, hitting_time_bound
from cutoff_kit.concentration.verify import SE_SLACK, binomial_se
from cutoff_kit.config import DEFAULT_CHUNK_SIZE
from cutoff_kit.markov_core import SeedSpec, run_chunks


__all__ = ['HittingReport', 'hitting_walk_experiment', 'walk_hitting_times']


logger = logging.getLogger(__name__)

_BLOCK = 1024


def _steps_to_zero(start: int, n_walkers: int, cap: int, rng: np.random.Generator) -> np.ndarray:
    """Embedded-chain steps for a +-1 walk from `start` to reach 0; cap + 1 when it has not by `cap`."""
    steps = np.full(n_walkers, cap + 1, dtype=np.int64)
    position = np.full(n_walkers, start, dtype=np.int64)
    alive = np.arange(n_walkers)
    taken = 0
    while alive.size and taken < cap:
        block = min(_BLOCK, cap - taken)
        moves = rng.integers(0, 2, size=(alive.size, block), dtype=np.int8) * 2 - 1
        path = position[alive, None] + np.cumsum(moves, axis=1, dtype=np.int64)
        at_zero = path == 0
        hit = at_zero.any(axis=1)
        steps[alive[hit]] = taken + 1 + at_zero[hit].argmax(axis=1)
        position[alive] = path[:, -1]
        alive = alive[~hit]
        taken += block
    return steps


def walk_hitting_times(
    r: float, start: int, n_walkers: int, horizon: float, rng: np.random.Generator
) -> np.ndarray:
    '''Hitting times of 0 for a walk jumping +-1 at rate r each way, started at `start`.

    Given K embedded steps the hitting time is Gamma(K, 1/(2r)). Walks are run
    for at most 2r*horizon + 10 sqrt(2r*horizon) steps; a censored walk gets
    the time of its cap-th event, which exceeds `horizon` except with
    probability far below Monte-Carlo resolution.
    '''
    mean_events = 2 * r * horizon
    cap = math.ceil(mean_events + 10 * math.sqrt(mean_events))
    steps = _steps_to_zero(start, n_walkers, cap, rng)
    return rng.gamma(np.minimum(steps, cap), 1.0 / (2 * r))



@dataclass(frozen=True, eq=False)
class HittingReport:
    '''
    frame columns: t0, empirical (P(T* >= t0)), SE, bound, leading (phi/sqrt(t0)), pass.
    monotone is False when the empirical miss probability rises by more than
    3 SE from one t0 to a later one.
    '''
    frame: pd.DataFrame
    start: int
    trials: int
    monotone: bool

    @property
    def all_passed(self) -> bool:
        return bool(self.frame['pass'].all()) and self.monotone


def hitting_walk_experiment(
    r: float,
    phi: float,
    t0_grid: Sequence[float],
    trials: int,
    seed: SeedSpec | int,
    *,
    K_H: float = 1.0,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
    threads: int = 1,
    progress: bool = False,
) -> HittingReport:
    '''Empirical P(T* >= t0) for the walk started at ceil(phi sqrt(r)), against the hitting bound.

    The walk moves by 1 at rate r in each direction, so B = eta = 1 in the bound.
    '''
    if r <= 0 or phi <= 0:
        raise ValueError('rate r and height phi must be positive')
    if trials < 1:
        raise ValueError(f'trials must be >= 1, got {trials}')
    t0 = np.asarray(sorted(float(t) for t in t0_grid))
    if t0.size == 0 or t0[0] <= 0:
        raise ValueError('t0_grid must hold positive times')
    start = math.ceil(phi * math.sqrt(r))
    horizon = float(t0[-1])

    def count(sl: slice, rng: np.random.Generator) -> np.ndarray:
        times = walk_hitting_times(r, start, sl.stop - sl.start, horizon, rng)
        return (times[:, None] >= t0[None, :]).sum(axis=0)

    counts = np.sum(
        run_chunks(count, trials, seed, chunk_size=chunk_size, threads=threads,
                   description='Walking to zero', progress=progress),
        axis=0,
    )
    empirical = counts / trials
    se = binomial_se(empirical, trials)
    bounds = np.array([hitting_time_bound(HittingBoundParams(phi=phi, t0=t, B=1.0, eta=1.0, r=r, K_H=K_H)) for t in t0])
    frame = pd.DataFrame({
        't0': t0,
        'empirical': empirical,
        'SE': se,
        'bound': bounds,
        'leading': phi / np.sqrt(t0),
        'pass': empirical <= bounds + SE_SLACK * se,
    })
    rises = np.diff(empirical) > SE_SLACK * np.hypot(se[1:], se[:-1])
    monotone = not bool(rises.any())
    logger.info('walk from %d at rate %g: P(T* >= %g) = %.4g', start, r, t0[-1], empirical[-1])
    return HittingReport(frame=frame, start=start, trials=trials, monotone=monotone)
