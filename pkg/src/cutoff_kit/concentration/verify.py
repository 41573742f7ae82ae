"""Monte-Carlo falsification harness for the tail bounds."""
from __future__ import annotations

import logging
from collections.abc import Callable, Sequence
from dataclasses import dataclass

import numpy as np
import pandas as pd

from cutoff_kit.config import DEFAULT_CHUNK_SIZE
from cutoff_kit.markov_core import SeedSpec, run_chunks


__all__ = [
    'MIN_TAIL_SAMPLES',
    'SE_SLACK',
    'TAIL_COLUMNS',
    'TailReport',
    'binomial_se',
    'empirical_tail_verify',
    'estimate_excursion_constant',
]


logger = logging.getLogger(__name__)

MIN_TAIL_SAMPLES = 1000
SE_SLACK = 3.0
TAIL_COLUMNS = ['m', 'empirical', 'bound', 'SE', 'pass']

# (number of values, generator) -> array of f-values
Sampler = Callable[[int, np.random.Generator], np.ndarray]


@dataclass(frozen=True, eq=False)
class TailReport:
    frame: pd.DataFrame
    center: float
    n_samples: int

    @property
    def all_passed(self) -> bool:
        return bool(self.frame['pass'].all())


def binomial_se(p: np.ndarray | float, n: int) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    return np.sqrt(p * (1 - p) / n)


def empirical_tail_verify(
    sampler: Sampler,
    center: float,
    m_grid: Sequence[float],
    bound_fn: Callable[[float], float],
    n_samples: int,
    seed: SeedSpec | int,
    *,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
    threads: int = 1,
    progress: bool = False,
) -> TailReport:
    '''Compare empirical P(|f - center| >= m) with bound_fn(m) on every m.

    A row passes iff empirical <= bound + 3 SE, SE being the binomial standard
    error of the empirical frequency.
    '''
    if n_samples < MIN_TAIL_SAMPLES:
        raise ValueError(f'n_samples must be >= {MIN_TAIL_SAMPLES}, got {n_samples}')
    m_values = np.asarray(m_grid, dtype=float)

    def count(sl: slice, rng: np.random.Generator) -> np.ndarray:
        values = np.asarray(sampler(sl.stop - sl.start, rng), dtype=float)
        deviation = np.abs(values - center)
        return (deviation[:, None] >= m_values[None, :]).sum(axis=0)

    counts = np.sum(
        run_chunks(count, n_samples, seed, chunk_size=chunk_size, threads=threads,
                   description='Sampling tails', progress=progress),
        axis=0,
    )
    empirical = counts / n_samples
    se = binomial_se(empirical, n_samples)
    bounds = np.array([bound_fn(float(m)) for m in m_values])
    passed = empirical <= bounds + SE_SLACK * se
    if not passed.all():
        logger.warning('tail bound exceeded beyond %g SE at m=%s', SE_SLACK, m_values[~passed].tolist())
    frame = pd.DataFrame({'m': m_values, 'empirical': empirical, 'bound': bounds, 'SE': se, 'pass': passed})
    return TailReport(frame=frame, center=float(center), n_samples=n_samples)


def estimate_excursion_constant(f_values, exited) -> float:
    '''Heuristic b_k / b_t: max over starts and times of |mean of f(X(i)) 1[left the region before i]|.

    Args:
        f_values: array (starts, trials, times) of f along simulated paths
        exited: boolean array of the same shape, True once the path has left the region

    The supremum over all starts is replaced by a max over the simulated ones,
    so the value is an estimate, not a guaranteed constant.
    '''
    f_values = np.asarray(f_values, dtype=float)
    exited = np.asarray(exited, dtype=bool)
    if f_values.shape != exited.shape or f_values.ndim != 3:
        raise ValueError('f_values and exited must be arrays of equal shape (starts, trials, times)')
    estimate = float(np.abs((f_values * exited).mean(axis=1)).max())
    logger.info('heuristic excursion constant estimate %.6g from %d starts', estimate, f_values.shape[0])
    return estimate
