"""Ehrenfest surrogate for the centred chain Y = X - n/2 with n = 4k."""
from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
import pandas as pd
from scipy.stats import binom

from cutoff_kit.bernoulli_laplace.chain import BLParams, bl_equilibrium, bl_kernel
from cutoff_kit.markov_core import DenseKernel, ProbVector, tv_distance, tv_profile


__all__ = [
    'EhrenfestParams',
    'ehrenfest_kernel',
    'ehrenfest_stationary',
    'ehrenfest_tv_bound',
    'ehrenfest_tv_bound_check',
    'centred_bl_kernel',
    'SurrogateReport',
    'bl_surrogate_comparison',
]


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EhrenfestParams:
    """2k balls, states -k..k stored at indices 0..2k; stands in for the chain with n = 4k."""
    k: int

    def __post_init__(self):
        if isinstance(self.k, bool) or not isinstance(self.k, (int, np.integer)) or self.k < 1:
            raise ValueError(f'EhrenfestParams.k must be an integer >= 1, got {self.k!r}')
        object.__setattr__(self, 'k', int(self.k))

    @property
    def n(self) -> int:
        return 4 * self.k

    @property
    def states(self) -> np.ndarray:
        return np.arange(-self.k, self.k + 1)

    def index(self, y: int) -> int:
        if abs(y) > self.k:
            raise ValueError(f'state {y} outside -{self.k}..{self.k}')
        return y + self.k


def ehrenfest_kernel(p: EhrenfestParams) -> DenseKernel:
    """up 1/4 - y/4k, down 1/4 + y/4k, stay 1/2."""
    k = p.k
    y = p.states
    i = y + k
    up = 0.25 - y / (4 * k)
    down = 0.25 + y / (4 * k)
    rows = np.zeros((2 * k + 1, 2 * k + 1))
    rows[i[:-1], i[:-1] + 1] = up[:-1]
    rows[i[1:], i[1:] - 1] = down[1:]
    rows[i, i] = 0.5
    return DenseKernel(rows)


def ehrenfest_stationary(p: EhrenfestParams) -> ProbVector:
    """Binomial(2k, 1/2) shifted by -k."""
    return ProbVector.normalized(binom(2 * p.k, 0.5).pmf(np.arange(2 * p.k + 1)))


def ehrenfest_tv_bound(p: EhrenfestParams, y0: int, r) -> np.ndarray | float:
    """{k^(-1/2) (|y0| + sqrt(k/2)) + 8} e^(-2r/n), n = 4k."""
    k = p.k
    return (k**-0.5 * (abs(y0) + math.sqrt(k / 2)) + 8) * np.exp(-2 * np.asarray(r, dtype=float) / p.n)


def ehrenfest_tv_bound_check(p: EhrenfestParams, y0: int, r_grid: Sequence[int]) -> pd.DataFrame:
    """Exact surrogate TV from y0 against the bound; columns r, tv, bound, pass."""
    r_values = np.asarray(sorted(int(r) for r in r_grid))
    if r_values.size == 0 or r_values[0] < 0:
        raise ValueError('r_grid must hold steps >= 0')
    tv = tv_profile(
        ehrenfest_kernel(p), ProbVector.point_mass(2 * p.k + 1, p.index(y0)), ehrenfest_stationary(p), int(r_values[-1])
    )[r_values]
    bound = ehrenfest_tv_bound(p, y0, r_values)
    return pd.DataFrame({'r': r_values, 'tv': tv, 'bound': bound, 'pass': tv <= bound})


def centred_bl_kernel(p: EhrenfestParams) -> DenseKernel:
    '''Exact chain with n = 4k relabelled by y = j - 2k (states -2k..2k).

    Row y: up 1/4 - y/4k + (y/4k)^2, down 1/4 + y/4k + (y/4k)^2, stay 1/2 - 2 (y/4k)^2.
    '''
    return bl_kernel(BLParams(p.n))


@dataclass(frozen=True, eq=False)
class SurrogateReport:
    '''
    frame columns: r, tv_exact (centred chain to its equilibrium),
    tv_surrogate (surrogate to the shifted binomial), tv_between (the two laws at r).
    kernel_row_tv is the largest TV between matching rows over |y| <= k;
    equilibrium_tv compares the two stationary laws.
    '''
    frame: pd.DataFrame
    k: int
    y0: int
    kernel_row_tv: float
    equilibrium_tv: float


def _embed(p: EhrenfestParams, probs: np.ndarray) -> np.ndarray:
    """Surrogate law on -k..k as a vector on the centred states -2k..2k."""
    wide = np.zeros(p.n + 1)
    wide[p.k:3 * p.k + 1] = probs
    return wide


def bl_surrogate_comparison(p: EhrenfestParams, y0: int | None = None, r_max: int | None = None) -> SurrogateReport:
    """Exact side-by-side profiles of the centred chain and its surrogate from the same start."""
    y0 = p.k if y0 is None else y0
    r_max = 4 * p.n if r_max is None else r_max
    start = p.index(y0)
    exact_kernel = np.asarray(centred_bl_kernel(p).rows)
    surrogate_kernel = np.asarray(ehrenfest_kernel(p).rows)
    exact_pi = bl_equilibrium(BLParams(p.n)).probs
    surrogate_pi = ehrenfest_stationary(p).probs

    exact = np.zeros(p.n + 1)
    exact[y0 + 2 * p.k] = 1.0
    surrogate = np.zeros(2 * p.k + 1)
    surrogate[start] = 1.0
    rows = []
    for r in range(r_max + 1):
        rows.append((
            r,
            min(1.0, 0.5 * np.abs(exact - exact_pi).sum()),
            min(1.0, 0.5 * np.abs(surrogate - surrogate_pi).sum()),
            min(1.0, 0.5 * np.abs(exact - _embed(p, surrogate)).sum()),
        ))
        exact = exact @ exact_kernel
        surrogate = surrogate @ surrogate_kernel
    frame = pd.DataFrame(rows, columns=['r', 'tv_exact', 'tv_surrogate', 'tv_between'])

    centre_rows = exact_kernel[p.k:3 * p.k + 1]
    row_tv = max(
        tv_distance(ProbVector(centre_rows[i]), ProbVector(_embed(p, surrogate_kernel[i])))
        for i in range(2 * p.k + 1)
    )
    equilibrium_tv = tv_distance(ProbVector(exact_pi), ProbVector(_embed(p, surrogate_pi)))
    logger.debug('surrogate k=%d: row tv %.3g, equilibrium tv %.3g', p.k, row_tv, equilibrium_tv)
    return SurrogateReport(frame=frame, k=p.k, y0=y0, kernel_row_tv=row_tv, equilibrium_tv=equilibrium_tv)
