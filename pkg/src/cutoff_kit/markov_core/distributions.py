"""Exact propagation and total variation, plus sample-based estimates."""
from __future__ import annotations

import logging
from collections.abc import Callable, Sequence

import numpy as np

from cutoff_kit.errors import DimensionMismatchError
from cutoff_kit.markov_core.types import DenseKernel, ProbVector


__all__ = [
    'tv_distance',
    'evolve_distribution',
    'tv_profile',
    'stationary_distribution',
    'empirical_distribution',
    'tv_lower_bound_from_samples',
]


logger = logging.getLogger(__name__)


def _probs(p: ProbVector | np.ndarray | Sequence[float]) -> np.ndarray:
    return p.probs if isinstance(p, ProbVector) else ProbVector(p).probs


def tv_distance(p: ProbVector, q: ProbVector) -> float:
    '''Half the l1 distance between two distributions on the same states.'''
    a, b = _probs(p), _probs(q)
    if a.size != b.size:
        raise DimensionMismatchError(f'cannot compare distributions over {a.size} and {b.size} states')
    return float(min(1.0, 0.5 * np.abs(a - b).sum()))


def _check_kernel_dim(kernel: DenseKernel, p: np.ndarray):
    if p.size != kernel.size:
        raise DimensionMismatchError(f'distribution has {p.size} states, kernel has {kernel.size}')


def evolve_distribution(kernel: DenseKernel, p0: ProbVector, r: int) -> ProbVector:
    """Push p0 forward r steps (row vector times kernel^r)."""
    if r < 0:
        raise ValueError(f'number of steps must be >= 0, got {r}')
    p = _probs(p0)
    _check_kernel_dim(kernel, p)
    for _ in range(r):
        p = p @ kernel.rows
    return ProbVector(p / p.sum())


def tv_profile(kernel: DenseKernel, p0: ProbVector, target: ProbVector, r_max: int) -> np.ndarray:
    """Exact TV(p0 P^r, target) for r = 0..r_max, one matrix-vector product per step."""
    if r_max < 0:
        raise ValueError(f'r_max must be >= 0, got {r_max}')
    p, q = _probs(p0), _probs(target)
    _check_kernel_dim(kernel, p)
    _check_kernel_dim(kernel, q)
    rows = np.asarray(kernel.rows)
    values = np.empty(r_max + 1)
    for r in range(r_max + 1):
        values[r] = min(1.0, 0.5 * np.abs(p - q).sum())
        p = p @ rows
    return values


def stationary_distribution(kernel: DenseKernel, tol: float = 1e-14, max_iter: int = 1_000_000) -> ProbVector:
    '''Power iteration on the lazy kernel (I + P)/2 from the uniform law.

    The lazy chain has the same stationary law and is aperiodic, so the
    iteration converges for any irreducible kernel.

    Raises:
        RuntimeError: if the l1 change does not fall below tol within max_iter steps.
    '''
    rows = np.asarray(kernel.lazy().rows)
    p = np.full(kernel.size, 1.0 / kernel.size)
    for i in range(max_iter):
        nxt = p @ rows
        change = np.abs(nxt - p).sum()
        p = nxt
        if change < tol:
            logger.debug('power iteration converged after %d steps', i + 1)
            return ProbVector(p / p.sum())
    raise RuntimeError(f'power iteration did not converge within {max_iter} steps (last change {change:.3g})')


def _as_sample_array(samples) -> np.ndarray:
    arr = np.asarray(samples)
    if arr.size == 0 or arr.shape[0] == 0:
        raise ValueError('samples must be non-empty')
    return arr


def empirical_distribution(samples) -> dict:
    """Map each observed state to its relative frequency.

    Scalar samples give int keys; rows of a 2-D array give tuple keys.
    """
    arr = _as_sample_array(samples)
    if arr.ndim == 1 and arr.dtype != object:
        values, counts = np.unique(arr, return_counts=True)
        keys = [v.item() for v in values]
    elif arr.ndim == 2:
        values, counts = np.unique(arr, axis=0, return_counts=True)
        keys = [tuple(v.item() for v in row) for row in values]
    else:
        tally: dict = {}
        for s in samples:
            tally[s] = tally.get(s, 0) + 1
        keys, counts = list(tally), np.array(list(tally.values()))
    total = float(np.sum(counts))
    return {key: float(count) / total for key, count in zip(keys, counts)}


# a test set is given by its indicator: an array of samples -> boolean mask of members
SampleTest = Callable[[np.ndarray], np.ndarray]


def tv_lower_bound_from_samples(s1, s2, tests: Sequence[SampleTest]) -> float:
    """max over test sets A of |freq_s1(A) - freq_s2(A)|, a lower bound on TV."""
    if len(tests) == 0:
        raise ValueError('at least one test set is required')
    a, b = _as_sample_array(s1), _as_sample_array(s2)
    best = 0.0
    for test in tests:
        gap = abs(float(np.mean(test(a))) - float(np.mean(test(b))))
        best = max(best, gap)
    return min(1.0, best)
