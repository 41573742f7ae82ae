"""Lockstep Gillespie simulation of many independent paths of a JumpModel."""
from __future__ import annotations
from typing import TYPE_CHECKING
if TYPE_CHECKING:
    import pandas as pd

import logging
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from cutoff_kit.config import DEFAULT_CHUNK_SIZE, DEFAULT_MAX_JUMPS
from cutoff_kit.errors import DimensionMismatchError, ExplosionError, InvalidRateError
from cutoff_kit.markov_core.parallel import run_chunks
from cutoff_kit.markov_core.types import JumpModel, SeedSpec


__all__ = ['EnsembleResult', 'simulate_ctmc_ensemble']


logger = logging.getLogger(__name__)

StopPredicate = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True, eq=False)
class EnsembleResult:
    '''
    states[g, i] is path i at t_grid[g]. stop_times is inf for paths the stop
    predicate never fired on; a stopped path keeps its stopping state on the
    remaining grid times. running_max is only set when a norm was tracked.
    '''
    t_grid: np.ndarray
    states: np.ndarray
    stop_times: np.ndarray
    jump_counts: np.ndarray
    running_max: np.ndarray | None = None

    @property
    def n_paths(self) -> int:
        return self.states.shape[1]

    def at(self, g: int) -> np.ndarray:
        return self.states[g]

    def mean(self) -> np.ndarray:
        """(G, d) ensemble mean at every grid time."""
        return self.states.mean(axis=1)

    def to_frame(self) -> pd.DataFrame:
        import pandas as pd
        G, N, d = self.states.shape
        frame = pd.DataFrame(self.states.reshape(G * N, d), columns=[f'x{i + 1}' for i in range(d)])
        frame.insert(0, 'path', np.tile(np.arange(N), G))
        frame.insert(0, 'time', np.repeat(self.t_grid, N))
        return frame


def _record(out: np.ndarray, paths: np.ndarray, start: np.ndarray, stop: np.ndarray, values: np.ndarray):
    """out[start[i]:stop[i], paths[i]] = values[i] for every i, without a Python loop."""
    counts = stop - start
    keep = counts > 0
    if not keep.any():
        return
    paths, start, counts, values = paths[keep], start[keep], counts[keep], values[keep]
    offsets = np.arange(counts.sum()) - np.repeat(np.cumsum(counts) - counts, counts)
    out[np.repeat(start, counts) + offsets, np.repeat(paths, counts)] = np.repeat(values, counts, axis=0)


def _simulate_chunk(
    model: JumpModel,
    x0: np.ndarray,
    t_grid: np.ndarray,
    rng: np.random.Generator,
    max_jumps: int,
    norm_weights: np.ndarray | None,
    stop: StopPredicate | None,
) -> EnsembleResult:
    jumps = np.asarray(model.jumps, dtype=np.int64)
    K = jumps.shape[0]
    m, d = x0.shape
    G = t_grid.size

    states = x0.copy()
    t = np.zeros(m)
    out = np.empty((G, m, d), dtype=np.int64)
    filled = np.zeros(m, dtype=np.int64)
    jump_counts = np.zeros(m, dtype=np.int64)
    stop_times = np.full(m, np.inf)
    active = np.ones(m, dtype=bool)
    running_max = np.abs(states) @ norm_weights if norm_weights is not None else None

    if stop is not None:
        stopped = np.flatnonzero(stop(states))
        stop_times[stopped] = 0.0
        _record(out, stopped, filled[stopped], np.full(stopped.size, G), states[stopped])
        active[stopped] = False

    while True:
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        x = states[idx]
        rates = np.asarray(model.rates(x), dtype=float)
        if rates.shape != (idx.size, K):
            raise DimensionMismatchError(f'rates() returned shape {rates.shape}, expected {(idx.size, K)}')
        if np.any(rates < 0) or not np.all(np.isfinite(rates)):
            raise InvalidRateError('jump model produced a negative or non-finite rate')
        cum = np.cumsum(rates, axis=1)
        total = cum[:, -1]
        with np.errstate(divide='ignore'):
            t_new = t[idx] + rng.standard_exponential(idx.size) / total

        # the current state holds on [t, t_new): it fills every grid slot before t_new
        n_slots = np.searchsorted(t_grid, t_new, side='left')
        _record(out, idx, filled[idx], n_slots, x)
        filled[idx] = n_slots

        moving = n_slots < G
        active[idx[~moving]] = False
        if not moving.any():
            continue
        mi = idx[moving]
        u = rng.random(mi.size) * total[moving]
        event = np.minimum((cum[moving] <= u[:, None]).sum(axis=1), K - 1)
        states[mi] += jumps[event]
        t[mi] = t_new[moving]
        jump_counts[mi] += 1
        # same cap as simulate_ctmc: max_jumps jumps per path are allowed
        if jump_counts[mi].max() > max_jumps:
            raise ExplosionError(max_jumps, float(t[mi].max()))
        if running_max is not None:
            running_max[mi] = np.maximum(running_max[mi], np.abs(states[mi]) @ norm_weights)
        if stop is not None:
            hit = mi[stop(states[mi])]
            if hit.size:
                stop_times[hit] = t[hit]
                _record(out, hit, filled[hit], np.full(hit.size, G), states[hit])
                filled[hit] = G
                active[hit] = False

    return EnsembleResult(t_grid, out, stop_times, jump_counts, running_max)


def simulate_ctmc_ensemble(
    model: JumpModel,
    x0,
    t_grid,
    n_paths: int,
    seed: SeedSpec | int,
    *,
    threads: int = 1,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
    max_jumps: int = DEFAULT_MAX_JUMPS,
    norm_weights=None,
    stop: StopPredicate | None = None,
    progress: bool = False,
) -> EnsembleResult:
    '''Simulate n_paths independent paths and record them on t_grid.

    Args:
        x0: one start state of shape (d,), or one per path with shape (n_paths, d)
        t_grid: non-decreasing observation times >= 0; the last one is the horizon
        norm_weights: when given, track max over [0, t_grid[-1]] of |X| @ norm_weights per path
        stop: vectorised predicate on (m, d) states; a path freezes the first time it holds
    '''
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.ndim != 1 or t_grid.size == 0 or t_grid[0] < 0 or np.any(np.diff(t_grid) < 0):
        raise ValueError('t_grid must be a non-empty, non-decreasing sequence of times >= 0')
    jumps = np.asarray(model.jumps)
    d = jumps.shape[1]
    starts = np.asarray(x0, dtype=np.int64)
    if starts.ndim == 1:
        starts = np.broadcast_to(starts, (n_paths, starts.size))
    if starts.shape != (n_paths, d):
        raise DimensionMismatchError(f'start states have shape {starts.shape}, expected ({n_paths}, {d})')
    weights = None if norm_weights is None else np.asarray(norm_weights, dtype=float)

    def simulate(sl: slice, rng: np.random.Generator) -> EnsembleResult:
        return _simulate_chunk(model, np.array(starts[sl]), t_grid, rng, max_jumps, weights, stop)

    parts = run_chunks(
        simulate, n_paths, seed,
        chunk_size=chunk_size, threads=threads, description='Simulating paths', progress=progress,
    )
    if not parts:
        return EnsembleResult(t_grid, np.empty((t_grid.size, 0, d), dtype=np.int64), np.empty(0), np.empty(0, dtype=np.int64))
    return EnsembleResult(
        t_grid,
        np.concatenate([p.states for p in parts], axis=1),
        np.concatenate([p.stop_times for p in parts]),
        np.concatenate([p.jump_counts for p in parts]),
        None if weights is None else np.concatenate([p.running_max for p in parts]),
    )
