"""Monotone coupling of two chains started one ball apart."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from cutoff_kit.bernoulli_laplace.chain import BLParams, bl_move_probs
from cutoff_kit.concentration.verify import binomial_se
from cutoff_kit.config import DEFAULT_CHUNK_SIZE
from cutoff_kit.markov_core import SeedSpec, run_chunks


__all__ = [
    'BLCoupledState',
    'coupling_probs',
    'bl_coupled_step',
    'bl_coupled_step_ensemble',
    'CouplingReport',
    'bl_coupled_ensemble',
    'bl_coupling_experiment',
]


logger = logging.getLogger(__name__)

# residual probabilities below this are rounding noise of exact zeros
_RESIDUAL_TOL = 1e-15


@dataclass(frozen=True)
class BLCoupledState:
    lo: int
    hi: int

    def __post_init__(self):
        if self.lo < 0 or self.hi - self.lo not in (0, 1):
            raise ValueError(f'coupled state needs 0 <= lo <= hi <= lo + 1, got ({self.lo}, {self.hi})')

    @property
    def coalesced(self) -> bool:
        return self.lo == self.hi

    def check(self, p: BLParams):
        if self.hi > p.n:
            raise ValueError(f'coupled state ({self.lo}, {self.hi}) exceeds n={p.n}')


def coupling_probs(j, n: int) -> dict[str, np.ndarray]:
    '''Move probabilities from the split state (j, j + 1).

    joint_up (1 - (j+1)/n)^2 and joint_down (j/n)^2 move both copies;
    lo_up and hi_down move one copy onto the other. Each copy alone
    follows the chain's kernel; the two coalescing moves add up to 2/n.
    '''
    j = np.asarray(j, dtype=float)
    lo_up, lo_down = bl_move_probs(j, n)
    hi_up, hi_down = bl_move_probs(j + 1, n)
    probs = {
        'joint_up': hi_up,
        'joint_down': lo_down,
        'lo_up': lo_up - hi_up,
        'hi_down': hi_down - lo_down,
    }
    if any(np.any(v < -_RESIDUAL_TOL) for v in probs.values()):
        raise ValueError(f'negative coupling probability at j={j}')
    return {key: np.maximum(value, 0.0) for key, value in probs.items()}


def bl_coupled_step(s: BLCoupledState, p: BLParams, rng: np.random.Generator) -> BLCoupledState:
    s.check(p)
    lo, hi = bl_coupled_step_ensemble(np.array([s.lo]), np.array([s.hi]), p.n, rng)
    return BLCoupledState(int(lo[0]), int(hi[0]))


def bl_coupled_step_ensemble(
    lo: np.ndarray, hi: np.ndarray, n: int, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    """One coupled step for arrays of states; coalesced entries move as a single chain."""
    lo = np.asarray(lo, dtype=np.int64)
    hi = np.asarray(hi, dtype=np.int64)
    u = rng.random(lo.shape[0])
    split = hi > lo

    up, down = bl_move_probs(lo, n)
    joint_move = (u < up).astype(np.int64) - ((u >= up) & (u < up + down))

    probs = coupling_probs(np.where(split, lo, 0), n)
    c1 = probs['joint_up']
    c2 = c1 + probs['joint_down']
    c3 = c2 + probs['lo_up']
    c4 = c3 + probs['hi_down']
    split_joint = (u < c1).astype(np.int64) - ((u >= c1) & (u < c2))
    lo_alone = (u >= c2) & (u < c3)
    hi_alone = (u >= c3) & (u < c4)

    new_lo = np.where(split, lo + split_joint + lo_alone, lo + joint_move)
    new_hi = np.where(split, hi + split_joint - hi_alone, hi + joint_move)
    return new_lo, new_hi


@dataclass(frozen=True)
class CouplingReport:
    n: int
    start: int
    trials: int
    step_frequency: float
    step_se: float
    mean_time: float
    time_se: float
    censored: int

    @property
    def expected_frequency(self) -> float:
        return 2 / self.n

    @property
    def expected_mean_time(self) -> float:
        return self.n / 2


def bl_coupled_ensemble(
    p: BLParams,
    lo: int,
    trials: int,
    seed: SeedSpec | int,
    max_steps: int | None = None,
    *,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
    threads: int = 1,
    progress: bool = False,
) -> np.ndarray:
    '''Coalescence times of `trials` coupled pairs started at (lo, lo + 1).

    Pairs still split after max_steps (default 50 n) get max_steps + 1.
    '''
    BLCoupledState(lo, lo + 1).check(p)
    max_steps = 50 * p.n if max_steps is None else max_steps

    def coalesce(sl: slice, rng: np.random.Generator) -> np.ndarray:
        size = sl.stop - sl.start
        times = np.full(size, max_steps + 1, dtype=np.int64)
        idx = np.arange(size)
        a = np.full(size, lo, dtype=np.int64)
        b = a + 1
        for step in range(1, max_steps + 1):
            a, b = bl_coupled_step_ensemble(a, b, p.n, rng)
            met = a == b
            times[idx[met]] = step
            keep = ~met
            idx, a, b = idx[keep], a[keep], b[keep]
            if idx.size == 0:
                break
        return times

    parts = run_chunks(coalesce, trials, seed, chunk_size=chunk_size, threads=threads,
                       description='Coupling', progress=progress)
    return np.concatenate(parts) if parts else np.empty(0, dtype=np.int64)


def bl_coupling_experiment(
    p: BLParams,
    lo: int,
    trials: int,
    seed: SeedSpec | int,
    max_steps: int | None = None,
    **kwargs,
) -> CouplingReport:
    '''Per-step coalescence frequency (expected 2/n from every split state) and mean coalescence time (n/2).

    The frequency pools every step a pair spent split, so its standard error uses that step count.
    '''
    max_steps = 50 * p.n if max_steps is None else max_steps
    times = bl_coupled_ensemble(p, lo, trials, seed, max_steps, **kwargs)
    censored = int((times > max_steps).sum())
    done = times[times <= max_steps]
    split_steps = int(np.minimum(times, max_steps).sum())
    frequency = done.size / split_steps if split_steps else math.nan
    mean_time = float(done.mean()) if done.size else math.nan
    time_se = float(done.std(ddof=1) / math.sqrt(done.size)) if done.size > 1 else math.nan
    if censored:
        logger.warning('%d of %d pairs had not coalesced after %d steps', censored, trials, max_steps)
    return CouplingReport(
        n=p.n,
        start=lo,
        trials=trials,
        step_frequency=frequency,
        step_se=float(binomial_se(frequency, split_steps)) if split_steps else math.nan,
        mean_time=mean_time,
        time_se=time_se,
        censored=censored,
    )
