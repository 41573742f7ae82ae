"""Single-trajectory samplers for discrete- and continuous-time chains."""
from __future__ import annotations

import logging
import math

import numpy as np

from cutoff_kit.config import DEFAULT_MAX_JUMPS
from cutoff_kit.errors import DimensionMismatchError, ExplosionError, InvalidRateError
from cutoff_kit.markov_core.types import DenseKernel, JumpPath, RateFunction, SeedSpec, State


__all__ = ['simulate_dtmc', 'step_ensemble', 'simulate_ctmc']


logger = logging.getLogger(__name__)


def _cumulative_rows(kernel: DenseKernel) -> np.ndarray:
    cum = np.cumsum(kernel.rows, axis=1)
    # rows sum to 1 up to rounding; pin the last column so every u in [0,1) lands in a row
    cum[:, -1] = np.inf
    return cum


def simulate_dtmc(kernel: DenseKernel, x0: int, r: int, seed: SeedSpec | int) -> np.ndarray:
    """Sample X(0..r) from x0; returns an int array of length r + 1."""
    if not 0 <= x0 < kernel.size:
        raise DimensionMismatchError(f'start state {x0} outside the kernel states 0..{kernel.size - 1}')
    if r < 0:
        raise ValueError(f'number of steps must be >= 0, got {r}')
    rng = SeedSpec.coerce(seed).generator()
    cum = _cumulative_rows(kernel)
    uniforms = rng.random(r)
    path = np.empty(r + 1, dtype=np.int64)
    path[0] = x = x0
    for i, u in enumerate(uniforms, start=1):
        x = int(np.searchsorted(cum[x], u, side='right'))
        path[i] = x
    return path


def step_ensemble(
    kernel: DenseKernel,
    states: np.ndarray,
    rng: np.random.Generator,
    cumulative: np.ndarray | None = None,
) -> np.ndarray:
    """One step for every entry of `states` by inverse-CDF draws on the kernel rows."""
    states = np.asarray(states, dtype=np.int64)
    cum = _cumulative_rows(kernel) if cumulative is None else cumulative
    u = rng.random(states.shape[0])
    return (cum[states] <= u[:, None]).sum(axis=1)


def simulate_ctmc(
    rf: RateFunction,
    x0: State | int,
    t_end: float,
    seed: SeedSpec | int,
    max_jumps: int = DEFAULT_MAX_JUMPS,
) -> JumpPath:
    '''Exact event-driven (Gillespie) simulation on [0, t_end].

    Holding times are exponential with the total exit rate; the jump is chosen
    proportionally to its rate. A state with an empty rate list is absorbing.

    Raises:
        InvalidRateError: a queried state lists a non-positive rate or a zero jump.
        ExplosionError: a jump beyond the first max_jumps before t_end; a returned
            path never holds more than max_jumps jumps.
    '''
    if t_end < 0 or not math.isfinite(t_end):
        raise ValueError(f't_end must be finite and >= 0, got {t_end}')
    rng = SeedSpec.coerce(seed).generator()
    state = (int(x0),) if isinstance(x0, (int, np.integer)) else tuple(int(v) for v in x0)
    scalar = isinstance(x0, (int, np.integer))
    times: list[float] = []
    states: list[State] = [state]
    t = 0.0
    while True:
        listed = rf(state[0] if scalar else state)
        if not listed:
            break
        jumps = []
        rates = np.empty(len(listed))
        for i, (jump, rate) in enumerate(listed):
            jump = (int(jump),) if scalar else tuple(int(v) for v in jump)
            if not rate > 0 or not math.isfinite(rate):
                raise InvalidRateError(f'rate {rate!r} for jump {jump} at state {state} is not a positive finite number')
            if not any(jump):
                raise InvalidRateError(f'zero jump listed at state {state}; self-loops are not transitions')
            jumps.append(jump)
            rates[i] = rate
        cum = np.cumsum(rates)
        t += rng.standard_exponential() / cum[-1]
        if t > t_end:
            break
        k = min(int(np.searchsorted(cum, rng.random() * cum[-1], side='right')), len(jumps) - 1)
        state = tuple(s + j for s, j in zip(state, jumps[k]))
        times.append(t)
        states.append(state)
        if len(times) > max_jumps:
            raise ExplosionError(max_jumps, t)
    logger.debug('simulated %d jumps on [0, %g]', len(times), t_end)
    return JumpPath(np.asarray(times, dtype=float), np.asarray(states, dtype=np.int64), t_end)
