"""Transition rates of the single and the coupled two-host chain."""
from __future__ import annotations

import numpy as np

from cutoff_kit.markov_core import RateFunction, as_rate_function
from cutoff_kit.two_host.model import EpiParams, spectral_decompose


__all__ = [
    'EPI_JUMPS',
    'EpiJumpModel',
    'CoupledEpiJumpModel',
    'epi_rates',
    'coupled_rates',
    'total_exit_rate',
    'generator_on_distance',
]


# +e1, +e2, -e1, -e2
EPI_JUMPS = np.array([[1, 0], [0, 1], [-1, 0], [0, -1]], dtype=np.int64)
# coordinate moved by each of the four move types
_MOVE_AXIS = np.array([0, 1, 0, 1])


def _epi_rate_table(p: EpiParams, states: np.ndarray) -> np.ndarray:
    x1, x2 = states[:, 0].astype(float), states[:, 1].astype(float)
    n = p.n
    return np.column_stack([
        p.alpha * x2 + p.mu * n,
        p.beta * x1 + p.nu * n,
        p.gamma * x1,
        p.delta * x2,
    ])


class EpiJumpModel:
    """Infected counts (x1, x2): +e1 at alpha x2 + mu n, +e2 at beta x1 + nu n, -e1 at gamma x1, -e2 at delta x2."""

    def __init__(self, p: EpiParams):
        self.params = p
        self.jumps = EPI_JUMPS

    def rates(self, states: np.ndarray) -> np.ndarray:
        return _epi_rate_table(self.params, np.asarray(states))


class CoupledEpiJumpModel:
    '''
    Pair (u, v) stored as (u1, u2, v1, v2). For each move type the copies move
    together at the smaller of their two rates when they agree in the moved
    coordinate, and the surplus rate moves one copy alone; where they differ
    in that coordinate they move independently. Each copy alone is the
    single chain, and a coalesced pair never splits.

    Jump columns: for each move type in (+e1, +e2, -e1, -e2) the triple
    (joint, u alone, v alone).
    '''

    def __init__(self, p: EpiParams):
        self.params = p
        jumps = []
        for move in EPI_JUMPS:
            zero = np.zeros_like(move)
            jumps.extend([np.concatenate([move, move]), np.concatenate([move, zero]), np.concatenate([zero, move])])
        self.jumps = np.array(jumps, dtype=np.int64)

    def rates(self, states: np.ndarray) -> np.ndarray:
        states = np.asarray(states)
        u, v = states[:, :2], states[:, 2:]
        ru = _epi_rate_table(self.params, u)
        rv = _epi_rate_table(self.params, v)
        agree = (u == v)[:, _MOVE_AXIS]
        joint = np.where(agree, np.minimum(ru, rv), 0.0)
        u_alone = np.where(agree, np.maximum(ru - rv, 0.0), ru)
        v_alone = np.where(agree, np.maximum(rv - ru, 0.0), rv)
        return np.stack([joint, u_alone, v_alone], axis=2).reshape(states.shape[0], 12)

    @staticmethod
    def coalesced(states: np.ndarray) -> np.ndarray:
        states = np.asarray(states)
        return np.all(states[:, :2] == states[:, 2:], axis=1)


def epi_rates(p: EpiParams) -> RateFunction:
    """State (x1, x2) -> [(jump, rate)], zero rates omitted."""
    return as_rate_function(EpiJumpModel(p))


def coupled_rates(p: EpiParams) -> RateFunction:
    """State (u1, u2, v1, v2) -> [(jump, rate)], zero rates omitted."""
    return as_rate_function(CoupledEpiJumpModel(p))


def total_exit_rate(p: EpiParams, x) -> float:
    """(beta + gamma) x1 + (alpha + delta) x2 + (mu + nu) n."""
    x1, x2 = x
    return (p.beta + p.gamma) * x1 + (p.alpha + p.delta) * x2 + (p.mu + p.nu) * p.n


def generator_on_distance(p: EpiParams, u, v, theta: float | None = None) -> float:
    '''Coupled generator applied to d(u, v) = |u1 - v1| + theta |u2 - v2| at one pair.

    Bounded by -rho d(u, v); equality holds when the two copies are ordered.
    '''
    theta = spectral_decompose(p).theta if theta is None else theta
    model = CoupledEpiJumpModel(p)
    state = np.concatenate([np.asarray(tuple(u)), np.asarray(tuple(v))]).astype(np.int64)[None, :]
    rates = model.rates(state)[0]
    after = state + model.jumps
    weights = np.array([1.0, theta])

    def distance(s: np.ndarray) -> np.ndarray:
        return np.abs(s[..., :2] - s[..., 2:]) @ weights

    return float(rates @ (distance(after) - distance(state[0])))
