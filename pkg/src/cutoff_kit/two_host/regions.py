"""Deviation regions around the equilibrium and the grid of starting states for the cut-off experiment."""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from cutoff_kit.two_host.model import EpiParams, EpiState, Spectral, spectral_decompose


__all__ = ['default_H', 'RegionPredicates', 'region_predicates', 'max_exit_rate', 'StartGrid', 'start_grid']


logger = logging.getLogger(__name__)


def _check_zeta(zeta: float):
    if not 0 < zeta < 1:
        raise ValueError(f'zeta must lie in (0, 1), got {zeta!r}')


def default_H(p: EpiParams, zeta: float, spectral: Spectral | None = None) -> float:
    """max((1 v theta)(1/zeta + |c|), 4 |b|_theta / rho); with it E_n(zeta) lies inside D_n(H)."""
    _check_zeta(zeta)
    s = spectral or spectral_decompose(p)
    b_theta = p.mu + s.theta * p.nu
    return max(max(1.0, s.theta) * (1 / zeta + float(np.linalg.norm(s.c))), 4 * b_theta / s.rho)


@dataclass(frozen=True)
class RegionPredicates:
    '''
    E_n(zeta): states at Euclidean distance in [n zeta, n/zeta] from n c.
    D_n(H): states with |x|_theta <= H n.
    Both accept one state or an (m, 2) array of states.
    '''
    p: EpiParams
    zeta: float
    H: float
    theta: float
    center: np.ndarray

    def _states(self, x) -> np.ndarray:
        return np.asarray(tuple(x) if isinstance(x, EpiState) else x, dtype=float)

    def in_E(self, x):
        x = self._states(x)
        n = self.p.n
        dist = np.linalg.norm(x - self.center, axis=-1)
        inside = (x >= 0).all(axis=-1) & (dist >= n * self.zeta) & (dist <= n / self.zeta)
        return bool(inside) if inside.ndim == 0 else inside

    def in_D(self, x):
        x = self._states(x)
        inside = (x >= 0).all(axis=-1) & (np.abs(x[..., 0]) + self.theta * np.abs(x[..., 1]) <= self.H * self.p.n)
        return bool(inside) if inside.ndim == 0 else inside


def region_predicates(p: EpiParams, zeta: float, H: float | None = None) -> RegionPredicates:
    s = spectral_decompose(p)
    H = default_H(p, zeta, s) if H is None else H
    if not H > 0:
        raise ValueError(f'H must be > 0, got {H!r}')
    return RegionPredicates(p=p, zeta=zeta, H=float(H), theta=s.theta, center=p.n * s.c)


def max_exit_rate(p: EpiParams, H: float, spectral: Spectral | None = None) -> float:
    '''Bound on the total jump rate over D_n(H): n[mu + nu + 2((alpha + delta)/theta + beta + gamma) H].

    The factor 2 allows the state to sit one jump outside the region.
    '''
    s = spectral or spectral_decompose(p)
    return p.n * (p.mu + p.nu + 2 * ((p.alpha + p.delta) / s.theta + p.beta + p.gamma) * H)


@dataclass(frozen=True)
class StartGrid:
    starts: tuple[EpiState, ...]
    skipped: tuple[tuple[float, float], ...]


def start_grid(p: EpiParams, zeta: float, n_angles: int = 8) -> StartGrid:
    '''
    n_angles equally spaced directions on the circles of radius n zeta and n/zeta
    around n c, rounded to the nearest lattice point. A rounded point that
    drops out of the annulus is pushed one step along the direction's sign.
    Points with a negative coordinate are skipped and reported.
    '''
    _check_zeta(zeta)
    if n_angles < 1:
        raise ValueError(f'n_angles must be >= 1, got {n_angles}')
    n = p.n
    center = n * spectral_decompose(p).c
    angles = 2 * np.pi * np.arange(n_angles) / n_angles
    directions = np.column_stack([np.cos(angles), np.sin(angles)])
    lo, hi = n * zeta, n / zeta
    starts: list[EpiState] = []
    skipped: list[tuple[float, float]] = []
    for radius in (lo, hi):
        for direction in directions:
            point = center + radius * direction
            x = np.rint(point)
            step = np.sign(np.round(direction, 12))
            dist = np.linalg.norm(x - center)
            if dist < lo:
                x = x + step
            elif dist > hi:
                x = x - step
            if np.any(x < 0):
                skipped.append((float(point[0]), float(point[1])))
                continue
            state = EpiState(int(x[0]), int(x[1]))
            if state not in starts:
                starts.append(state)
    if skipped:
        logger.info('start grid: skipped %d points outside the positive quadrant', len(skipped))
    return StartGrid(tuple(starts), tuple(skipped))
