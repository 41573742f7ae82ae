"""Two-host epidemic with immigration: parameters, drift spectrum and the deterministic mean flow."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import bisect

from cutoff_kit.errors import SupercriticalError


__all__ = [
    'EpiParams',
    'EpiState',
    'CoupledEpiState',
    'Spectral',
    'spectral_decompose',
    'theta_norm',
    'mean_trajectory',
    'travel_time',
    'kappa_diagnostic',
]


logger = logging.getLogger(__name__)

_RATE_NAMES = ('alpha', 'beta', 'gamma', 'delta', 'mu', 'nu')
_SCAN_BLOCK = 1000
_MAX_SCAN_BLOCKS = 100_000
TRAVEL_TIME_XTOL = 1e-9


@dataclass(frozen=True)
class EpiParams:
    '''
    alpha, beta: cross-infection rates (type 2 infects type 1, type 1 infects type 2)
    gamma, delta: recovery rates of types 1 and 2
    mu, nu: immigration coefficients, contributing mu*n and nu*n
    n: population scale
    '''
    alpha: float
    beta: float
    gamma: float
    delta: float
    mu: float
    nu: float
    n: int = 1

    def __post_init__(self):
        for name in _RATE_NAMES:
            value = getattr(self, name)
            if not (isinstance(value, (int, float, np.integer, np.floating)) and math.isfinite(value) and value > 0):
                raise ValueError(f'EpiParams.{name} must be a finite number > 0, got {value!r}')
            object.__setattr__(self, name, float(value))
        if isinstance(self.n, bool) or not isinstance(self.n, (int, np.integer)) or self.n < 1:
            raise ValueError(f'EpiParams.n must be an integer >= 1, got {self.n!r}')
        object.__setattr__(self, 'n', int(self.n))
        if self.R >= 1:
            raise SupercriticalError(f'R = alpha*beta/(gamma*delta) = {self.R:.6g} must be < 1')

    @classmethod
    def symmetric(cls, n: int = 100) -> EpiParams:
        """alpha = beta = 1, gamma = delta = 2, mu = nu = 1: theta = 1, rho = 1, rho' = 3, c = (1, 1)."""
        return cls(alpha=1.0, beta=1.0, gamma=2.0, delta=2.0, mu=1.0, nu=1.0, n=n)

    @property
    def R(self) -> float:
        return self.alpha * self.beta / (self.gamma * self.delta)

    @property
    def A(self) -> np.ndarray:
        return np.array([[-self.gamma, self.alpha], [self.beta, -self.delta]])

    @property
    def b(self) -> np.ndarray:
        return np.array([self.mu, self.nu])

    def with_n(self, n: int) -> EpiParams:
        return replace(self, n=n)

    def to_dict(self) -> dict[str, float | int]:
        return {name: getattr(self, name) for name in (*_RATE_NAMES, 'n')}


@dataclass(frozen=True)
class EpiState:
    x1: int
    x2: int

    def __post_init__(self):
        for name in ('x1', 'x2'):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)) or value < 0:
                raise ValueError(f'EpiState.{name} must be a non-negative integer, got {value!r}')
            object.__setattr__(self, name, int(value))

    @classmethod
    def rounded(cls, point) -> EpiState:
        x1, x2 = np.rint(np.asarray(point, dtype=float))
        return cls(int(x1), int(x2))

    def as_array(self) -> np.ndarray:
        return np.array([self.x1, self.x2], dtype=np.int64)

    def __iter__(self):
        yield self.x1
        yield self.x2


@dataclass(frozen=True)
class CoupledEpiState:
    u: EpiState
    v: EpiState

    @property
    def coalesced(self) -> bool:
        return self.u == self.v

    def as_array(self) -> np.ndarray:
        return np.concatenate([self.u.as_array(), self.v.as_array()])


@dataclass(frozen=True, eq=False)
class Spectral:
    '''
    The drift matrix A = [[-gamma, alpha], [beta, -delta]] has eigenvalues
    -rho > -rho_prime with unit right eigenvectors v, v_prime proportional to
    (alpha, beta*theta) and (alpha, beta*theta_prime). (1, theta) is a left
    eigenvector for -rho. c solves A c + b = 0.
    '''
    rho: float
    rho_prime: float
    theta: float
    theta_prime: float
    v: np.ndarray
    v_prime: np.ndarray
    c: np.ndarray

    @property
    def basis(self) -> np.ndarray:
        return np.column_stack([self.v, self.v_prime])

    def coordinates(self, z) -> np.ndarray:
        """(lambda, lambda') with z = lambda v + lambda' v_prime."""
        return np.linalg.solve(self.basis, np.asarray(z, dtype=float))

    def flow(self, z, t) -> np.ndarray:
        """e^{At} z for t >= 0; shape (2,) for scalar t, (T, 2) for an array."""
        lam, lam_prime = self.coordinates(z)
        t = np.asarray(t, dtype=float)
        out = (
            lam * np.exp(-self.rho * t)[..., None] * self.v
            + lam_prime * np.exp(-self.rho_prime * t)[..., None] * self.v_prime
        )
        return out


def spectral_decompose(p: EpiParams) -> Spectral:
    '''
    theta is the positive root of beta th^2 + (delta - gamma) th - alpha = 0.
    Each quantity is taken from the form without cancellation.

    Raises:
        SupercriticalError: R >= 1.
    '''
    alpha, beta, gamma, delta = p.alpha, p.beta, p.gamma, p.delta
    gap = gamma * delta - alpha * beta
    if gap <= 0:
        raise SupercriticalError(f'R = {p.R:.6g} must be < 1 for a subcritical decomposition')
    disc = math.sqrt((delta - gamma) ** 2 + 4 * alpha * beta)
    if delta >= gamma:
        theta = 2 * alpha / ((delta - gamma) + disc)
    else:
        theta = ((gamma - delta) + disc) / (2 * beta)
    theta_prime = -alpha / (beta * theta)
    rho = 2 * gap / (gamma + delta + disc)
    rho_prime = (gamma + delta + disc) / 2
    if not rho_prime - rho > 1e-14 * rho_prime:
        raise ValueError('drift matrix is defective (repeated eigenvalue)')
    v = np.array([alpha, beta * theta])
    v_prime = np.array([alpha, beta * theta_prime])
    c = np.array([alpha * p.nu + delta * p.mu, beta * p.mu + gamma * p.nu]) / gap
    return Spectral(
        rho=rho,
        rho_prime=rho_prime,
        theta=theta,
        theta_prime=theta_prime,
        v=v / np.linalg.norm(v),
        v_prime=v_prime / np.linalg.norm(v_prime),
        c=c,
    )


def theta_norm(z, theta: float):
    """|z1| + theta |z2| over the last axis."""
    if not theta > 0:
        raise ValueError(f'theta must be > 0, got {theta!r}')
    z = np.asarray(z, dtype=float)
    result = np.abs(z[..., 0]) + theta * np.abs(z[..., 1])
    return float(result) if result.ndim == 0 else result


def mean_trajectory(p: EpiParams, x, t, spectral: Spectral | None = None) -> np.ndarray:
    """n m_x(t) = n c + n e^{At}(x/n - c); returns x itself at t = 0."""
    spectral = spectral or spectral_decompose(p)
    x = np.asarray(tuple(x), dtype=float)
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0):
        raise ValueError('time must be >= 0')
    n = p.n
    out = n * spectral.c + n * spectral.flow(x / n - spectral.c, t_arr)
    out[t_arr == 0] = x
    return out


def travel_time(p: EpiParams, x, spectral: Spectral | None = None) -> float:
    '''First t with |e^{At}(x/n - c)| <= n^(-1/2); 0 if already inside.

    The norm need not be monotone, so the time axis is scanned in steps of
    0.01/rho and the first bracketing interval is bisected.
    '''
    spectral = spectral or spectral_decompose(p)
    n = p.n
    z = np.asarray(tuple(x), dtype=float) / n - spectral.c
    radius = n ** -0.5
    if np.linalg.norm(z) <= radius:
        return 0.0

    def excess(t: float) -> float:
        return float(np.linalg.norm(spectral.flow(z, t))) - radius

    step = 0.01 / spectral.rho
    for block in range(_MAX_SCAN_BLOCKS):
        grid = step * np.arange(block * _SCAN_BLOCK, (block + 1) * _SCAN_BLOCK + 1)
        values = np.linalg.norm(spectral.flow(z, grid), axis=-1) - radius
        crossed = np.flatnonzero(values <= 0)
        if crossed.size:
            i = int(crossed[0])
            if values[i] == 0:
                return float(grid[i])
            return float(bisect(excess, grid[i - 1], grid[i], xtol=TRAVEL_TIME_XTOL))
    raise RuntimeError('travel time scan did not find a crossing')


def kappa_diagnostic(p: EpiParams, s_max: float = 5.0, n_angles: int = 360, n_s: int = 101,
                     spectral: Spectral | None = None) -> float:
    """min over unit z and s in [0, s_max] of |e^{-As} z| e^{-rho s}."""
    spectral = spectral or spectral_decompose(p)
    angles = np.linspace(0, 2 * np.pi, n_angles, endpoint=False)
    z = np.column_stack([np.cos(angles), np.sin(angles)])
    coords = np.linalg.solve(spectral.basis, z.T).T
    s = np.linspace(0, s_max, n_s)
    growth = np.exp((spectral.rho_prime - spectral.rho) * s)
    # e^{-As} z e^{-rho s} = lambda v + lambda' e^{(rho' - rho) s} v'
    lam = coords[:, 0, None, None]
    lam_prime = coords[:, 1, None, None]
    vectors = lam * spectral.v + lam_prime * growth[None, :, None] * spectral.v_prime
    return float(np.linalg.norm(vectors, axis=-1).min())
