"""Monte-Carlo experiments on the two-host chain: equilibrium, contraction, TV bounds and the cut-off check."""
from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from cutoff_kit.config import DEFAULT_CHUNK_SIZE, DEFAULT_MAX_JUMPS
from cutoff_kit.cutoff import CutoffReport, TVProfile, check_cutoff
from cutoff_kit.enums import ProfileKind, TimeDomain
from cutoff_kit.markov_core import SeedSpec, simulate_ctmc_ensemble, tv_lower_bound_from_samples
from cutoff_kit.two_host.model import EpiParams, EpiState, mean_trajectory, spectral_decompose, travel_time
from cutoff_kit.two_host.rates import CoupledEpiJumpModel, EpiJumpModel
from cutoff_kit.two_host.regions import default_H, start_grid


__all__ = [
    'MIN_TRIALS',
    'burn_in_time',
    'equilibrium_sample',
    'equilibrium_summary',
    'simulated_mean',
    'ContractionReport',
    'contraction_check',
    'coalescence_tv_upper',
    'tv_lower_profile',
    'DeviationReport',
    'deviation_exit_fraction',
    'EpiCutoffReport',
    'epi_cutoff',
]


logger = logging.getLogger(__name__)

MIN_TRIALS = 1000
MEAN_SE_SLACK = 4
CONTRACTION_SE_SLACK = 3
N_BALL_RADII = 20
DEFAULT_S_GRID = tuple(np.arange(0.0, 8.0 + 1e-9, 0.25))


def _check_trials(trials: int, minimum: int = MIN_TRIALS):
    if trials < minimum:
        raise ValueError(f'trials must be >= {minimum}, got {trials}')


def _start(x) -> np.ndarray:
    state = x if isinstance(x, EpiState) else EpiState(*(int(v) for v in x))
    return state.as_array()


def burn_in_time(p: EpiParams) -> float:
    """(log n + 10) / rho."""
    return (math.log(p.n) + 10) / spectral_decompose(p).rho


def equilibrium_sample(
    p: EpiParams,
    trials: int,
    seed: SeedSpec | int,
    *,
    threads: int = 1,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
    max_jumps: int = DEFAULT_MAX_JUMPS,
    progress: bool = False,
) -> np.ndarray:
    '''(trials, 2) approximate draws from the equilibrium law.

    Each draw is the endpoint of a path started at round(n c) and run for
    burn_in_time(p).
    '''
    _check_trials(trials, 1)
    s = spectral_decompose(p)
    x0 = EpiState.rounded(p.n * s.c).as_array()
    T = burn_in_time(p)
    logger.debug('equilibrium burn-in %.4g from %s', T, x0.tolist())
    result = simulate_ctmc_ensemble(
        EpiJumpModel(p), x0, [T], trials, seed,
        threads=threads, chunk_size=chunk_size, max_jumps=max_jumps, progress=progress,
    )
    return result.at(0)


def equilibrium_summary(p: EpiParams, samples: np.ndarray) -> pd.DataFrame:
    '''Per coordinate: sample mean against n c with a 4 SE check, and the sample variance.'''
    samples = np.asarray(samples, dtype=float)
    n_samples = samples.shape[0]
    expected = p.n * spectral_decompose(p).c
    mean = samples.mean(axis=0)
    var = samples.var(axis=0, ddof=1) if n_samples > 1 else np.zeros(2)
    se = np.sqrt(var / n_samples)
    return pd.DataFrame({
        'coordinate': ['x1', 'x2'],
        'mean': mean,
        'expected': expected,
        'SE': se,
        'variance': var,
        'variance_per_n': var / p.n,
        'pass': np.abs(mean - expected) <= MEAN_SE_SLACK * se,
    })


def simulated_mean(
    p: EpiParams,
    x,
    t_grid: Sequence[float],
    trials: int,
    seed: SeedSpec | int,
    *,
    threads: int = 1,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
    max_jumps: int = DEFAULT_MAX_JUMPS,
    progress: bool = False,
) -> pd.DataFrame:
    """Ensemble mean from x on t_grid against mean_trajectory; a row passes within 4 SE per coordinate."""
    x0 = _start(x)
    t = np.asarray(t_grid, dtype=float)
    result = simulate_ctmc_ensemble(
        EpiJumpModel(p), x0, t, trials, seed,
        threads=threads, chunk_size=chunk_size, max_jumps=max_jumps, progress=progress,
    )
    states = result.states.astype(float)
    mean = states.mean(axis=1)
    se = states.std(axis=1, ddof=1) / math.sqrt(trials) if trials > 1 else np.zeros_like(mean)
    analytic = mean_trajectory(p, x0, t)
    within = np.abs(mean - analytic) <= MEAN_SE_SLACK * se
    return pd.DataFrame({
        'time': t,
        'mean_x1': mean[:, 0],
        'mean_x2': mean[:, 1],
        'analytic_x1': analytic[:, 0],
        'analytic_x2': analytic[:, 1],
        'se_x1': se[:, 0],
        'se_x2': se[:, 1],
        'pass': within.all(axis=1),
    })


@dataclass(frozen=True, eq=False)
class ContractionReport:
    frame: pd.DataFrame
    rho: float
    theta: float
    initial_distance: float

    @property
    def all_passed(self) -> bool:
        return bool(self.frame['pass'].all())


def _coupled_starts(u0, v0, trials: int) -> np.ndarray:
    u = np.broadcast_to(np.asarray(u0, dtype=np.int64), (trials, 2))
    v = np.broadcast_to(np.asarray(v0, dtype=np.int64), (trials, 2))
    return np.concatenate([u, v], axis=1)


def contraction_check(
    p: EpiParams,
    u0,
    v0,
    t_grid: Sequence[float],
    trials: int,
    seed: SeedSpec | int,
    *,
    threads: int = 1,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
    max_jumps: int = DEFAULT_MAX_JUMPS,
    progress: bool = False,
) -> ContractionReport:
    '''Mean theta-distance between coupled copies against e^{-rho t} d(u0, v0).

    A time passes iff mean <= bound (1 + 3 SE / mean).
    '''
    _check_trials(trials)
    s = spectral_decompose(p)
    u, v = _start(u0), _start(v0)
    t = np.asarray(t_grid, dtype=float)
    model = CoupledEpiJumpModel(p)
    result = simulate_ctmc_ensemble(
        model, _coupled_starts(u, v, trials), t, trials, seed,
        threads=threads, chunk_size=chunk_size, max_jumps=max_jumps,
        stop=model.coalesced, progress=progress,
    )
    diff = np.abs(result.states[..., :2] - result.states[..., 2:]).astype(float)
    distance = diff[..., 0] + s.theta * diff[..., 1]
    mean = distance.mean(axis=1)
    se = distance.std(axis=1, ddof=1) / math.sqrt(trials)
    d0 = float(abs(u[0] - v[0]) + s.theta * abs(u[1] - v[1]))
    bound = d0 * np.exp(-s.rho * t)
    with np.errstate(divide='ignore', invalid='ignore'):
        rel_se = np.where(mean > 0, se / mean, 0.0)
    passed = mean <= bound * (1 + CONTRACTION_SE_SLACK * rel_se)
    frame = pd.DataFrame({'time': t, 'mean_distance': mean, 'SE': se, 'bound': bound, 'pass': passed})
    return ContractionReport(frame=frame, rho=s.rho, theta=s.theta, initial_distance=d0)


def coalescence_tv_upper(
    p: EpiParams,
    x,
    s_grid: Sequence[float],
    trials: int,
    seed: SeedSpec | int,
    *,
    v_samples: np.ndarray | None = None,
    threads: int = 1,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
    max_jumps: int = DEFAULT_MAX_JUMPS,
    progress: bool = False,
) -> TVProfile:
    '''Upper bounds d_TV(t_n(x) + s) <= P(U, V not coalesced at t_n(x) + s).

    U starts at x, V at an equilibrium draw (v_samples, or fresh ones from
    seed.child(0)); the pair runs under the contractive coupling from
    seed.child(1). Times are t_n(x) + s, kind mc_upper.
    '''
    _check_trials(trials)
    s_values = np.unique(np.asarray(s_grid, dtype=float))
    if s_values.size == 0 or s_values[0] < 0:
        raise ValueError('s_grid must be non-empty with s >= 0')
    seed = SeedSpec.coerce(seed)
    x0 = _start(x)
    if v_samples is None:
        v_samples = equilibrium_sample(
            p, trials, seed.child(0), threads=threads, chunk_size=chunk_size, max_jumps=max_jumps, progress=progress,
        )
    v_samples = np.asarray(v_samples, dtype=np.int64)
    if v_samples.shape != (trials, 2):
        raise ValueError(f'v_samples must have shape ({trials}, 2), got {v_samples.shape}')
    t_n = travel_time(p, x0)
    times = t_n + s_values
    model = CoupledEpiJumpModel(p)
    starts = np.concatenate([np.broadcast_to(x0, (trials, 2)), v_samples], axis=1)
    result = simulate_ctmc_ensemble(
        model, starts, [times[-1]], trials, seed.child(1),
        threads=threads, chunk_size=chunk_size, max_jumps=max_jumps,
        stop=model.coalesced, progress=progress,
    )
    apart = (result.stop_times[None, :] > times[:, None]).mean(axis=1)
    se = np.sqrt(apart * (1 - apart) / trials)
    logger.info('coalescence from %s: P(apart) %.4g at s=%g, %.4g at s=%g',
                x0.tolist(), apart[0], s_values[0], apart[-1], s_values[-1])
    return TVProfile(
        times=times, values=apart, kind=ProfileKind.mc_upper, se=se,
        time_domain=TimeDomain.continuous, notes=(f'start {x0.tolist()}', f'travel time {t_n:.6g}'),
    )


def _ball_radii(n: int) -> np.ndarray:
    return np.linspace(math.sqrt(n) / 2, n / 2, N_BALL_RADII)


def tv_lower_profile(
    p: EpiParams,
    x,
    s_grid: Sequence[float],
    trials: int,
    seed: SeedSpec | int,
    *,
    eq_samples: np.ndarray | None = None,
    threads: int = 1,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
    max_jumps: int = DEFAULT_MAX_JUMPS,
    progress: bool = False,
) -> TVProfile:
    '''Lower bounds on d_TV(t_n(x) - s) from Euclidean balls around n c.

    For every s, |P_x(X(t) in B) - pi(B)| is maximised over 20 radii in
    [sqrt(n)/2, n/2]; pi comes from eq_samples or fresh equilibrium draws
    (seed.child(0)), paths from x use seed.child(1). An s with t_n(x) - s < 0
    is skipped and listed in the notes. SE is the two-sample standard error
    of the maximising ball.
    '''
    _check_trials(trials)
    seed = SeedSpec.coerce(seed)
    x0 = _start(x)
    t_n = travel_time(p, x0)
    s_values = np.unique(np.asarray(s_grid, dtype=float))
    kept = s_values[t_n - s_values >= 0]
    notes = [f'start {x0.tolist()}', f'travel time {t_n:.6g}']
    if dropped := s_values[t_n - s_values < 0].tolist():
        notes.append(f'skipped s={dropped}: t_n(x) - s < 0')
        logger.info('lower profile from %s: skipped s=%s (t_n=%.4g)', x0.tolist(), dropped, t_n)
    if kept.size == 0:
        raise ValueError(f'no s in s_grid satisfies s <= t_n(x) = {t_n:.6g}')
    if eq_samples is None:
        eq_samples = equilibrium_sample(
            p, trials, seed.child(0), threads=threads, chunk_size=chunk_size, max_jumps=max_jumps, progress=progress,
        )
    eq_samples = np.asarray(eq_samples, dtype=float)
    times = np.sort(t_n - kept)
    result = simulate_ctmc_ensemble(
        EpiJumpModel(p), x0, times, trials, seed.child(1),
        threads=threads, chunk_size=chunk_size, max_jumps=max_jumps, progress=progress,
    )
    center = p.n * spectral_decompose(p).c
    radii = _ball_radii(p.n)
    tests = [lambda w, r=r: np.linalg.norm(w - center, axis=-1) <= r for r in radii]
    eq_freq = np.array([test(eq_samples).mean() for test in tests])
    values, se = [], []
    for g in range(times.size):
        states = result.at(g).astype(float)
        values.append(tv_lower_bound_from_samples(states, eq_samples, tests))
        freq = np.array([test(states).mean() for test in tests])
        best = int(np.argmax(np.abs(freq - eq_freq)))
        se.append(math.sqrt(
            freq[best] * (1 - freq[best]) / trials + eq_freq[best] * (1 - eq_freq[best]) / eq_samples.shape[0]
        ))
    return TVProfile(
        times=times, values=values, kind=ProfileKind.mc_lower, se=se,
        time_domain=TimeDomain.continuous, notes=tuple(notes),
    )


@dataclass(frozen=True)
class DeviationReport:
    fraction: float
    SE: float
    threshold: float
    t_end: float
    trials: int

    def passed(self, level: float = 1e-3) -> bool:
        return self.fraction < level


def deviation_exit_fraction(
    p: EpiParams,
    x,
    t_end: float | None = None,
    trials: int = MIN_TRIALS,
    seed: SeedSpec | int = 0,
    *,
    factor: float = 2.0,
    zeta: float = 0.5,
    threads: int = 1,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
    max_jumps: int = DEFAULT_MAX_JUMPS,
    progress: bool = False,
) -> DeviationReport:
    """Fraction of paths from x whose theta-norm exceeds factor * H * n before t_end (default n)."""
    s = spectral_decompose(p)
    t_end = float(p.n) if t_end is None else float(t_end)
    threshold = factor * default_H(p, zeta, s) * p.n
    result = simulate_ctmc_ensemble(
        EpiJumpModel(p), _start(x), [t_end], trials, seed,
        threads=threads, chunk_size=chunk_size, max_jumps=max_jumps,
        norm_weights=(1.0, s.theta), progress=progress,
    )
    fraction = float((result.running_max > threshold).mean())
    return DeviationReport(
        fraction=fraction,
        SE=math.sqrt(fraction * (1 - fraction) / trials),
        threshold=threshold,
        t_end=t_end,
        trials=trials,
    )


@dataclass(frozen=True, eq=False)
class EpiCutoffReport:
    cutoff: CutoffReport
    starts: tuple[EpiState, ...]
    skipped: tuple[tuple[float, float], ...]
    travel_times: dict[tuple[int, int], float]
    lower: dict[tuple[int, int], TVProfile] = field(repr=False)
    upper: dict[tuple[int, int], TVProfile] = field(repr=False)

    def starts_frame(self) -> pd.DataFrame:
        rows = []
        for state in self.starts:
            key = (state.x1, state.x2)
            rows.append({'x1': state.x1, 'x2': state.x2, 'travel_time': self.travel_times[key]})
        return pd.DataFrame(rows, columns=['x1', 'x2', 'travel_time'])

    def profiles_frame(self) -> pd.DataFrame:
        """Long format: x1, x2, side, time, value, se."""
        frames = []
        for side, profiles in (('lower', self.lower), ('upper', self.upper)):
            for (x1, x2), profile in profiles.items():
                frame = profile.to_frame().drop(columns='kind')
                frame.insert(0, 'side', side)
                frame.insert(0, 'x2', x2)
                frame.insert(0, 'x1', x1)
                frames.append(frame)
        return pd.concat(frames, ignore_index=True)


def epi_cutoff(
    p: EpiParams,
    zeta: float,
    epsilon_grid: Sequence[float] = (0.1, 0.2, 0.3),
    s_grid: Sequence[float] = DEFAULT_S_GRID,
    trials: int = MIN_TRIALS,
    seed: SeedSpec | int = 0,
    *,
    n_angles: int = 8,
    threads: int = 1,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
    max_jumps: int = DEFAULT_MAX_JUMPS,
    progress: bool = False,
) -> EpiCutoffReport:
    '''Cut-off check with window w = 1 over the start grid.

    Equilibrium draws from seed.child(0) are shared by every start; start i
    uses seed.child(1).child(i) for its upper and seed.child(2).child(i) for
    its lower profile.
    '''
    _check_trials(trials)
    seed = SeedSpec.coerce(seed)
    grid = start_grid(p, zeta, n_angles)
    if not grid.starts:
        raise ValueError('no start state of the grid lies in the positive quadrant')
    run = dict(threads=threads, chunk_size=chunk_size, max_jumps=max_jumps, progress=progress)
    eq = equilibrium_sample(p, trials, seed.child(0), **run)
    s = spectral_decompose(p)
    travel, lower, upper = {}, {}, {}
    for i, state in enumerate(grid.starts):
        key = (state.x1, state.x2)
        travel[key] = travel_time(p, state, s)
        logger.info('start %s: travel time %.4g', key, travel[key])
        upper[key] = coalescence_tv_upper(p, state, s_grid, trials, seed.child(1).child(i), v_samples=eq, **run)
        lower[key] = tv_lower_profile(p, state, s_grid, trials, seed.child(2).child(i), eq_samples=eq, **run)
    report = check_cutoff(lower, travel, 1.0, epsilon_grid, s_grid, upper=upper)
    return EpiCutoffReport(
        cutoff=report,
        starts=grid.starts,
        skipped=grid.skipped,
        travel_times=travel,
        lower=lower,
        upper=upper,
    )
