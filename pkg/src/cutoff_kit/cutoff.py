"""TV profiles, the cut-off window check, and decay-exponent fits."""
from __future__ import annotations
from typing import TYPE_CHECKING, Any
if TYPE_CHECKING:
    from pathlib import Path

import logging
import math
from collections.abc import Hashable, Mapping, Sequence
from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from cutoff_kit.enums import ProfileKind, TimeDomain
from cutoff_kit.errors import DimensionMismatchError, ProfileRangeError, WindowResolutionError


__all__ = [
    'TVProfile',
    'read_profile_csv',
    'CutoffReport',
    'check_cutoff',
    'steepest_descent_time',
    'WindowExponents',
    'window_constants',
    'fit_window_exponents',
]


logger = logging.getLogger(__name__)

_TIME_ATOL = 1e-9


@dataclass(frozen=True, eq=False)
class TVProfile:
    times: np.ndarray
    values: np.ndarray
    kind: ProfileKind = ProfileKind.exact
    se: np.ndarray | None = None
    time_domain: TimeDomain = TimeDomain.discrete
    notes: tuple[str, ...] = ()

    def __post_init__(self):
        times = np.array(self.times, dtype=float).ravel()
        values = np.array(self.values, dtype=float).ravel()
        if times.size != values.size:
            raise DimensionMismatchError(f'{times.size} times but {values.size} values')
        if times.size == 0:
            raise ValueError('a profile needs at least one point')
        if np.any(np.diff(times) <= 0):
            raise ValueError('profile times must be strictly increasing')
        if np.any(values < 0) or np.any(values > 1):
            raise ValueError('TV values must lie in [0, 1]')
        kind = ProfileKind(self.kind)
        se = self.se
        if (se is None) != (kind == ProfileKind.exact):
            raise ValueError(f'standard errors must be given iff the profile is not exact (kind={kind})')
        if se is not None:
            se = np.array(se, dtype=float).ravel()
            if se.size != times.size:
                raise DimensionMismatchError(f'{se.size} standard errors for {times.size} points')
            se.setflags(write=False)
        for arr in (times, values):
            arr.setflags(write=False)
        object.__setattr__(self, 'times', times)
        object.__setattr__(self, 'values', values)
        object.__setattr__(self, 'se', se)
        object.__setattr__(self, 'kind', kind)
        object.__setattr__(self, 'time_domain', TimeDomain(self.time_domain))
        object.__setattr__(self, 'notes', tuple(self.notes))

    def __len__(self) -> int:
        return self.times.size

    @property
    def max_spacing(self) -> float:
        return float(np.diff(self.times).max()) if self.times.size > 1 else 0.0

    def value_at(self, t: float, *, clamp_before: bool = False, resolution: float | None = None) -> float:
        '''
        Discrete profiles are read at floor(t), which must be a profile time.
        Continuous profiles interpolate linearly; if `resolution` is given the
        bracketing gap must not exceed it.

        Args:
            clamp_before: times before the first profile time read the first value

        Raises:
            ProfileRangeError: t is not covered by the profile.
            WindowResolutionError: the bracketing gap is wider than `resolution`.
        '''
        first, last = float(self.times[0]), float(self.times[-1])
        if self.time_domain == TimeDomain.discrete:
            t = math.floor(t + _TIME_ATOL)
        if t < first - _TIME_ATOL:
            if clamp_before:
                return float(self.values[0])
            raise ProfileRangeError(t, first, last)
        if t > last + _TIME_ATOL:
            raise ProfileRangeError(t, first, last)
        i = int(np.searchsorted(self.times, t - _TIME_ATOL, side='left'))
        if i < self.times.size and abs(self.times[i] - t) <= _TIME_ATOL:
            return float(self.values[i])
        if self.time_domain == TimeDomain.discrete:
            raise ProfileRangeError(t, first, last)
        gap = float(self.times[i] - self.times[i - 1])
        if resolution is not None and gap > resolution:
            raise WindowResolutionError(
                f'profile gap {gap:.6g} around t={t:.6g} exceeds the resolution {resolution:.6g}'
            )
        return float(np.interp(t, self.times, self.values))

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame({'time': self.times, 'value': self.values})
        if self.se is not None:
            frame['se'] = self.se
        frame['kind'] = self.kind.value
        return frame

    @classmethod
    def from_frame(cls, frame: pd.DataFrame, time_domain: TimeDomain | str | None = None) -> TVProfile:
        missing = {'time', 'value'} - set(frame.columns)
        if missing:
            raise ValueError(f'profile frame lacks columns {sorted(missing)}')
        has_se = 'se' in frame.columns
        kind = ProfileKind(frame['kind'].iloc[0]) if 'kind' in frame.columns else (
            ProfileKind.mc_upper if has_se else ProfileKind.exact
        )
        times = frame['time'].to_numpy(dtype=float)
        if time_domain is None:
            time_domain = TimeDomain.discrete if np.allclose(times, np.round(times)) else TimeDomain.continuous
        return cls(
            times=times,
            values=frame['value'].to_numpy(dtype=float),
            kind=kind,
            se=frame['se'].to_numpy(dtype=float) if has_se else None,
            time_domain=time_domain,
        )


def read_profile_csv(path: str | Path, time_domain: TimeDomain | str | None = None) -> TVProfile:
    """Load a profile written by the CLI (columns time, value, optional se and kind)."""
    return TVProfile.from_frame(pd.read_csv(path), time_domain=time_domain)


@dataclass(frozen=True)
class CutoffReport:
    epsilon_grid: tuple[float, ...]
    s_of_eps: dict[float, float | None]
    passed: dict[float, bool]
    tested_starts: tuple[Hashable, ...]
    conservative: bool = False
    notes: tuple[str, ...] = field(default=())

    @property
    def all_passed(self) -> bool:
        return all(self.passed.values())

    def to_dict(self) -> dict[str, Any]:
        return {
            'epsilon_grid': list(self.epsilon_grid),
            'results': [
                {'epsilon': eps, 's': self.s_of_eps[eps], 'pass': self.passed[eps]} for eps in self.epsilon_grid
            ],
            'tested_starts': [list(k) if isinstance(k, tuple) else k for k in self.tested_starts],
            'conservative': self.conservative,
            'notes': list(self.notes),
        }

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            'epsilon': list(self.epsilon_grid),
            's': [self.s_of_eps[eps] for eps in self.epsilon_grid],
            'pass': [self.passed[eps] for eps in self.epsilon_grid],
        })


def _per_key(value: float | Mapping[Hashable, float], key: Hashable) -> float:
    return float(value[key]) if isinstance(value, Mapping) else float(value)


def check_cutoff(
    lower: Mapping[Hashable, TVProfile],
    travel_times: Mapping[Hashable, float],
    window: float | Mapping[Hashable, float],
    epsilon_grid: Sequence[float],
    s_grid: Sequence[float],
    upper: Mapping[Hashable, TVProfile] | None = None,
) -> CutoffReport:
    '''Smallest s in s_grid with, for every tested start x,
    lower(t_n(x) - s*w) > 1 - eps and upper(t_n(x) + s*w) < eps.

    `lower` holds exact profiles or Monte-Carlo lower bounds; `upper` defaults to
    `lower` and otherwise holds Monte-Carlo upper bounds, which makes a pass
    trustworthy and a fail possibly noise. Profiles and travel times are keyed
    alike, typically by (n, start).

    Raises:
        ProfileRangeError: a time needed by the check lies past a profile's end.
        WindowResolutionError: a continuous profile has a gap wider than w/4.
    '''
    upper = lower if upper is None else upper
    keys = tuple(lower)
    if not keys:
        raise ValueError('at least one profile is required')
    for key in keys:
        if key not in travel_times or key not in upper:
            raise KeyError(f'no travel time or upper profile for start {key!r}')
        w = _per_key(window, key)
        if w <= 0:
            raise ValueError(f'window width for {key!r} must be positive')
        for profile in (lower[key], upper[key]):
            if profile.time_domain == TimeDomain.continuous and profile.max_spacing > w / 4 + _TIME_ATOL:
                raise WindowResolutionError(
                    f'profile for start {key!r} has a gap of {profile.max_spacing:.6g}, wider than w/4 = {w / 4:.6g}'
                )
    for eps in epsilon_grid:
        if not 0 < eps < 1:
            raise ValueError(f'epsilon must lie in (0, 1), got {eps}')
    ratio = min(travel_times[k] / _per_key(window, k) for k in keys)
    logger.info('min t_n/w_n over %d starts is %.3g', len(keys), ratio)

    s_sorted = sorted(float(s) for s in s_grid)

    def holds(eps: float, s: float) -> bool:
        for key in keys:
            w = _per_key(window, key)
            t = float(travel_times[key])
            lo, up = lower[key], upper[key]
            if not lo.value_at(t - s * w, clamp_before=True) > 1 - eps:
                return False
            if not up.value_at(t + s * w) < eps:
                return False
        return True

    s_of_eps: dict[float, float | None] = {}
    for eps in epsilon_grid:
        s_of_eps[float(eps)] = next((s for s in s_sorted if holds(eps, s)), None)
    conservative = any(p.kind != ProfileKind.exact for p in (*lower.values(), *upper.values()))
    notes = [f'min t_n/w_n over tested starts = {ratio:.6g}', 'tested starts are a finite sample, not exhaustive']
    if conservative:
        notes.append('Monte-Carlo bounds: upper values for +s, lower values for -s; a pass is conservative')
    return CutoffReport(
        epsilon_grid=tuple(float(e) for e in epsilon_grid),
        s_of_eps=s_of_eps,
        passed={eps: s is not None for eps, s in s_of_eps.items()},
        tested_starts=keys,
        conservative=conservative,
        notes=tuple(notes),
    )


def steepest_descent_time(profile: TVProfile) -> float:
    """Midpoint of the profile step with the largest drop |TV(t_i+1) - TV(t_i)| per unit time."""
    if len(profile) < 2:
        raise ValueError('need at least two profile points')
    slopes = np.abs(np.diff(profile.values)) / np.diff(profile.times)
    i = int(np.argmax(slopes))
    return float((profile.times[i] + profile.times[i + 1]) / 2)


@dataclass(frozen=True)
class WindowExponents:
    lower_slope: float
    lower_residual: float
    upper_slope: float
    upper_residual: float
    excluded: tuple[float, ...] = ()


def _fit_line(x: np.ndarray, y: np.ndarray, side: str) -> tuple[float, float]:
    if x.size < 2:
        raise ValueError(f'need at least two usable points for the {side} fit, got {x.size}')
    (slope, intercept) = np.polyfit(x, y, 1)
    residual = float(np.sqrt(np.mean((y - (slope * x + intercept)) ** 2)))
    return float(slope), residual


def fit_window_exponents(
    deltas,
    values,
    lower_range: tuple[float, float] | None = None,
    upper_range: tuple[float, float] | None = None,
) -> WindowExponents:
    '''Least-squares decay rates on both sides of the cut-off.

    Lower: slope of log(1 - TV) against |delta| for delta < 0 (about -4 for
    Bernoulli-Laplace). Upper: slope of log(TV) against delta for delta > 0
    (about -2). Points with TV exactly 0 or 1 are excluded and listed.
    '''
    deltas = np.asarray(deltas, dtype=float)
    values = np.asarray(values, dtype=float)
    if deltas.shape != values.shape:
        raise DimensionMismatchError('deltas and values differ in length')
    usable = (values > 0) & (values < 1)
    excluded = tuple(float(d) for d in deltas[~usable])
    if excluded:
        logger.info('excluded %d points with TV in {0, 1} from the window fit', len(excluded))

    def select(mask: np.ndarray, bounds: tuple[float, float] | None) -> np.ndarray:
        if bounds is not None:
            mask = mask & (np.abs(deltas) >= min(np.abs(bounds))) & (np.abs(deltas) <= max(np.abs(bounds)))
        return mask & usable

    lo = select(deltas < 0, lower_range)
    up = select(deltas > 0, upper_range)
    lower_slope, lower_residual = _fit_line(np.abs(deltas[lo]), np.log1p(-values[lo]), 'lower')
    upper_slope, upper_residual = _fit_line(deltas[up], np.log(values[up]), 'upper')
    return WindowExponents(lower_slope, lower_residual, upper_slope, upper_residual, excluded)


def window_constants(deltas, values) -> tuple[float, float]:
    """Smallest C1, C2 with 1 - TV <= C1 e^{-4|delta|} (delta < 0) and TV <= C2 e^{-2 delta} (delta >= 0)."""
    deltas = np.asarray(deltas, dtype=float)
    values = np.asarray(values, dtype=float)
    neg, pos = deltas < 0, deltas >= 0
    c1 = float(np.max((1 - values[neg]) * np.exp(4 * np.abs(deltas[neg])))) if neg.any() else math.nan
    c2 = float(np.max(values[pos] * np.exp(2 * deltas[pos]))) if pos.any() else math.nan
    return c1, c2
