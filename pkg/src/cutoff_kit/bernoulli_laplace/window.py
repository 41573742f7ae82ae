"""Window constants and the cut-off check for worst-case exact profiles."""
from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
import pandas as pd

from cutoff_kit.bernoulli_laplace.chain import BLParams, bl_profiles, r_n
from cutoff_kit.cutoff import CutoffReport, TVProfile, check_cutoff, fit_window_exponents, window_constants


__all__ = [
    'DEFAULT_DELTA_GRID',
    'tv_at_deltas',
    'WindowFitReport',
    'bl_window_fit',
    'bl_cutoff_check',
]


logger = logging.getLogger(__name__)

DEFAULT_DELTA_GRID = tuple(np.round(np.arange(-3.0, 3.0 + 1e-9, 0.25), 10))


def tv_at_deltas(profile: TVProfile, p: BLParams, deltas: Sequence[float]) -> pd.DataFrame:
    '''TV at r_n(delta); deltas with a negative r_n are dropped.

    Columns: delta, r, tv.
    '''
    rows = []
    for delta in deltas:
        try:
            r = r_n(delta, p)
        except ValueError:
            continue
        rows.append((float(delta), r, profile.value_at(r)))
    return pd.DataFrame(rows, columns=['delta', 'r', 'tv'])


@dataclass(frozen=True, eq=False)
class WindowFitReport:
    '''
    frame columns: n, C1, C2, lower_slope, upper_slope, points.
    C1 and C2 are the smallest constants with 1 - TV <= C1 e^(-4|delta|) for
    delta < 0 and TV <= C2 e^(-2 delta) for delta >= 0 on the grid.
    '''
    frame: pd.DataFrame
    points: pd.DataFrame

    @property
    def c1_max(self) -> float:
        return float(self.frame['C1'].max())

    @property
    def c2_max(self) -> float:
        return float(self.frame['C2'].max())

    @property
    def c1_spread(self) -> float:
        return float(self.frame['C1'].max() / self.frame['C1'].min())

    @property
    def c2_spread(self) -> float:
        return float(self.frame['C2'].max() / self.frame['C2'].min())


def bl_window_fit(
    ns: Sequence[int],
    delta_grid: Sequence[float] = DEFAULT_DELTA_GRID,
    profiles: dict[int, TVProfile] | None = None,
    upper_range: tuple[float, float] | None = None,
    threads: int = 1,
) -> WindowFitReport:
    """Fit the window constants and decay exponents per n from start j0 = n."""
    delta_max = max(delta_grid)
    profiles = profiles if profiles is not None else bl_profiles(ns, delta_max=delta_max, threads=threads)
    rows, points = [], []
    for n in ns:
        p = BLParams(n)
        table = tv_at_deltas(profiles[n], p, delta_grid)
        dropped = len(delta_grid) - len(table)
        if dropped:
            logger.info('n=%d: %d deltas below -log(n)/4 have no r_n and were dropped', n, dropped)
        c1, c2 = window_constants(table['delta'], table['tv'])
        try:
            exps = fit_window_exponents(table['delta'], table['tv'], upper_range=upper_range)
            lower_slope, upper_slope = exps.lower_slope, exps.upper_slope
        except ValueError as e:
            logger.warning('n=%d: %s', n, e)
            lower_slope = upper_slope = math.nan
        rows.append((n, c1, c2, lower_slope, upper_slope, len(table)))
        points.append(table.assign(n=n))
    frame = pd.DataFrame(rows, columns=['n', 'C1', 'C2', 'lower_slope', 'upper_slope', 'points'])
    point_frame = pd.concat(points, ignore_index=True)[['n', 'delta', 'r', 'tv']]
    return WindowFitReport(frame=frame, points=point_frame)


def bl_cutoff_check(
    ns: Sequence[int],
    epsilon_grid: Sequence[float] = (0.1, 0.2, 0.3),
    s_grid: Sequence[float] = tuple(np.round(np.arange(0.0, 3.0 + 1e-9, 0.25), 10)),
    profiles: dict[int, TVProfile] | None = None,
    travel_times: dict[int, float] | None = None,
    threads: int = 1,
) -> CutoffReport:
    """check_cutoff on worst-case profiles with t_n = n log n / 4 and w_n = n, keyed by (n, n)."""
    s_max = max(s_grid)
    profiles = profiles if profiles is not None else bl_profiles(ns, delta_max=s_max + 1, threads=threads)
    if travel_times is None:
        travel_times = {n: n * math.log(n) / 4 for n in ns}
    keyed = {(n, n): profiles[n] for n in ns}
    return check_cutoff(
        lower=keyed,
        travel_times={(n, n): travel_times[n] for n in ns},
        window={(n, n): float(n) for n in ns},
        epsilon_grid=epsilon_grid,
        s_grid=s_grid,
    )
