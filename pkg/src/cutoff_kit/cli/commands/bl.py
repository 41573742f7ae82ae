"""Bernoulli-Laplace subcommands: exact profiles, coupling, the Ehrenfest surrogate and the window fit."""
from __future__ import annotations

import dataclasses

import click
import numpy as np

from cutoff_kit.cli.options import CommandResult, RunConfig, experiment


def _tv_setup(run: RunConfig):
    from cutoff_kit.bernoulli_laplace import BLParams, r_n

    params = run.params
    p = BLParams(params['n'])
    start = p.n if params['start'] is None else params['start']
    p.check_state(start)
    r_max = 2 * r_n(0, p) if params['rmax'] is None else params['rmax']
    return p, start, r_max


def _coupling_setup(run: RunConfig):
    from cutoff_kit.bernoulli_laplace import BLCoupledState, BLParams

    p = BLParams(run.params['n'])
    lo = p.n // 2 if run.params['lo'] is None else run.params['lo']
    BLCoupledState(lo, lo + 1).check(p)
    return p, lo


def _surrogate_setup(run: RunConfig):
    from cutoff_kit.bernoulli_laplace import EhrenfestParams

    p = EhrenfestParams(run.params['k'])
    if run.params['y0'] is not None:
        p.index(run.params['y0'])
    return p


def _window_setup(run: RunConfig):
    from cutoff_kit.bernoulli_laplace import BLParams

    params = run.params
    ns = sorted(set(params['ns']))
    for n in ns:
        BLParams(n)
    bounds = (params['upper_min'], params['upper_max'])
    if (bounds[0] is None) != (bounds[1] is None):
        raise ValueError('--upper-min and --upper-max go together')
    return ns, None if bounds[0] is None else bounds


@experiment('bl-tv', stochastic=False, validate=_tv_setup)
@click.option('--n', 'n', type=click.IntRange(min=2), default=64, show_default=True, help='Balls per urn')
@click.option('--start', type=click.IntRange(min=0), default=None, help='Red balls in urn 1 at r = 0 (default n)')
@click.option('--rmax', type=click.IntRange(min=0), default=None, help='Last step (default 2 r_n(0))')
@click.option('--moments', is_flag=True, help='Add the exact mean and variance columns')
def bl_tv(run: RunConfig, logger) -> CommandResult:
    """Exact TV distance to equilibrium for r = 0..rmax; columns time, value, kind[, mean, variance]."""
    from cutoff_kit.bernoulli_laplace import bl_exact_moments, bl_tv_profile

    p, start, r_max = _tv_setup(run)
    logger.info('n=%d start=%d up to r=%d', p.n, start, r_max)
    frame = bl_tv_profile(p, start, r_max).to_frame()
    if run.params['moments']:
        moments = bl_exact_moments(p, start, r_max)
        frame['mean'] = moments['mean'].to_numpy()
        frame['variance'] = moments['variance'].to_numpy()
    return CommandResult(frame=frame)


@experiment('bl-coupling', validate=_coupling_setup)
@click.option('--n', 'n', type=click.IntRange(min=2), default=50, show_default=True, help='Balls per urn')
@click.option('--lo', type=click.IntRange(min=0), default=None, help='Lower copy of the split start (lo, lo+1); default n/2')
@click.option('--trials', type=click.IntRange(min=1), default=10_000, show_default=True, help='Coupled pairs')
@click.option('--max-steps', type=click.IntRange(min=1), default=None, help='Censoring horizon (default 50 n)')
def bl_coupling(run: RunConfig, logger) -> CommandResult:
    """Coalescence of the coupled pair from a split state: per-step frequency (2/n expected) and mean time (n/2)."""
    from cutoff_kit.bernoulli_laplace import bl_coupling_experiment

    p, lo = _coupling_setup(run)
    report = bl_coupling_experiment(
        p, lo, run.params['trials'], run.seed_spec, run.params['max_steps'],
        **run.run_options,
    )
    row = dataclasses.asdict(report)
    row['expected_frequency'] = report.expected_frequency
    row['expected_mean_time'] = report.expected_mean_time
    logger.info('frequency %.5g (expected %.5g), mean time %.5g', report.step_frequency,
                report.expected_frequency, report.mean_time)
    return CommandResult(payload=row)


@experiment('bl-surrogate', stochastic=False, validate=_surrogate_setup)
@click.option('--k', 'k', type=click.IntRange(min=1), default=16, show_default=True, help='Surrogate half-width (n = 4k)')
@click.option('--y0', type=int, default=None, help='Centred start in [-k, k] (default k)')
@click.option('--rmax', type=click.IntRange(min=0), default=None, help='Last step (default 4n)')
def bl_surrogate(run: RunConfig, logger) -> CommandResult:
    """Exact profiles of the centred chain and the Ehrenfest surrogate; columns r, tv_exact, tv_surrogate, tv_between, bound."""
    from cutoff_kit.bernoulli_laplace import bl_surrogate_comparison, ehrenfest_tv_bound

    p = _surrogate_setup(run)
    report = bl_surrogate_comparison(p, run.params['y0'], run.params['rmax'])
    frame = report.frame.copy()
    frame['bound'] = np.minimum(1.0, ehrenfest_tv_bound(p, report.y0, frame['r'].to_numpy()))
    logger.info('kernel row tv %.4g, equilibrium tv %.4g', report.kernel_row_tv, report.equilibrium_tv)
    return CommandResult(
        frame=frame,
        payload={
            'k': report.k,
            'y0': report.y0,
            'kernel_row_tv': report.kernel_row_tv,
            'equilibrium_tv': report.equilibrium_tv,
            'profile': frame,
        },
    )


@experiment('bl-window', stochastic=False, validate=_window_setup)
@click.option('--n', 'ns', type=click.IntRange(min=2), multiple=True, default=(64, 128, 256), show_default=True,
              help='Chain sizes; repeat the flag for several')
@click.option('--eps', 'epsilon_grid', type=click.FloatRange(0, 1, min_open=True, max_open=True), multiple=True,
              default=(0.1, 0.2, 0.3), show_default=True, help='Cut-off levels')
@click.option('--upper-min', type=float, default=None, help='Smallest delta of the upper exponent fit')
@click.option('--upper-max', type=float, default=None, help='Largest delta of the upper exponent fit')
def bl_window(run: RunConfig, logger) -> CommandResult:
    """Window constants C1, C2 and decay exponents per n, plus the cut-off check at t_n = n log n / 4, w_n = n."""
    from cutoff_kit.bernoulli_laplace import bl_cutoff_check, bl_profiles, bl_window_fit

    ns, upper_range = _window_setup(run)
    profiles = bl_profiles(ns, delta_max=4.0, threads=run.threads)
    fit = bl_window_fit(ns, profiles=profiles, upper_range=upper_range)
    cutoff = bl_cutoff_check(ns, epsilon_grid=run.params['epsilon_grid'], profiles=profiles)
    logger.info('C1 spread %.3g, C2 spread %.3g, cut-off passed: %s', fit.c1_spread, fit.c2_spread, cutoff.all_passed)
    return CommandResult(frame=fit.frame, payload={'fit': fit.frame, 'cutoff': cutoff.to_dict()})
