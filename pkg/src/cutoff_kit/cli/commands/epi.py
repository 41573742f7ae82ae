"""Two-host epidemic subcommands."""
from __future__ import annotations

import click
import numpy as np
import pandas as pd

from cutoff_kit.cli.options import CommandResult, RunConfig, experiment


_POSITIVE = click.FloatRange(min=0, min_open=True)
_MODEL_FLAGS = (
    ('--alpha', 1.0, 'Rate at which type-2 infections infect type 1'),
    ('--beta', 1.0, 'Rate at which type-1 infections infect type 2'),
    ('--gamma', 2.0, 'Recovery rate of type 1'),
    ('--delta', 2.0, 'Recovery rate of type 2'),
    ('--mu', 1.0, 'Immigration coefficient of type 1 (rate mu n)'),
    ('--nu', 1.0, 'Immigration coefficient of type 2 (rate nu n)'),
)


def model_options(with_start: bool = True):
    """Rate constants (symmetric preset by default), the scale n and optionally a start state."""
    def decorator(f):
        if with_start:
            f = click.option('--start', type=(click.IntRange(min=0), click.IntRange(min=0)), default=None,
                             help='Start state X1 X2 (default round(1.5 n c))')(f)
        f = click.option('--n', 'n', type=click.IntRange(min=1), default=100, show_default=True, help='Population scale')(f)
        for flag, default, help_text in reversed(_MODEL_FLAGS):
            f = click.option(flag, type=_POSITIVE, default=default, show_default=True, help=help_text)(f)
        return f
    return decorator


def model_params(run: RunConfig):
    from cutoff_kit.two_host import EpiParams

    return EpiParams(**{name: run.params[name] for name in ('alpha', 'beta', 'gamma', 'delta', 'mu', 'nu', 'n')})


def start_state(run: RunConfig, p):
    from cutoff_kit.two_host import EpiState, spectral_decompose

    start = run.params.get('start')
    if start is None:
        return EpiState.rounded(1.5 * p.n * spectral_decompose(p).c)
    return EpiState(*start)


def check_model(run: RunConfig):
    start_state(run, model_params(run))


@experiment('epi-mean', stochastic=False, validate=check_model)
@model_options()
@click.option('--t-max', type=click.FloatRange(min=0), default=5.0, show_default=True, help='Last time')
@click.option('--steps', type=click.IntRange(min=1), default=50, show_default=True, help='Time intervals')
def epi_mean(run: RunConfig, logger) -> CommandResult:
    """Deterministic mean n m_x(t); CSV columns time, x1, x2; JSON adds the spectrum and travel time."""
    from cutoff_kit.two_host import kappa_diagnostic, mean_trajectory, spectral_decompose, travel_time

    p = model_params(run)
    x = start_state(run, p)
    s = spectral_decompose(p)
    t = np.linspace(0.0, run.params['t_max'], run.params['steps'] + 1)
    path = mean_trajectory(p, x, t, s)
    frame = pd.DataFrame({'time': t, 'x1': path[:, 0], 'x2': path[:, 1]})
    t_n = travel_time(p, x, s)
    logger.info('start %s: travel time %.6g', tuple(x), t_n)
    payload = {
        'params': p.to_dict(),
        'start': list(x),
        'rho': s.rho,
        'rho_prime': s.rho_prime,
        'theta': s.theta,
        'theta_prime': s.theta_prime,
        'c': s.c,
        'travel_time': t_n,
        'kappa': kappa_diagnostic(p, spectral=s),
        'trajectory': frame,
    }
    return CommandResult(frame=frame, payload=payload)


@experiment('epi-simulate', validate=check_model)
@model_options()
@click.option('--time', 'times', type=click.FloatRange(min=0), multiple=True, default=(0.5, 1.0, 2.0),
              show_default=True, help='Observation times; repeat the flag')
@click.option('--trials', type=click.IntRange(min=1), default=10_000, show_default=True, help='Trajectories')
def epi_simulate(run: RunConfig, logger) -> CommandResult:
    """Simulated mean against the deterministic mean; columns time, mean_x1, mean_x2, analytic_x1, analytic_x2, se_x1, se_x2, pass."""
    from cutoff_kit.two_host import simulated_mean

    p = model_params(run)
    x = start_state(run, p)
    times = sorted(set(run.params['times']))
    frame = simulated_mean(p, x, times, run.params['trials'], run.seed_spec,
                           max_jumps=run.max_jumps, **run.run_options)
    if not frame['pass'].all():
        logger.warning('simulated mean is more than 4 SE from the deterministic mean at some time')
    return CommandResult(frame=frame)


@experiment('epi-coalesce', validate=check_model)
@model_options()
@click.option('--s', 's_grid', type=click.FloatRange(min=0), multiple=True,
              default=(0.0, 1.0, 2.0, 4.0, 8.0), show_default=True, help='Offsets after the travel time; repeat the flag')
@click.option('--trials', type=click.IntRange(min=1000), default=1000, show_default=True, help='Coupled pairs')
def epi_coalesce(run: RunConfig, logger) -> CommandResult:
    """P(copies apart at t_n(x) + s), an upper bound on TV; columns s, time, value, se, kind."""
    from cutoff_kit.two_host import coalescence_tv_upper

    p = model_params(run)
    x = start_state(run, p)
    s_grid = np.unique(np.asarray(run.params['s_grid'], dtype=float))
    profile = coalescence_tv_upper(p, x, s_grid, run.params['trials'], run.seed_spec,
                                   max_jumps=run.max_jumps, **run.run_options)
    frame = profile.to_frame()
    frame.insert(0, 's', s_grid)
    return CommandResult(frame=frame)


@experiment('epi-cutoff', validate=check_model)
@model_options(with_start=False)
@click.option('--zeta', type=click.FloatRange(0, 1, min_open=True, max_open=True), default=0.5, show_default=True,
              help='Annulus E_n(zeta) of start states')
@click.option('--eps', 'epsilon_grid', type=click.FloatRange(0, 1, min_open=True, max_open=True), multiple=True,
              default=(0.1, 0.2, 0.3), show_default=True, help='Cut-off levels; repeat the flag')
@click.option('--s-max', type=click.FloatRange(min=0), default=8.0, show_default=True, help='Largest window offset')
@click.option('--angles', type=click.IntRange(min=1), default=8, show_default=True, help='Directions per radius')
@click.option('--trials', type=click.IntRange(min=1000), default=1000, show_default=True, help='Paths per start')
@click.option('--profiles', 'profiles_out', type=click.Path(dir_okay=False), default=None,
              help='Also write the per-start profiles (CSV: x1, x2, side, time, value, se)')
def epi_cutoff(run: RunConfig, logger) -> CommandResult:
    """Cut-off check with w = 1 over the start grid; CSV columns epsilon, s, pass; JSON adds starts and notes."""
    from cutoff_kit.two_host import epi_cutoff as run_epi_cutoff

    params = run.params
    p = model_params(run)
    s_grid = np.round(np.arange(0.0, params['s_max'] + 1e-9, 0.25), 10)
    report = run_epi_cutoff(
        p, params['zeta'], params['epsilon_grid'], s_grid, params['trials'], run.seed_spec,
        n_angles=params['angles'], max_jumps=run.max_jumps, **run.run_options,
    )
    logger.info('%d starts tested, %d skipped', len(report.starts), len(report.skipped))
    payload = report.cutoff.to_dict()
    payload['starts'] = report.starts_frame()
    payload['skipped'] = [list(point) for point in report.skipped]
    side_outputs = ((params['profiles_out'], report.profiles_frame()),) if params['profiles_out'] else ()
    return CommandResult(frame=report.cutoff.to_frame(), payload=payload, side_outputs=side_outputs)


@experiment('epi-equilibrium', validate=check_model)
@model_options(with_start=False)
@click.option('--trials', type=click.IntRange(min=1), default=10_000, show_default=True, help='Equilibrium draws')
def epi_equilibrium(run: RunConfig, logger) -> CommandResult:
    """Equilibrium sample statistics; columns coordinate, mean, expected, SE, variance, variance_per_n, pass."""
    from cutoff_kit.two_host import equilibrium_sample, equilibrium_summary

    p = model_params(run)
    samples = equilibrium_sample(p, run.params['trials'], run.seed_spec, max_jumps=run.max_jumps, **run.run_options)
    return CommandResult(frame=equilibrium_summary(p, samples))
