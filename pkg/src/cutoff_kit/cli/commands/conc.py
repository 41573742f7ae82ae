"""Concentration subcommands: closed-form bounds, verification presets and the hitting-walk experiment."""
from __future__ import annotations

import click

from cutoff_kit.cli.options import CommandResult, RunConfig, experiment
from cutoff_kit.enums import BoundName, ContractiveMode, OutputFormat


# flag -> parameter field of the bound dataclasses
_BOUND_FIELDS = (
    ('--delta', 'delta', 'Martingale: sum of conditional variances'),
    ('--gamma', 'gamma', 'Martingale: increment bound'),
    ('--beta', 'beta', 'Discrete chain: one-step shift bound'),
    ('--a-k', 'a_k', 'Discrete chain: sum of the alpha_i'),
    ('--k', 'k', 'Discrete chain: number of steps'),
    ('--beta-hat', 'beta_hat', 'Continuous chain: jump-size bound'),
    ('--a-hat', 'a_hat_t', 'Continuous chain: integrated eta'),
    ('--t', 't', 'Continuous chain: horizon'),
    ('--L', 'L', 'Contractive: Lipschitz constant of f'),
    ('--D', 'D', 'Contractive: largest one-step distance'),
    ('--rho', 'rho', 'Contractive: contraction constant'),
    ('--q', 'q', 'Contractive: exit-rate bound (continuous modes)'),
    ('--b', 'b', 'Contractive: excursion correction (b modes)'),
    ('--horizon', 'horizon', 'Contractive: steps or time (b modes)'),
    ('--phi', 'phi', 'Hitting: scaled start height'),
    ('--t0', 't0', 'Hitting: time horizon'),
    ('--B', 'B', 'Hitting: largest jump of f'),
    ('--eta', 'eta', 'Hitting: smallest guaranteed jump of f'),
    ('--r', 'r', 'Hitting: half the guaranteed jump rate'),
    ('--K-H', 'K_H', 'Hitting: universal constant'),
)


def _bound_options(f):
    for flag, name, help_text in reversed(_BOUND_FIELDS):
        param_type = int if name == 'k' else float
        f = click.option(flag, name, type=param_type, default=None, help=help_text)(f)
    return f


def _evaluate(run: RunConfig) -> tuple[float, str, float | None, str | None]:
    from cutoff_kit.concentration import evaluate_bound

    params = dict(run.params)
    name, m, mode = params.pop('bound_name'), params.pop('m'), params.pop('mode')
    return evaluate_bound(name, params, m=m, mode=mode), name, m, mode


@experiment('conc-bounds', stochastic=False, default_format=OutputFormat.json, validate=_evaluate)
@click.option('--bound', 'bound_name', type=click.Choice([b.value for b in BoundName]), required=True,
              help='Which bound to evaluate')
@click.option('--m', 'm', type=click.FloatRange(min=0), default=None, help='Deviation m (all but hitting)')
@click.option('--mode', type=click.Choice([m.value for m in ContractiveMode]), default=None,
              help='Contractive variant')
@_bound_options
def conc_bounds(run: RunConfig, logger) -> CommandResult:
    """Evaluate one bound from named parameters; JSON {"bound": value, ...}."""
    value, name, m, mode = _evaluate(run)
    logger.debug('%s bound at m=%s: %.17g', name, m, value)
    payload = {'bound': value, 'name': name, 'm': m}
    if mode is not None:
        payload['mode'] = mode
    return CommandResult(payload=payload)


@experiment('conc-verify')
@click.option('--preset', type=click.Choice(
    ['bl-discrete', 'bl-contractive', 'mg-lemma', 'walk-continuous', 'epi-contractive']), required=True,
    help='Verification preset')
@click.option('--trials', type=click.IntRange(min=1000), default=None, help='Samples (default: the preset\'s)')
def conc_verify(run: RunConfig, logger) -> CommandResult:
    """Empirical tails against a bound; columns m, empirical, bound, SE, pass (plus preset extras)."""
    from cutoff_kit.concentration.presets import run_preset

    params = run.params
    frame = run_preset(params['preset'], params['trials'], run.seed_spec, **run.run_options)
    failed = int((~frame['pass']).sum())
    if failed:
        logger.warning('%d rows exceed the bound by more than 3 SE', failed)
    return CommandResult(frame=frame)


@experiment('walk-hitting')
@click.option('--r', 'r', type=click.FloatRange(min=0, min_open=True), default=2500.0, show_default=True,
              help='Jump rate in each direction')
@click.option('--phi', type=click.FloatRange(min=0, min_open=True), default=1.0, show_default=True,
              help='Start at ceil(phi sqrt(r))')
@click.option('--t0', 't0_grid', type=click.FloatRange(min=0, min_open=True), multiple=True,
              default=(1.0, 4.0, 9.0, 16.0, 25.0), show_default=True, help='Horizons; repeat the flag')
@click.option('--trials', type=click.IntRange(min=1), default=10_000, show_default=True, help='Walks')
@click.option('--K-H', 'K_H', type=click.FloatRange(min=0), default=1.0, show_default=True,
              help='Universal constant of the bound')
def walk_hitting(run: RunConfig, logger) -> CommandResult:
    """P(T* >= t0) for the +-1 walk hitting 0; columns t0, empirical, SE, bound, leading, pass."""
    from cutoff_kit.concentration import hitting_walk_experiment

    params = run.params
    report = hitting_walk_experiment(
        params['r'], params['phi'], params['t0_grid'], params['trials'], run.seed_spec,
        K_H=params['K_H'], **run.run_options,
    )
    if not report.monotone:
        logger.warning('miss probability rose by more than 3 SE between horizons')
    return CommandResult(frame=report.frame)
