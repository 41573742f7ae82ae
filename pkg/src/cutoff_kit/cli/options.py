"""Plumbing shared by the experiment subcommands: common flags, config-file merge, output and error mapping."""
from __future__ import annotations

import functools
import json
import logging
import re
from collections.abc import Callable
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import click
import pandas as pd
from click.core import ParameterSource

from cutoff_kit.enums import OutputFormat
from cutoff_kit.errors import ConfigError
from cutoff_kit.logging.adapters import ExperimentLoggerAdapter
from cutoff_kit.markov_core import SeedSpec
from cutoff_kit.utils import resolve_output_path
from cutoff_kit.utils.io import frame_to_csv, json_dumps, write_text_atomic


__all__ = ['RunConfig', 'CommandResult', 'experiment', 'merge_config_file']


SEED_MAX = 2**64 - 1
COMMON_PARAMS = frozenset({'config_file', 'seed', 'out', 'fmt', 'threads', 'dry_run', 'quiet'})


@dataclass(frozen=True)
class RunConfig:
    command: str
    params: dict[str, Any]
    seed: int | None
    out: Path | None
    fmt: OutputFormat
    threads: int
    chunk_size: int
    max_jumps: int
    quiet: bool = False
    dry_run: bool = False

    @property
    def seed_spec(self) -> SeedSpec:
        if self.seed is None:
            raise ConfigError(f'{self.command} needs a seed', field='seed')
        return SeedSpec(self.seed)

    @property
    def run_options(self) -> dict[str, Any]:
        """Keyword arguments every ensemble runner accepts."""
        return {'threads': self.threads, 'chunk_size': self.chunk_size, 'progress': not self.quiet}

    def to_dict(self) -> dict[str, Any]:
        return {
            'command': self.command,
            'params': self.params,
            'seed': self.seed,
            'out': self.out,
            'format': self.fmt,
            'threads': self.threads,
        }


@dataclass(frozen=True, eq=False)
class CommandResult:
    '''What a subcommand produced.

    CSV output needs `frame`, or a flat `payload` that becomes a one-row frame.
    JSON output uses `payload` when given, otherwise the frame's records.
    `side_outputs` are extra CSV files as (path, frame), written after the main output.
    '''
    frame: pd.DataFrame | None = None
    payload: Any = None
    side_outputs: tuple[tuple[Path, pd.DataFrame], ...] = ()

    def render(self, fmt: OutputFormat) -> str:
        if fmt == OutputFormat.csv:
            frame = self.frame if self.frame is not None else pd.DataFrame([self.payload])
            return frame_to_csv(frame)
        return json_dumps(self.payload if self.payload is not None else self.frame)

    def render_side_outputs(self) -> list[tuple[Path, str]]:
        return [(resolve_output_path(path), frame_to_csv(frame)) for path, frame in self.side_outputs]


def _line_of(text: str, key: str) -> int | None:
    match = re.search(rf'"{re.escape(key)}"\s*:', text)
    return text.count('\n', 0, match.start()) + 1 if match else None


def _load_config_file(path: Path) -> tuple[dict[str, Any], str]:
    text = Path(path).read_text(encoding='utf-8')
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f'invalid JSON in {path}: {e.msg}', line=e.lineno) from e
    if not isinstance(data, dict):
        raise ConfigError(f'{path} must hold a JSON object', line=1)
    return data, text


def merge_config_file(ctx: click.Context, command: str, kwargs: dict[str, Any]) -> dict[str, Any]:
    '''Fill parameters from the --config JSON file; flags given on the command line win.

    Keys are option names with dashes or underscores. An optional "command"
    key must name this subcommand.

    Raises:
        ConfigError: unknown key, wrong command or a value the option rejects,
            with the key and its line in the file.
    '''
    path = kwargs.get('config_file')
    if path is None:
        return dict(kwargs)
    data, text = _load_config_file(path)
    lookup: dict[str, click.Parameter] = {}
    for param in ctx.command.params:
        lookup[param.name] = param
        for opt in param.opts:
            if opt.startswith('--'):
                lookup[opt.lstrip('-').replace('-', '_')] = param
    merged = dict(kwargs)
    for key, value in data.items():
        line = _line_of(text, key)
        if key == 'command':
            if value != command:
                raise ConfigError(f'config file is for {value!r}, not {command!r}', field=key, line=line)
            continue
        param = lookup.get(key.replace('-', '_'))
        if param is None or param.name == 'config_file':
            raise ConfigError(f'{command} has no parameter {key!r}', field=key, line=line)
        if ctx.get_parameter_source(param.name) == ParameterSource.COMMANDLINE:
            continue
        try:
            merged[param.name] = param.type_cast_value(ctx, value)
        except click.BadParameter as e:
            raise ConfigError(e.message, field=key, line=line) from e
    return merged


def resolve_run_config(ctx: click.Context, command: str, kwargs: dict[str, Any], stochastic: bool) -> RunConfig:
    merged = merge_config_file(ctx, command, kwargs)
    if stochastic and merged.get('seed') is None:
        raise ConfigError('a seed is required (--seed or "seed" in the config file)', field='seed')
    root = ctx.find_root()
    config = (root.obj or {}).get('config')
    if config is None:
        from cutoff_kit.config import get_config
        config = get_config()
    return RunConfig(
        command=command,
        params={key: value for key, value in merged.items() if key not in COMMON_PARAMS},
        seed=merged.get('seed'),
        out=merged.get('out'),
        fmt=OutputFormat(merged['fmt']),
        threads=merged.get('threads') or config.threads,
        chunk_size=config.chunk_size,
        max_jumps=config.max_jumps,
        quiet=bool(merged.get('quiet')),
        dry_run=bool(merged.get('dry_run')),
    )


def common_options(stochastic: bool, default_format: OutputFormat):
    options = [
        click.option('--config', 'config_file', type=click.Path(exists=True, dir_okay=False, path_type=Path),
                     help='JSON file of parameter values; flags given on the command line win'),
        click.option('--out', type=click.Path(dir_okay=False, path_type=Path),
                     help='Output file (stdout if omitted); relative paths resolve under $CUTOFF_KIT_OUTPUT_DIR'),
        click.option('--format', 'fmt', type=click.Choice([f.value for f in OutputFormat]),
                     default=default_format.value, show_default=True, help='Output format'),
        click.option('--threads', type=click.IntRange(min=1), default=None,
                     help='Worker cap (default: the configured threads)'),
        click.option('--dry-run', is_flag=True, help='Validate and print the resolved parameters without computing'),
        click.option('--quiet', '-q', is_flag=True, help='Hide progress bars'),
    ]
    if stochastic:
        options.insert(1, click.option('--seed', type=click.IntRange(0, SEED_MAX), default=None,
                                       help='Root seed of every random stream'))

    def decorator(f):
        for option in reversed(options):
            f = option(f)
        return f

    return decorator


def experiment(
    name: str,
    *,
    stochastic: bool = True,
    default_format: OutputFormat = OutputFormat.csv,
    validate: Callable[[RunConfig], Any] | None = None,
) -> Callable[[Callable[[RunConfig, ExperimentLoggerAdapter], CommandResult]], click.Command]:
    '''Turn fn(run, logger) -> CommandResult into a subcommand with the common flags.

    Config errors exit with a usage error; ValueError and RuntimeError from the
    library become a ClickException. `validate(run)` builds the model objects
    without computing and also runs under --dry-run, so a dry run fails where
    the real run would. Every output is rendered in full before the first
    atomic write and side outputs follow the main one, so a failure never
    leaves a partial file.
    '''
    def decorator(fn):
        @functools.wraps(fn)
        def callback(**kwargs):
            ctx = click.get_current_context()
            try:
                run = resolve_run_config(ctx, name, kwargs, stochastic)
            except ConfigError as e:
                raise click.UsageError(str(e), ctx=ctx) from e
            logger = ExperimentLoggerAdapter(logging.getLogger('cutoff_kit.cli'), name, run.seed)
            try:
                if validate is not None:
                    validate(run)
                if run.dry_run:
                    click.echo(json_dumps(run.to_dict()), nl=False)
                    return
                result = fn(run, logger)
                text = result.render(run.fmt)
                side_outputs = result.render_side_outputs()
            except (ValueError, RuntimeError) as e:
                logger.debug('failed: %s', e, exc_info=True)
                raise click.ClickException(str(e)) from e
            if run.out is None:
                click.echo(text, nl=False)
            else:
                logger.info('wrote %s', write_text_atomic(text, resolve_output_path(run.out)))
            for path, side_text in side_outputs:
                logger.info('wrote %s', write_text_atomic(side_text, path))

        return click.command(name)(common_options(stochastic, default_format)(callback))

    return decorator
