import shutil
from pathlib import Path

import click


@click.group()
def config():
    """Manage configuration settings."""
    pass


@config.command()
@click.pass_context
def where(ctx):
    """Print the config path."""
    config = ctx.obj['config']
    click.echo(config.path)


@config.command('list')
@click.pass_context
def list_config(ctx):
    """Print the config file."""
    from pprint import pformat
    config = ctx.obj['config']
    content = click.style(pformat(config.to_dict()), fg='green')
    click.echo(f"File: {config.file_path}\n{content}")


@config.command('set')
@click.pass_context
@click.option('--log-path', '--log', type=click.Path(resolve_path=True), help='Set the log path')
@click.option('--cache-path', '--cache', type=click.Path(resolve_path=True), help='Set the cache path')
@click.option('--threads', type=click.IntRange(min=1), help='Set the worker cap')
@click.option('--max-jumps', type=click.IntRange(min=1), help='Set the explosion cap of one simulated path')
@click.option('--chunk-size', type=click.IntRange(min=1), help='Set the paths per seeded chunk (changes MC output)')
def set_config(ctx, log_path, cache_path, threads, max_jumps, chunk_size):
    """Update configuration values.

    Examples:
        cutoff-kit config set --log /var/log/cutoff-kit
        cutoff-kit config set --threads 8 --max-jumps 1000000
    """
    config = ctx.obj['config']

    changes = {
        'log_path': Path(log_path) if log_path else None,
        'cache_path': Path(cache_path) if cache_path else None,
        'threads': threads,
        'max_jumps': max_jumps,
        'chunk_size': chunk_size,
    }
    updated = {key: value for key, value in changes.items() if value is not None}
    if not updated:
        click.echo("Error: Please specify at least one value to update.", err=True)
        click.echo("Run 'cutoff-kit config set --help' for usage information.")
        ctx.exit(1)

    for key, value in updated.items():
        setattr(config, key, value)
    config.save()
    click.echo(f"Updated {config.filename}:")
    for key, value in updated.items():
        click.echo(f"  {key} -> {value}")


@config.command()
@click.pass_context
@click.option('--config-file', '--config', '-c', is_flag=True, help='Reset the config file')
@click.option('--logging-file', '--logging', '-l', is_flag=True, help='Reset the logging.yml file')
def reset(ctx, config_file, logging_file):
    """Reset the configuration to defaults, backing up the current files first.

    If no flag is set, both files are reset.
    """
    from cutoff_kit.config import CutoffKitConfig, reset_config

    config = ctx.obj['config']
    if not any([config_file, logging_file]):
        config_file = logging_file = True

    def _backup(filename: str):
        user_file = config.path / filename
        if user_file.exists():
            backup_file = config.path / f'{filename}.bak'
            shutil.copy(user_file, backup_file)
            click.echo(f"  Backed up the existing file {user_file.name} to {backup_file.name}")

    if config_file:
        click.echo(f"Resetting {config.filename}...")
        _backup(config.filename)
        config.file_path.unlink(missing_ok=True)
        reset_config()
        # a missing file is rewritten with defaults on load
        ctx.obj['config'] = config = CutoffKitConfig()

    if logging_file:
        filename = config.LOGGING_CONFIG_FILENAME
        click.echo(f"Resetting {filename}...")
        _backup(filename)
        default_file = config.default_file_path(filename)
        if default_file is None:
            click.echo(f"  Warning: default {filename} not found, skipping", err=True)
        else:
            shutil.copy(default_file, config.path / filename)
            click.echo(f"  Restored from default file {default_file}")
