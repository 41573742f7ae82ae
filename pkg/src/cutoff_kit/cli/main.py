"""The `cutoff-kit` entry point: one group holding `config` and every experiment subcommand."""
import click
from trogon import tui

from cutoff_kit.config import CutoffKitConfig


def init_context(ctx: click.Context):
    """Load .env, the user config and the logging setup into ctx.obj."""
    from cutoff_kit.config import get_config
    from cutoff_kit.logging import setup_logging
    from cutoff_kit.utils import load_env_file

    load_env_file()
    config = get_config()
    setup_logging(config, debug=ctx.params.get('debug', False))
    ctx.obj['config'] = config


@tui(command='tui', help='Open a terminal UI over every subcommand')
@click.group(name='cutoff-kit', context_settings={'help_option_names': ['-h', '--help']})
@click.option('--debug', is_flag=True, help='Log every cutoff_kit logger at DEBUG level')
@click.version_option(version=CutoffKitConfig.__version__, package_name='cutoff-kit')
@click.pass_context
def cutoff_kit_group(ctx: click.Context, debug: bool):
    """Concentration bounds and cut-off experiments for Markov chains.

    Experiments write CSV or JSON to stdout or --out; `config` manages
    ~/.cutoff_kit (or $CUTOFF_KIT_HOME).
    """
    ctx.ensure_object(dict)
    init_context(ctx)


def _register_commands(group: click.Group):
    from cutoff_kit.cli.commands import EXPERIMENT_COMMANDS, config

    group.add_command(config)
    for command in EXPERIMENT_COMMANDS:
        group.add_command(command)


_register_commands(cutoff_kit_group)
