from cutoff_kit.cli.commands.config import config
from cutoff_kit.cli.commands.bl import bl_coupling, bl_surrogate, bl_tv, bl_window
from cutoff_kit.cli.commands.conc import conc_bounds, conc_verify, walk_hitting
from cutoff_kit.cli.commands.epi import epi_coalesce, epi_cutoff, epi_equilibrium, epi_mean, epi_simulate


EXPERIMENT_COMMANDS = (
    bl_tv,
    bl_coupling,
    bl_surrogate,
    bl_window,
    conc_bounds,
    conc_verify,
    walk_hitting,
    epi_mean,
    epi_simulate,
    epi_coalesce,
    epi_cutoff,
    epi_equilibrium,
)


__all__ = [
    'config',
    'EXPERIMENT_COMMANDS',
]
