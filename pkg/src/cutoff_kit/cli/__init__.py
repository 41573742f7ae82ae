from cutoff_kit.cli.main import cutoff_kit_group


__all__ = ['cutoff_kit_group']
