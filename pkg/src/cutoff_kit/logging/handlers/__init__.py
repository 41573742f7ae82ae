from cutoff_kit.logging.handlers.lazy_handler import LazyHandler


__all__ = ['LazyHandler']
