"""Domain errors. Each subclasses a builtin so callers can catch either."""


__all__ = [
    'DimensionMismatchError',
    'InvalidRateError',
    'ExplosionError',
    'SupercriticalError',
    'ProfileRangeError',
    'WindowResolutionError',
    'ConfigError',
]


class DimensionMismatchError(ValueError):
    pass


class InvalidRateError(ValueError):
    """A rate list contained a non-positive rate or a zero jump."""


class ExplosionError(RuntimeError):
    """Jump count exceeded the configured cap."""

    def __init__(self, max_jumps: int, time: float | None = None):
        where = f' (reached at t={time:.6g})' if time is not None else ''
        super().__init__(f'jump count exceeded the explosion cap of {max_jumps}{where}')
        self.max_jumps = max_jumps
        self.time = time


class SupercriticalError(ValueError):
    """The two-host drift has no subcritical decomposition (R >= 1)."""


class ProfileRangeError(ValueError):
    def __init__(self, time: float, first: float, last: float):
        super().__init__(f'time {time:.17g} is outside the profile range [{first:.17g}, {last:.17g}]')
        self.time = time


class WindowResolutionError(ValueError):
    pass


class ConfigError(ValueError):
    """Invalid run configuration; the message names the offending field."""

    def __init__(self, message: str, field: str | None = None, line: int | None = None):
        location = []
        if line is not None:
            location.append(f'line {line}')
        if field is not None:
            location.append(f'field {field!r}')
        prefix = f"[{', '.join(location)}] " if location else ''
        super().__init__(prefix + message)
        self.field = field
        self.line = line
