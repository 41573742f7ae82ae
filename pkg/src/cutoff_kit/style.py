from enum import StrEnum

from rich.console import Console


# results go to stdout; progress bars and log records go to stderr
console = Console()
err_console = Console(stderr=True)
cprint = console.print


__all__ = (
    'console',
    'err_console',
    'cprint',
    'TextStyle',
    'RichColor',
)


class SpacedStrEnum(StrEnum):
    """StrEnum that joins with a space when concatenated, e.g. TextStyle.BOLD + RichColor.RED."""

    def __add__(self, other):
        if isinstance(other, (StrEnum, str)):
            return f"{self.value} {other}"
        return NotImplemented

    def __radd__(self, other):
        if isinstance(other, str):
            return f"{other} {self.value}"
        return NotImplemented


class TextStyle(SpacedStrEnum):
    BOLD = "bold"


class RichColor(SpacedStrEnum):
    RED = "red"
    MAGENTA = "magenta"
    CYAN = "cyan"
    BRIGHT_GREEN = "bright_green"
