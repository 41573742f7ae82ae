from __future__ import annotations
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from rich.progress import TaskID

import os

from rich.progress import (
    Progress,
    SpinnerColumn,
    TextColumn,
    BarColumn,
    MofNCompleteColumn,
    TimeElapsedColumn,
)

from cutoff_kit.style import RichColor, TextStyle, err_console


DISABLE_ENV_VAR = 'CUTOFF_KIT_DISABLE_PROGRESS_BAR'


def _should_disable_progress() -> bool:
    return os.getenv(DISABLE_ENV_VAR, '').lower() in ('1', 'true', 'yes')


class ProgressBar:
    """Chunk-level progress for ensemble runs.

    Renders on stderr through the shared rich console (the rich log handler
    uses the same console, so records print above the bar). Inside notebooks
    it falls back to tqdm. Setting CUTOFF_KIT_DISABLE_PROGRESS_BAR=1 turns every
    bar off.
    """

    def __init__(self, total: int | None = None, description: str = "Simulating", *, disable: bool = False):
        from cutoff_kit.utils import get_notebook_type

        self._total = total
        self._description = description
        self._in_notebook = get_notebook_type() is not None
        self._disable = disable or _should_disable_progress()
        self._tqdm_bar = None
        self._progress = Progress(
            SpinnerColumn(style=TextStyle.BOLD + RichColor.MAGENTA),
            TextColumn(f"[{TextStyle.BOLD + RichColor.CYAN}]{{task.description}}"),
            BarColumn(complete_style=RichColor.BRIGHT_GREEN, finished_style=RichColor.BRIGHT_GREEN),
            MofNCompleteColumn(),
            TimeElapsedColumn(),
            console=err_console,
            transient=True,
            disable=self._disable,
        )
        self._task_id: TaskID | None = None

    def __enter__(self) -> ProgressBar:
        if self._in_notebook:
            from tqdm.auto import tqdm
            self._tqdm_bar = tqdm(total=self._total, desc=self._description, disable=self._disable)
            return self
        self._progress.__enter__()
        self._task_id = self._progress.add_task(self._description, total=self._total)
        return self

    def __exit__(self, *args) -> None:
        if self._in_notebook:
            if self._tqdm_bar is not None:
                self._tqdm_bar.close()
            return
        self._progress.__exit__(*args)

    def advance(self, amount: int = 1) -> None:
        if self._tqdm_bar is not None:
            self._tqdm_bar.update(amount)
        elif self._task_id is not None:
            self._progress.update(self._task_id, advance=amount)
