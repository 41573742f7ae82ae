"""File handler wrapper that creates its file on the first emitted record."""
from __future__ import annotations

import importlib
import logging
import threading
from pathlib import Path
from typing import Any


class LazyHandler(logging.Handler):
    """
    Defer building the wrapped handler until a record actually reaches it.

    A run that never logs above the configured level leaves no empty
    `cutoff_kit.log` behind. The target is built at most once even when
    ensemble worker threads log concurrently.
    """

    def __init__(
        self,
        filename: str | Path | None = None,
        target_class: str | None = None,
        target_kwargs: dict[str, Any] | None = None,
        level: int = logging.NOTSET,
        **kwargs,
    ):
        super().__init__(level=level)
        self._filename = filename
        self._target_class = target_class
        self._target_kwargs = dict(target_kwargs or {})
        self._target_handler: logging.Handler | None = None
        self._init_lock = threading.Lock()

    @property
    def is_materialized(self) -> bool:
        return self._target_handler is not None

    def _resolve_target_class(self) -> type[logging.Handler]:
        if not self._target_class:
            raise ValueError("target_class must be specified for LazyHandler")
        try:
            module_name, class_name = self._target_class.rsplit('.', 1)
            return getattr(importlib.import_module(module_name), class_name)
        except (ValueError, ImportError, AttributeError) as e:
            raise ValueError(f"Failed to import target handler class '{self._target_class}': {e}") from e

    def _ensure_target_handler(self) -> logging.Handler:
        if self._target_handler is not None:
            return self._target_handler
        with self._init_lock:
            # another thread may have built it while this one waited
            if self._target_handler is not None:
                return self._target_handler
            handler_class = self._resolve_target_class()
            args = (self._filename,) if self._filename is not None else ()
            try:
                target = handler_class(*args, **self._target_kwargs)
            except Exception as e:
                raise RuntimeError(f"Failed to instantiate handler {self._target_class}: {e}") from e
            if self.formatter:
                target.setFormatter(self.formatter)
            target.setLevel(self.level)
            for filter_obj in self.filters:
                target.addFilter(filter_obj)
            target.name = self.name
            self._target_handler = target
        return target

    def emit(self, record: logging.LogRecord) -> None:
        self._ensure_target_handler().emit(record)

    def setFormatter(self, fmt: logging.Formatter | None) -> None:
        super().setFormatter(fmt)
        if self._target_handler:
            self._target_handler.setFormatter(fmt)

    def addFilter(self, filter) -> None:
        super().addFilter(filter)
        if self._target_handler:
            self._target_handler.addFilter(filter)

    def removeFilter(self, filter) -> None:
        super().removeFilter(filter)
        if self._target_handler:
            self._target_handler.removeFilter(filter)

    def flush(self) -> None:
        if self._target_handler:
            self._target_handler.flush()

    def close(self) -> None:
        with self._init_lock:
            if self._target_handler:
                self._target_handler.close()
        super().close()
