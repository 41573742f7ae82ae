from __future__ import annotations
from typing import TYPE_CHECKING, Any
if TYPE_CHECKING:
    from pathlib import Path

import copy
import logging
from logging.config import DictConfigurator

from cutoff_kit.logging.handlers import LazyHandler


FILE_HANDLER_SUFFIX = 'file_handler'


class LoggingDictConfigurator(DictConfigurator):
    '''dictConfig for logging.yml, except that a handler named `*file_handler`
    becomes one file per logger listing it: {log_path}/{logger name}.log.

    With lazy=True those files are LazyHandlers, so a run that never logs to
    cutoff_kit.two_host creates no cutoff_kit.two_host.log.
    '''

    def __init__(self, logging_config: dict[str, Any], log_path: Path, lazy: bool = False):
        self.log_path = log_path
        self.lazy = lazy
        self.file_handler_specs = {
            name: dict(spec) for name, spec in logging_config.get('handlers', {}).items()
            if name.endswith(FILE_HANDLER_SUFFIX)
        }
        self.file_formatters = logging_config.get('formatters', {})
        config = copy.deepcopy(logging_config)
        for name in self.file_handler_specs:
            del config['handlers'][name]
        super().__init__(config)

    @classmethod
    def create(cls, log_path: Path, logging_config: dict[str, Any], lazy: bool = False) -> LoggingDictConfigurator:
        return cls(logging_config, log_path, lazy=lazy)

    def add_handlers(self, logger: logging.Logger, handlers: list[str]):
        for handler_name in handlers:
            try:
                if handler_name in self.file_handler_specs:
                    handler = self.file_handler_for(logger.name, handler_name)
                else:
                    handler = self.config['handlers'][handler_name]
            except Exception as e:
                raise ValueError(f'cannot attach handler {handler_name!r} to logger {logger.name!r}') from e
            logger.addHandler(handler)

    def file_handler_for(self, logger_name: str, handler_name: str) -> logging.Handler:
        spec = dict(self.file_handler_specs[handler_name])
        handler_class = spec.pop('class')
        level = spec.pop('level', None)
        formatter_name = spec.pop('formatter', 'file')
        filename = self.log_path / f'{logger_name}.log'

        if self.lazy:
            handler = LazyHandler(filename=filename, target_class=handler_class, target_kwargs=spec)
        else:
            handler = self.resolve(handler_class)(filename, **spec)
        handler.name = handler_name
        handler.setFormatter(self.configure_formatter(dict(self.file_formatters[formatter_name])))
        if level is not None:
            handler.setLevel(logging.getLevelName(level) if isinstance(level, str) else level)
        return handler
