from __future__ import annotations
from typing import TYPE_CHECKING, Any
if TYPE_CHECKING:
    from types import TracebackType
    from cutoff_kit.config import CutoffKitConfig

import copy
import sys
import logging


_REGISTERED_EXCEPTHOOK_LOGGERS: set[str] = set()


def clear_logging_handlers(prefix: str = ''):
    '''Close and remove the handlers of every logger whose name starts with prefix.'''
    for logger_name in list(logging.Logger.manager.loggerDict):
        if prefix and not logger_name.startswith(prefix):
            continue
        logger = logging.getLogger(logger_name)
        for handler in logger.handlers[:]:
            handler.close()
            logger.removeHandler(handler)


def setup_exception_logging(logger_name: str | None = None):
    '''Route uncaught exceptions raised inside a registered package to that package's logger.'''
    if logger_name:
        _REGISTERED_EXCEPTHOOK_LOGGERS.add(logger_name)

    def _get_logger_from_traceback(tb: TracebackType | None) -> logging.Logger:
        while tb is not None:
            module_name = tb.tb_frame.f_globals.get('__name__', '')
            for registered in _REGISTERED_EXCEPTHOOK_LOGGERS:
                if module_name == registered or module_name.startswith(f'{registered}.'):
                    return logging.getLogger(registered)
            tb = tb.tb_next
        return logging.getLogger()

    def _custom_excepthook(exception_class: type[BaseException], exception: BaseException, traceback: TracebackType | None):
        logger = _get_logger_from_traceback(traceback)
        logger.error('Uncaught exception:', exc_info=(exception_class, exception, traceback))

    if not getattr(sys, '_cutoff_kit_excepthook_installed', False):
        sys.excepthook = _custom_excepthook
        sys._cutoff_kit_excepthook_installed = True  # pyright: ignore[reportAttributeAccessIssue]


def enable_debug_logging(logging_config: dict) -> dict:
    '''Return a copy of logging_config with every logger and handler at DEBUG.'''
    result = copy.deepcopy(logging_config)
    for section in ('loggers', 'handlers'):
        for entry in result.get(section, {}).values():
            if isinstance(entry, dict):
                entry['level'] = 'DEBUG'
    if isinstance(result.get('root'), dict):
        result['root']['level'] = 'DEBUG'
    return result


def configure_logging(
    config: CutoffKitConfig,
    overrides: dict[str, Any] | None = None,
    debug: bool = False,
) -> dict[str, Any]:
    '''Load the user's logging.yml and merge overrides on top.

    Raises:
        FileNotFoundError: if logging.yml is missing from the config dir.
    '''
    from cutoff_kit.utils import deep_merge
    from cutoff_kit.utils.yaml import load

    base = load(config.logging_config_file_path)
    if not isinstance(base, dict):
        raise FileNotFoundError(f"Logging config file {config.logging_config_file_path} not found")
    merged = deep_merge(base, overrides or {})
    return enable_debug_logging(merged) if debug else merged


def setup_logging(
    config: CutoffKitConfig,
    overrides: dict[str, Any] | None = None,
    debug: bool = False,
    reset: bool = True,
) -> dict[str, Any]:
    '''Configure the cutoff_kit logger hierarchy and return the applied config.'''
    from cutoff_kit.logging.configurator import LoggingDictConfigurator

    project_name = config._paths.project_name
    if reset:
        clear_logging_handlers(prefix=project_name)

    log_path = config.log_path
    log_path.mkdir(parents=True, exist_ok=True)
    logging_config = configure_logging(config, overrides=overrides, debug=debug)
    LoggingDictConfigurator.create(log_path=log_path, logging_config=logging_config, lazy=True).configure()
    setup_exception_logging(logger_name=project_name)
    return logging_config
