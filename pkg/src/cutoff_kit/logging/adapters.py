from typing import Any

from logging import Logger, LoggerAdapter


class ExperimentLoggerAdapter(LoggerAdapter):
    """Prefix records with the experiment name and, when given, its root seed.

    Example:
        >>> logger = ExperimentLoggerAdapter(logging.getLogger("cutoff_kit.cli"), "epi-cutoff", seed=42)
        >>> logger.info("11 starts on the E_n grid")
        # -> "[epi-cutoff seed=42] 11 starts on the E_n grid"
    """
    def __init__(self, logger: Logger, experiment: str, seed: int | None = None):
        super().__init__(logger, {'experiment': experiment, 'seed': seed})
        self._prefix = f'[{experiment} seed={seed}]' if seed is not None else f'[{experiment}]'

    def process(self, msg: Any, kwargs: Any) -> tuple[Any, Any]:
        return f"{self._prefix} {msg}", kwargs
