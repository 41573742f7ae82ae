from __future__ import annotations

import os
from pathlib import Path

from cutoff_kit.enums import NotebookType


__all__ = [
    'OUTPUT_DIR_ENV_VAR',
    'load_env_file',
    'resolve_output_path',
    'get_notebook_type',
    'deep_merge',
]


OUTPUT_DIR_ENV_VAR = 'CUTOFF_KIT_OUTPUT_DIR'


def load_env_file(env: str = '', verbose: bool = False) -> str | None:
    """
    Load `.env` (or `.env.{env}`) from the working directory upwards.

    Returns the loaded file path, or None if no file was found.
    """
    from dotenv import find_dotenv, load_dotenv

    filename = f'.env.{env.lower()}' if env else '.env'
    env_file_path = find_dotenv(filename=filename, usecwd=True, raise_error_if_not_found=False)
    if env_file_path:
        load_dotenv(env_file_path, override=False)
        if verbose:
            print(f'Loaded {filename} from {env_file_path}')
        return env_file_path
    if verbose:
        print(f'{filename} not found')
    return None


def resolve_output_path(path: str | Path) -> Path:
    """Anchor a relative output path at $CUTOFF_KIT_OUTPUT_DIR when it is set."""
    path = Path(path)
    if path.is_absolute():
        return path
    base = os.getenv(OUTPUT_DIR_ENV_VAR)
    return Path(base) / path if base else path


def get_notebook_type() -> NotebookType | None:
    import importlib.util

    if importlib.util.find_spec("marimo") is not None:
        try:
            import marimo as mo
            if mo.running_in_notebook():
                return NotebookType.marimo
        except (ImportError, AttributeError):
            pass
    if any(key.startswith(('JUPYTER_', 'JPY_')) for key in os.environ):
        return NotebookType.jupyter
    return None


def deep_merge(base: dict, override: dict) -> dict:
    """
    Recursively merge override into base and return a new dict.

    Nested dicts merge, lists concatenate, anything else is replaced by the
    override value.

    Example:
        >>> deep_merge({"loggers": {"cutoff_kit": {"level": "INFO"}}}, {"loggers": {"cutoff_kit": {"level": "DEBUG"}}})
        {'loggers': {'cutoff_kit': {'level': 'DEBUG'}}}
    """
    if not isinstance(base, dict):
        raise TypeError(f"base must be a dict, got {type(base).__name__}")
    if not isinstance(override, dict):
        raise TypeError(f"override must be a dict, got {type(override).__name__}")

    result = base.copy()
    for key, override_value in override.items():
        base_value = result.get(key)
        if isinstance(base_value, dict) and isinstance(override_value, dict):
            result[key] = deep_merge(base_value, override_value)
        elif isinstance(base_value, list) and isinstance(override_value, list):
            result[key] = base_value + override_value
        else:
            result[key] = override_value
    return result
