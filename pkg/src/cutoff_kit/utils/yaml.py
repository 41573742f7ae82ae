"""
YAML helpers for the config and logging files.

Paths, StrEnums and numpy scalars are registered on the safe dumper so config
values round-trip without custom tags leaking into user-edited files.
"""
from enum import StrEnum
from pathlib import Path
from typing import Any, TypeAlias, cast

import numpy as np
import yaml


YAMLDocument: TypeAlias = str | int | float | bool | None | dict[str, Any] | list[Any]


def _represent_path(dumper: yaml.SafeDumper, data: Path) -> yaml.ScalarNode:
    return dumper.represent_str(str(data))


def _represent_np_integer(dumper: yaml.SafeDumper, data: np.integer) -> yaml.ScalarNode:
    return dumper.represent_int(int(data))


def _represent_np_floating(dumper: yaml.SafeDumper, data: np.floating) -> yaml.ScalarNode:
    return dumper.represent_float(float(data))


yaml.SafeDumper.add_multi_representer(StrEnum, yaml.representer.SafeRepresenter.represent_str)
yaml.SafeDumper.add_multi_representer(Path, _represent_path)  # pyright: ignore[reportArgumentType]
yaml.SafeDumper.add_multi_representer(np.integer, _represent_np_integer)  # pyright: ignore[reportArgumentType]
yaml.SafeDumper.add_multi_representer(np.floating, _represent_np_floating)  # pyright: ignore[reportArgumentType]


def load(file_path: str | Path) -> YAMLDocument | None:
    """Load a YAML file with the safe loader; a missing file gives None."""
    path = Path(file_path)
    if not path.exists():
        return None
    with open(path, 'r', encoding='utf-8') as f:
        return cast(YAMLDocument | None, yaml.safe_load(f))


def dump(data: object, file_path: str | Path, **kwargs: Any) -> None:
    kwargs.setdefault('default_flow_style', False)
    kwargs.setdefault('allow_unicode', True)
    kwargs.setdefault('sort_keys', False)
    path = Path(file_path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', encoding='utf-8') as f:
        yaml.safe_dump(data, f, **kwargs)
