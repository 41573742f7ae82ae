"""Atomic CSV/JSON writers shared by the CLI and the library serializers."""
from __future__ import annotations

import contextlib
import dataclasses
import json
import math
import os
import tempfile
from enum import Enum
from pathlib import Path
from typing import Any

import numpy as np
import pandas as pd


__all__ = ['frame_to_csv', 'to_jsonable', 'json_dumps', 'write_text_atomic', 'write_csv', 'write_json']


CSV_FLOAT_FORMAT = '%.17g'


def frame_to_csv(frame: pd.DataFrame) -> str:
    """Header row, no index, LF endings, 17 significant digits."""
    return frame.to_csv(index=False, float_format=CSV_FLOAT_FORMAT, lineterminator='\n')


def to_jsonable(obj: Any) -> Any:
    """Convert numpy/pandas/dataclass values to plain JSON types; non-finite floats become null."""
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(key): to_jsonable(value) for key, value in obj.items()}
    if isinstance(obj, pd.DataFrame):
        return [to_jsonable(row) for row in obj.to_dict(orient='records')]
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(value) for value in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, Path):
        return str(obj)
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        value = float(obj)
        return value if math.isfinite(value) else None
    return obj


def json_dumps(obj: Any) -> str:
    # float repr is the shortest string that round-trips, so equal inputs give equal bytes
    return json.dumps(to_jsonable(obj), indent=2, sort_keys=True) + '\n'


def write_text_atomic(text: str, path: str | Path) -> Path:
    """Write to a temp file next to `path`, then rename over it; no partial file survives a failure."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=f'.{path.name}.', suffix='.tmp')
    try:
        with os.fdopen(fd, 'w', encoding='utf-8', newline='') as f:
            f.write(text)
        os.replace(tmp_name, path)
    except BaseException:
        with contextlib.suppress(FileNotFoundError):
            os.unlink(tmp_name)
        raise
    return path


def write_csv(frame: pd.DataFrame, path: str | Path) -> Path:
    return write_text_atomic(frame_to_csv(frame), path)


def write_json(obj: Any, path: str | Path) -> Path:
    return write_text_atomic(json_dumps(obj), path)
