from __future__ import annotations

import os
import shutil
import threading
from pathlib import Path

from packaging.version import Version

from cutoff_kit.errors import ConfigError
from cutoff_kit.paths import ProjectPaths
from cutoff_kit.style import cprint, TextStyle, RichColor
from cutoff_kit.utils.yaml import load, dump


__all__ = ['CutoffKitConfig', 'get_config', 'reset_config']


DEFAULT_MAX_JUMPS = 10**8
DEFAULT_CHUNK_SIZE = 2048


def _default_threads() -> int:
    return min(4, os.cpu_count() or 1)


class CutoffKitConfig:
    __version__ = "0.1.0"

    LOGGING_CONFIG_FILENAME = 'logging.yml'

    # files copied into the user config dir on first use, mapped to whether they are required
    DEFAULT_FILES: dict[str, bool] = {
        LOGGING_CONFIG_FILENAME: True,
    }

    def __init__(self, project_name: str = 'cutoff_kit', source_file: str | None = None):
        self._paths = ProjectPaths(project_name, source_file)
        self.config_path = self._paths.config_path
        self.config_filename = f'{self._paths.project_name.lower()}.yml'

        data = load(self.file_path)
        self._data: dict = data if isinstance(data, dict) else {}

        self._log_path = Path(self._data.get('log_path', self._paths.log_path))
        self._cache_path = Path(self._data.get('cache_path', self._paths.cache_path))
        self.threads = self._data.get('threads', _default_threads())
        self.max_jumps = self._data.get('max_jumps', DEFAULT_MAX_JUMPS)
        self.chunk_size = self._data.get('chunk_size', DEFAULT_CHUNK_SIZE)

        if '__version__' not in self._data:
            print(f"Config file {self.file_path} is corrupted or missing, resetting to default")
            self.save()
        else:
            existing_version = self._data['__version__']
            if existing_version != self.__version__:
                self._migrate(existing_data=self._data, existing_version=existing_version)

        self.ensure_dirs()
        self._initialize_default_files()

    @property
    def path(self) -> Path:
        return self.config_path

    @property
    def file_path(self) -> Path:
        return self.config_path / self.config_filename

    @property
    def filename(self) -> str:
        return self.config_filename

    @property
    def log_path(self) -> Path:
        return self._log_path

    @log_path.setter
    def log_path(self, value: Path):
        self._log_path = Path(value)

    @property
    def cache_path(self) -> Path:
        return self._cache_path

    @cache_path.setter
    def cache_path(self, value: Path):
        self._cache_path = Path(value)

    @property
    def threads(self) -> int:
        return self._threads

    @threads.setter
    def threads(self, value: int):
        self._threads = self._positive_int('threads', value)

    @property
    def max_jumps(self) -> int:
        return self._max_jumps

    @max_jumps.setter
    def max_jumps(self, value: int):
        self._max_jumps = self._positive_int('max_jumps', value)

    @property
    def chunk_size(self) -> int:
        return self._chunk_size

    @chunk_size.setter
    def chunk_size(self, value: int):
        self._chunk_size = self._positive_int('chunk_size', value)

    @property
    def logging_config_file_path(self) -> Path:
        return self.config_path / self.LOGGING_CONFIG_FILENAME

    @staticmethod
    def _positive_int(field: str, value) -> int:
        if isinstance(value, bool) or not isinstance(value, int) or value < 1:
            raise ConfigError(f'expected a positive integer, got {value!r}', field=field)
        return value

    def ensure_dirs(self, *paths: Path):
        """Ensure directory paths exist."""
        if not paths:
            paths = (self.config_path, self.log_path, self.cache_path)
        for path in paths:
            if not isinstance(path, Path):
                raise TypeError(f"Path {path} is not a Path object")
            path.mkdir(parents=True, exist_ok=True)

    def _initialize_default_files(self):
        """Copy default files from the package dir, or the project root in a dev checkout."""
        for filename, is_required in self.DEFAULT_FILES.items():
            dest = self.config_path / filename
            if dest.exists():
                continue
            src = self.default_file_path(filename)
            if src is None:
                if is_required:
                    raise FileNotFoundError(
                        f"{filename} not found in package directory {self._paths.package_path}"
                    )
                continue
            dest.parent.mkdir(parents=True, exist_ok=True)
            shutil.copy(src, dest)

    def default_file_path(self, filename: str) -> Path | None:
        src = self._paths.package_path / filename
        if not src.exists() and self._paths.project_root:
            src = self._paths.project_root / filename
        return src if src.exists() else None

    # NOTE: single source of truth for the fields persisted in the config file
    def to_dict(self) -> dict:
        return {
            '__version__': self.__version__,
            'log_path': self._log_path,
            'cache_path': self._cache_path,
            'threads': self._threads,
            'max_jumps': self._max_jumps,
            'chunk_size': self._chunk_size,
        }

    def _migrate(self, existing_data: dict, existing_version: str):
        from_version, to_version = existing_version, self.__version__
        if Version(to_version) <= Version(from_version):
            raise ConfigError(
                f'cannot migrate config from version {from_version} to {to_version}', field='__version__'
            )
        cprint(f"Migrating config from version {from_version} to {to_version}", style=TextStyle.BOLD + RichColor.RED)
        expected_keys = set(self.to_dict())
        existing_keys = set(existing_data)
        if new_keys := expected_keys - existing_keys:
            print(f"  Adding new fields: {sorted(new_keys)}")
        if removed_keys := existing_keys - expected_keys:
            print(f"  Removing obsolete fields: {sorted(removed_keys)}")
        self.save()

    def save(self):
        dump(self.to_dict(), self.file_path)


_config: CutoffKitConfig | None = None
_config_lock = threading.Lock()


def get_config() -> CutoffKitConfig:
    global _config
    if _config is None:
        with _config_lock:
            if _config is None:
                _config = CutoffKitConfig()
    return _config


def reset_config() -> None:
    """Drop the cached config so the next get_config() rereads the file."""
    global _config
    with _config_lock:
        _config = None
