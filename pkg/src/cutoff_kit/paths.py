import os
from pathlib import Path

# User dirs live under ~/.cutoff_kit/ unless CUTOFF_KIT_HOME points elsewhere.
HOME_ENV_VAR = 'CUTOFF_KIT_HOME'


def _detect_project_layout(source_file: Path) -> tuple[str, Path, Path | None]:
    """
    Return (package_name, package_path, project_root) for a file inside the package.

    project_root is the nearest ancestor holding a pyproject.toml (development
    checkout), or None for an installed package in site-packages.
    """
    package_path = source_file.resolve().parent
    project_root = None
    current = package_path
    for _ in range(10):
        current = current.parent
        if (current / 'pyproject.toml').exists():
            project_root = current
            break
    return package_path.name, package_path, project_root


class ProjectPaths:
    """Package location plus the per-user log/cache/config directories."""

    def __init__(self, project_name: str | None = None, source_file: str | Path | None = None):
        source = Path(source_file) if source_file is not None else Path(__file__)
        detected_name, self.package_path, self.project_root = _detect_project_layout(source)
        self.project_name = project_name or detected_name

        override = os.getenv(HOME_ENV_VAR)
        self.user_root = Path(override) if override else Path.home() / f'.{self.project_name}'
        self.log_path = self.user_root / 'logs'
        self.cache_path = self.user_root / 'cache'
        self.config_path = self.user_root / 'config'

    def __repr__(self):
        return f"{self.__class__.__name__}(project_name='{self.project_name}', user_root='{self.user_root}')"
