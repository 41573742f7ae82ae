import pytest

from cutoff_kit.config import reset_config


@pytest.fixture
def mock_home(tmp_path, monkeypatch):
    """Redirect Path.home() to tmp_path so user dirs land under ~/.cutoff_kit/."""
    monkeypatch.setenv('HOME', str(tmp_path))
    monkeypatch.setenv('USERPROFILE', str(tmp_path))  # Windows equivalent
    monkeypatch.delenv('CUTOFF_KIT_HOME', raising=False)
    monkeypatch.delenv('CUTOFF_KIT_OUTPUT_DIR', raising=False)
    monkeypatch.setenv('CUTOFF_KIT_DISABLE_PROGRESS_BAR', '1')
    reset_config()
    yield tmp_path
    reset_config()
