import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile(
    "default", deadline=None, suppress_health_check=[HealthCheck.too_slow], derandomize=True)
settings.load_profile("default")

DATA = Path(__file__).resolve().parents[1] / "src" / "pancake" / "data"


@pytest.fixture
def data_dir() -> Path:
    return DATA
