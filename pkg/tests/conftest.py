import sys
from pathlib import Path

import pytest

HERE = Path(__file__).parent
sys.path.insert(0, str(HERE))

ROOT = HERE.parent
SCENARIOS = ROOT / "scenarios"
FIXTURES = HERE / "fixtures"


@pytest.fixture
def scenarios_dir():
    return SCENARIOS
