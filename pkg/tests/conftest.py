import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def maxima29(fixtures_dir):
    from bgumbel import read_series_csv

    return read_series_csv(fixtures_dir / "maxima29.csv")


@pytest.fixture(scope="session")
def bimodal500(fixtures_dir):
    from bgumbel import read_series_csv

    return read_series_csv(fixtures_dir / "bimodal500.csv")


@pytest.fixture(scope="session")
def series1774(fixtures_dir):
    from bgumbel import read_series_csv

    return read_series_csv(fixtures_dir / "series1774.csv")
