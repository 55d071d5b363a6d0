import sys
sys.path.append('src')

import pytest

from kancalc.components.corpus import standard_categories


@pytest.fixture(scope="session")
def cats():
    return standard_categories()


@pytest.fixture(scope="session")
def P(cats):
    return cats["P"]


@pytest.fixture(scope="session")
def arrow(cats):
    return cats["[1]"]


@pytest.fixture(scope="session")
def disc2(cats):
    return cats["disc2"]


@pytest.fixture
def fixtures_dir():
    from pathlib import Path
    return Path(__file__).parent / "fixtures"


@pytest.fixture(autouse=True)
def _no_budget_env(monkeypatch):
    monkeypatch.delenv("KANCALC_BUDGET", raising=False)
