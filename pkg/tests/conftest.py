import os
from fractions import Fraction

import pytest

from config.logging import setup_logging
from families import Family, make_map
from numerics import PrecisionContext


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running constructions (KNEADLAB_RUN_SLOW=1)")


def pytest_collection_modifyitems(config, items):
    """Долгие конструкции запускаются только с KNEADLAB_RUN_SLOW=1"""
    if os.getenv("KNEADLAB_RUN_SLOW") == "1":
        return
    skip_slow = pytest.mark.skip(reason="Slow tests require KNEADLAB_RUN_SLOW=1")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture(scope="session", autouse=True)
def quiet_logging():
    """Логирование один раз на сессию, без JSON-файла"""
    setup_logging(level="WARNING", enable_json=False)


@pytest.fixture
def ctx():
    return PrecisionContext(bits=256)


@pytest.fixture
def cubic0():
    return make_map(Family.CUBIC, 0)


@pytest.fixture
def deg7_0():
    return make_map(Family.DEG7, 0)


@pytest.fixture
def cubic_top():
    return make_map(Family.CUBIC, Fraction(1, 64))
