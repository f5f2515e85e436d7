import pytest

from minkowski.config import PARTITION_CONFIG, QUADRATURE_CONFIG, SEARCH_CONFIG, SPECTRAL_CONFIG


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run slow certification tests")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture(autouse=True)
def restore_config():
    """Tests may tighten budgets; put them back afterwards"""
    saved = [(d, dict(d)) for d in (PARTITION_CONFIG, QUADRATURE_CONFIG, SEARCH_CONFIG, SPECTRAL_CONFIG)]
    yield
    for d, copy in saved:
        d.clear()
        d.update(copy)
