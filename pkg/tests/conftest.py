import pytest

from qasym.presets import PRESETS, get_preset


@pytest.fixture(scope="session")
def presets():
    return {name: get_preset(name) for name in PRESETS}


@pytest.fixture(scope="session")
def ramanujan():
    return get_preset("ramanujan")


@pytest.fixture(scope="session")
def f0():
    return get_preset("f0")
