import pytest

from finicat.workspace import load_corpus


@pytest.fixture(scope="session")
def ws():
    return load_corpus()


@pytest.fixture(scope="session")
def opens(ws):
    return ws.categories["opens"]


@pytest.fixture(scope="session")
def site(ws):
    return ws.sites["two-point-site"].topology
