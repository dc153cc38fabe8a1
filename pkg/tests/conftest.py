import pytest
from fastapi.testclient import TestClient

from gadstudio.access import CacheIndex, DatasetClient, create_dataset_app, mini_ocean

ACCEPTANCE_RESULTS = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_RESULTS:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def small_ocean():
    # a reduced grid keeps fetch-heavy tests quick; fields match mini-ocean
    return mini_ocean(dims=(32, 32, 16), timesteps=24, stride_hours=24.0)


@pytest.fixture()
def dataset_app(small_ocean):
    return create_dataset_app({small_ocean.name: small_ocean})


@pytest.fixture()
def dataset_client(dataset_app):
    http = TestClient(dataset_app)
    return DatasetClient(http=http, backoff_base=0.001)


@pytest.fixture()
def cache(tmp_path):
    return CacheIndex(tmp_path / "cache")
