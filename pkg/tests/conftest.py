import os

import pytest

GRAPHS = os.path.join(os.path.dirname(__file__), "..", "graphs")


@pytest.fixture(scope="session")
def graphs_dir() -> str:
    return os.path.abspath(GRAPHS)
