import json
import os

import pytest
from hypothesis import settings

settings.register_profile("default", deadline=None)
settings.load_profile("default")

B_EXAMPLE = ((0, -1), (4, 0))
MARKOV = ((0, 2, -2), (-2, 0, 2), (2, -2, 0))


@pytest.fixture
def matrix_file(tmp_path):
    def make(B, name="B.json"):
        path = tmp_path / name
        path.write_text(json.dumps({"n": len(B), "B": [list(r) for r in B]}))
        return str(path)
    return make


@pytest.fixture
def no_numba(monkeypatch):
    monkeypatch.setenv("GFAN_DISABLE_NUMBA", "1")
    return os.environ
