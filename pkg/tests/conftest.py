import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import settings

from qsl2r import QContext, build_coideal

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

GRID = [(q, a) for q in (0.3, 0.5, 0.8) for a in (0.5, 1.0, 1.7)]


@pytest.fixture
def ctx():
    return QContext(q=0.5, a=1.0, tol=1e-9, max_spin=3)


@pytest.fixture
def cd(ctx):
    return build_coideal(ctx)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def rand_vec(rng, d):
    return rng.normal(size=d) + 1j * rng.normal(size=d)


def rand_mat(rng, d):
    return rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[key])
