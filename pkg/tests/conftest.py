import os
import sys

import numpy as np
import pytest

from symharm.basis import get_context
from symharm.groups import build_group
from symharm.irreps import load_irreps

EXTENDED_ENV = "SYMHARM_EXTENDED"


def pytest_addoption(parser):
    parser.addoption(
        "--extended",
        action="store_true",
        default=False,
        help="run the degree sweeps up to l = 45 instead of the default 15",
    )


@pytest.fixture(scope="session")
def extended(request) -> bool:
    return bool(request.config.getoption("--extended") or os.environ.get(EXTENDED_ENV))


@pytest.fixture(scope="session")
def lmax_sweep(extended) -> int:
    return 45 if extended else 15


@pytest.fixture(params=["T", "O", "I"])
def group_name(request):
    return request.param


@pytest.fixture
def group(group_name):
    return build_group(group_name)


@pytest.fixture
def irreps(group_name):
    return load_irreps(group_name)


@pytest.fixture
def ctx(group_name):
    return get_context(group_name)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def random_rotation(rng) -> np.ndarray:
    Q, R = np.linalg.qr(rng.standard_normal((3, 3)))
    Q = Q * np.sign(np.diag(R))
    if np.linalg.det(Q) < 0:
        Q[:, 0] = -Q[:, 0]
    return Q


def random_angles(rng, n):
    v = rng.standard_normal((n, 3))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    return np.arccos(v[:, 2]), np.mod(np.arctan2(v[:, 1], v[:, 0]), 2 * np.pi)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
