import itertools
import math
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from bpoly.bounds import moment_curve_points  # noqa: E402

CUBE = np.array(list(itertools.product([0.0, 1.0], repeat=3)))
# regular tetrahedron with edge 1 (alternate cube vertices scaled by 1/sqrt 2)
TETRA = np.array([[0, 0, 0], [1, 1, 0], [1, 0, 1], [0, 1, 1]], float) / math.sqrt(2)


@pytest.fixture
def cube():
    return CUBE.copy()


@pytest.fixture
def tetra():
    return TETRA.copy()


@pytest.fixture
def moment_6_3():
    return moment_curve_points(6, 3)


@pytest.fixture
def moment_7_4():
    return moment_curve_points(7, 4)


def random_rotation(d, rng, proper=True):
    q, rmat = np.linalg.qr(rng.normal(size=(d, d)))
    q = q * np.sign(np.diag(rmat))
    if proper and np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


CORPUS_DIR = Path(__file__).parent / "corpus"
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
