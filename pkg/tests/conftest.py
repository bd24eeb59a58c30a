import math
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from hyperlab import models as M  # noqa: E402


def energy_zoo():
    """Every strain-energy model of the library with representative parameters."""
    return [
        M.hencky(1.0, 1.0),
        M.exponentiated_hencky(1.0, 1.0, 0.5, 0.25),
        M.uniaxial_family(0.0),
        M.uniaxial_family(0.25),
        M.uniaxial_family(0.5),
        M.uniaxial_family(0.75),
        M.shear_family(0.5, 1.0),
        M.shear_family(0.25, 0.25),
        M.chain_limited_line(2.0, 4.0, 0.25),
        M.chain_limited_area(1.0, 2 * math.sqrt(3), 1.0),
        M.chain_limited_volume(27 / 4),
        M.monomial(1.0, 1.0, 1.0),
        M.ball_counterexample(),
    ]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
