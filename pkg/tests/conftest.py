import math

import numpy as np
import pytest

from hypersearch.models.problem import ProblemSpec
from hypersearch.models.scan import ScanOptions
from hypersearch.services.spectral_service import decompose


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def example_spec() -> ProblemSpec:
    return ProblemSpec(n=6, solutions=(3, 6))


@pytest.fixture(scope="session")
def example_decomposition(example_spec):
    # 6차원, 해 {3, 6}, 격자 pi/10000
    options = ScanOptions(theta_step=math.pi / 10000, t_max=10000)
    return decompose(example_spec, options)
