import numpy as np
import pytest

from srgkit import TransferFunction

# reference plants used across the suite: one stable, one with a single
# right-half-plane pole
STABLE_NUM = (14.0, 8.0)
STABLE_DEN = (1.0, 13.0, 58.0, 96.0, 34.0, 4.2)
UNSTABLE_NUM = (14.0, 8.0)
UNSTABLE_DEN = (1.0, 13.0, 58.0, 96.0, 34.0, -4.0)

# reference controller configurations and their certified numbers
STABLE_CONFIG = {"kp": 0.0, "kr": 1.0, "separation": 0.021, "gain_bound": 47.6}
UNSTABLE_CONFIG = {"kp": 1.1, "kr": 1.0, "separation": 0.096, "gain_bound": 10.42}
DESIGN_CONFIG = {"kr": -1.0, "gamma_hat": 1.0, "kp_expected": 2.35}


@pytest.fixture(scope="session")
def stable_plant():
    return TransferFunction(STABLE_NUM, STABLE_DEN)


@pytest.fixture(scope="session")
def unstable_plant():
    return TransferFunction(UNSTABLE_NUM, UNSTABLE_DEN)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20260810)
