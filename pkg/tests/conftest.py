import numpy as np
import pytest

from ringforge.ring import RingParams
from ringforge.rpsf import rpsf_setup
from ringforge.ringsig import RpsfSigParams


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def small_params():
    """Fast trapdoor parameters used by most module tests."""
    return rpsf_setup(degree=8, modulus=769, kappa=4, tau=1.2)


@pytest.fixture(scope="session")
def small_sig_params(small_params):
    return RpsfSigParams(rpsf=small_params, salt_bits=128)


@pytest.fixture(scope="session")
def small_keys(small_params):
    from ringforge.rpsf import rpsf_keygen

    gen = np.random.default_rng(777)
    return [rpsf_keygen(small_params, gen) for _ in range(4)]
