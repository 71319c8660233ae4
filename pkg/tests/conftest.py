import numpy as np
import pytest

from levyrep import (
    BrownianModel,
    MarketSpec,
    MertonModel,
    NIGModel,
    QuadratureGrid,
    VGModel,
)


@pytest.fixture(scope="session")
def merton():
    return MertonModel(x0=0.0, mu=-0.1, sigma=0.2, gamma=1.0, m=-0.1, delta=0.3)


@pytest.fixture(scope="session")
def vg():
    return VGModel(x0=0.0, mu=-0.05, sigma=0.0, C=1.0, G=5.0, M=5.0)


@pytest.fixture(scope="session")
def nig():
    return NIGModel(x0=0.0, mu=-0.25, sigma=0.0, a=3.0, b=-1.0, delta=1.0)


@pytest.fixture(scope="session")
def brownian():
    return BrownianModel(x0=0.0, mu=-0.04, sigma=0.2)


@pytest.fixture(scope="session")
def grid():
    return QuadratureGrid(alpha=1.0)


@pytest.fixture(scope="session")
def merton_market(merton):
    return MarketSpec(r=0.02, T=1.0, K=1.0, model=merton)


@pytest.fixture(scope="session")
def brownian_market(brownian):
    return MarketSpec(r=0.0, T=1.0, K=1.0, model=brownian)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20260823)
