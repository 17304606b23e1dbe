import numpy as np
import pytest

import gabwin as gw


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(scope="session")
def lat432():
    return gw.derive_lattice(432, 18, 18)


@pytest.fixture(scope="session")
def gauss432():
    return gw.gaussian_window(432).astype(complex)


@pytest.fixture(scope="session")
def ref_tight432(lat432, gauss432):
    return gw.reference_tight(gauss432, lat432)


@pytest.fixture(scope="session")
def ref_dual432(lat432, gauss432):
    return gw.reference_dual(gauss432, lat432)


@pytest.fixture(scope="session")
def lat600():
    return gw.derive_lattice(600, 20, 20)


@pytest.fixture(scope="session")
def monster600(lat600):
    return gw.monster_window(lat600, 6.0).astype(complex)


@pytest.fixture(scope="session")
def lat144():
    # oversampled non-square lattice small enough for literal-sum oracles
    return gw.derive_lattice(144, 12, 9)
