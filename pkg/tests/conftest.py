import math

import numpy as np
import pytest

from geoion import gates, pulse
from geoion.model import IonParams


@pytest.fixture(scope="session")
def ion():
    return IonParams(10.0, 0)


@pytest.fixture(scope="session")
def table_1q():
    return pulse.default_table("one_qubit")


@pytest.fixture(scope="session")
def table_2q():
    return pulse.default_table("two_qubit", 48)


@pytest.fixture(scope="session")
def cps_report():
    return gates.verify_cps_identity(True)


def random_unitary(rng, dim):
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_hermitian(rng, dim):
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return 0.5 * (a + a.conj().T)


def detuning_for(rabi, theta):
    return 2 * rabi / math.tan(theta)
