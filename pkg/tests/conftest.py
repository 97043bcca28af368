import numpy as np
import pytest

from appellschur.quatlin import Quaternion


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_quaternion(rng, scale=1.0):
    return Quaternion(*(rng.standard_normal(4) * scale))


def random_point(rng, radius):
    """Uniform direction, radius scaled into [0, radius)."""
    v = rng.standard_normal(4)
    v = v / np.linalg.norm(v) * rng.uniform(0.0, radius)
    return Quaternion(*v)


def random_unit_imaginary(rng):
    v = rng.standard_normal(3)
    v = v / np.linalg.norm(v)
    return Quaternion(0.0, *v)
