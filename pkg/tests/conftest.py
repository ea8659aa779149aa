import sys
from os.path import dirname, realpath
sys.path.append(dirname(dirname(realpath(__file__))))

import numpy as np
import pytest

from lib.calculus import ManifoldSpec
from manifolds import get_manifold


@pytest.fixture
def rng():
    return np.random.default_rng(0)


@pytest.fixture
def plane():
    return ManifoldSpec(['x', 'y'])


@pytest.fixture
def space():
    return ManifoldSpec(['x', 'y', 'z'])


@pytest.fixture
def torus():
    return ManifoldSpec(['theta1', 'theta2', 'theta3'], ['theta1', 'theta2', 'theta3'])


@pytest.fixture(scope='session')
def catalog():
    """
    Catalog manifolds built once per session; bundles are cached on the
    instances
    """
    built = {}

    def build(name, **kwargs):
        key = (name, tuple(sorted(kwargs.items())))
        if key not in built:
            built[key] = get_manifold(name, **kwargs)
        return built[key]

    return build
