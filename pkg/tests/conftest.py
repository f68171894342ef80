import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from affinebodies import BodySpec, make_body, zoo_bodies


@pytest.fixture(scope="session")
def zoo():
    return zoo_bodies()


@pytest.fixture(scope="session")
def zoo3d(zoo):
    return [b for b in zoo if b.dim == 3]


@pytest.fixture(scope="session")
def zoo2d(zoo):
    return [b for b in zoo if b.dim == 2]


@pytest.fixture(scope="session")
def ball():
    return make_body(BodySpec(3, "ellipsoid", (1.0, 1.0, 1.0), "ball"))


@pytest.fixture(scope="session")
def disk():
    return make_body(BodySpec(2, "ellipsoid", (1.0, 1.0), "disk"))


@pytest.fixture(scope="session")
def ell3(zoo):
    return next(b for b in zoo if b.label == "ell3")


@pytest.fixture(scope="session")
def prolate(zoo):
    return next(b for b in zoo if b.label == "prolate")


@pytest.fixture(scope="session")
def wobbly(zoo):
    return next(b for b in zoo if b.label == "wobbly")


@pytest.fixture(scope="session")
def ellipse(zoo):
    return next(b for b in zoo if b.label == "ellipse")


@pytest.fixture(scope="session")
def fmix(zoo):
    return next(b for b in zoo if b.label == "fmix")


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)


def random_orthonormal_basis(rng, n):
    Q, R = np.linalg.qr(rng.standard_normal((n, n)))
    return Q * np.sign(np.diag(R))


EZ = np.array([0.0, 0.0, 1.0])
EY2 = np.array([0.0, 1.0])
