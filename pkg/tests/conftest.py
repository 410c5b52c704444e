import pytest

from derivedmw.hamspace import HamiltonianSpace, abelian, cotangent_lift, sl2
from derivedmw.polycore import PolyMatrix, PolyRing

SL2_MATRICES = [[[0, 1], [0, 0]], [[1, 0], [0, -1]], [[0, 0], [1, 0]]]


@pytest.fixture
def qp():
    R = PolyRing(["q", "p"])
    return R, R.gens[0], R.gens[1]


def gm_space(J=None, omega=None, action=None):
    R = PolyRing(["q", "p"])
    q, p = R.gens
    om = PolyMatrix(R, omega or [[0, -1], [1, 0]])
    return HamiltonianSpace(R, om, abelian(["t"]), [action or [q, -p]], [q * p if J is None else J(q, p)])


def gm11_space():
    return cotangent_lift([[[1, 0], [0, 1]]], abelian(["t"]))


def trivial_space():
    R = PolyRing(["q", "p"])
    return HamiltonianSpace(R, PolyMatrix(R, [[0, -1], [1, 0]]), abelian(["t"]), [[0, 0]], [0])


def sl2_space():
    return cotangent_lift(SL2_MATRICES, sl2())


@pytest.fixture
def gm():
    return gm_space()


@pytest.fixture
def sl2_lift():
    return sl2_space()
