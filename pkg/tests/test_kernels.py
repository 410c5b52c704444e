import importlib
import os
import random
import subprocess
import sys
from fractions import Fraction

import pytest

from derivedmw import _kernels_py
from derivedmw._backend import BACKEND

try:
    from derivedmw import _kernels as _kernels_c
except ImportError:  # extension not built
    _kernels_c = None

BACKENDS = [pytest.param(_kernels_py, id="python")]
BACKENDS.append(pytest.param(_kernels_c, id="cython",
                             marks=pytest.mark.skipif(_kernels_c is None, reason="extension not built")))


def _random_terms(rng, n, size, pos_range=1):
    out = {}
    for _ in range(size):
        m = (rng.randrange(pos_range),) + tuple(rng.randint(0, 3) for _ in range(n))
        out[m] = Fraction(rng.randint(-5, 5) or 1, rng.randint(1, 3))
    return out


@pytest.mark.parametrize("k", BACKENDS)
@pytest.mark.parametrize("order,block", [(0, 0), (1, 0), (2, 1), (2, 2)])
def test_order_is_total_and_multiplicative(k, order, block):
    rng = random.Random(order * 10 + block)
    for _ in range(300):
        a = tuple(rng.randint(0, 3) for _ in range(3))
        b = tuple(rng.randint(0, 3) for _ in range(3))
        c = tuple(rng.randint(0, 2) for _ in range(3))
        s = k.exps_cmp(a, b, order, block)
        assert s == -k.exps_cmp(b, a, order, block)
        assert (s == 0) == (a == b)
        ac = tuple(x + y for x, y in zip(a, c))
        bc = tuple(x + y for x, y in zip(b, c))
        assert k.exps_cmp(ac, bc, order, block) == s


@pytest.mark.parametrize("k", BACKENDS)
def test_degrevlex_examples(k):
    # x > y > z; degrevlex: x*z < y^2
    assert k.exps_cmp((1, 0, 1), (0, 2, 0), 0, 0) < 0
    assert k.exps_cmp((1, 0, 1), (0, 2, 0), 1, 0) > 0
    assert k.exps_cmp((0, 0, 3), (1, 0, 0), 0, 0) > 0


@pytest.mark.parametrize("k", BACKENDS)
def test_position_over_term(k):
    assert k.mono_cmp((0, 0, 0), (1, 5, 5), 0, 0) > 0
    assert k.mono_cmp((1, 2, 0), (1, 1, 0), 0, 0) > 0


def test_backends_agree_on_products_and_reduction():
    if _kernels_c is None:
        pytest.skip("extension not built")
    rng = random.Random(7)
    for _ in range(50):
        a = {m[1:]: c for m, c in _random_terms(rng, 3, 4).items()}
        b = {m[1:]: c for m, c in _random_terms(rng, 3, 4).items()}
        assert _kernels_py.poly_mul(a, b) == _kernels_c.poly_mul(a, b)
        f = _random_terms(rng, 2, 6, pos_range=2)
        basis = []
        for _ in range(3):
            g = _random_terms(rng, 2, 3, pos_range=2)
            lead = _kernels_py.leading(g, 0, 0)
            c = g[lead]
            g = {m: v / c for m, v in g.items()}
            basis.append((lead, g))
        assert _kernels_py.normal_form(f, basis, 0, 0) == _kernels_c.normal_form(f, basis, 0, 0)


def test_pure_python_fallback_subprocess():
    env = dict(os.environ, DERIVEDMW_PURE_PYTHON="1")
    code = ("from derivedmw._backend import BACKEND; from derivedmw.groebner import buchberger;"
            "from derivedmw.polycore import PolyRing; R=PolyRing(['q','p']); q,p=R.gens;"
            "print(BACKEND, buchberger([q**2-p, p**2-q], 'lex').to_strings())")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python ['q - p^2', 'p^4 - p']"


def test_backend_is_reported():
    assert BACKEND in ("python", "cython")
