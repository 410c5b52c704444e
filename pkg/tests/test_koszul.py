import itertools
from math import comb

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from derivedmw.errors import ShapeError
from derivedmw.groebner import quotient_presentation
from derivedmw.koszul import (build_koszul, classical_truncation, codimension, codimension_criterion,
                              euler_characteristic, is_complete_intersection, tor)
from derivedmw.polycore import PolyMatrix, PolyRing

from conftest import sl2_space

R2 = PolyRing(["q", "p"])
q, p = R2.gens
R3 = PolyRing(["x", "y", "z"])


def test_build_examples():
    K = build_koszul(R2, [q * p], [0])
    assert K.complex.ranks == [1, 1]
    assert K.complex.differentials[0] == PolyMatrix(R2, [[q * p]])
    Z = build_koszul(R2, [0], [0])
    assert Z.complex.differentials[0].is_zero()
    H = sl2_space()
    assert build_koszul(H.ring, H.moment, [0, 0, 0]).complex.ranks == [1, 3, 3, 1]


def test_build_rejects_mismatch():
    with pytest.raises(ShapeError):
        build_koszul(R2, [q, p], [0])
    with pytest.raises(ShapeError):
        build_koszul(R2, [], [])


def test_tor_examples():
    assert tor(build_koszul(R2, [q * p], [0]), 1).is_zero()
    Z = build_koszul(R2, [0], [0])
    assert tor(Z, 1).graded_dimensions(2) == [1, 2, 3]
    H = sl2_space()
    K = build_koszul(H.ring, H.moment, [0, 0, 0])
    assert not tor(K, 1).is_zero()
    # oracle: three equations cutting out codimension 2
    assert codimension(K) == 2


def test_complete_intersection_examples():
    assert is_complete_intersection(build_koszul(R2, [q * p], [0]))
    assert not is_complete_intersection(build_koszul(R2, [0], [0]))
    H = sl2_space()
    K = build_koszul(H.ring, H.moment, [0, 0, 0])
    assert not is_complete_intersection(K)
    assert not codimension_criterion(K)


def test_sl2_graded_tor():
    H = sl2_space()
    K = build_koszul(H.ring, H.moment, [0, 0, 0])
    assert tor(K, 0).graded_dimensions(6) == [1, 4, 7, 8, 10, 12, 14]
    assert tor(K, 1).graded_dimensions(6) == [0, 0, 0, 0, 2, 4, 6]


def test_sl2_euler_identity():
    # Σ(-1)^i HS(Tor_i) = HS(R)·(1 - t^2)^3 = (1 + t)^3 / (1 - t)
    H = sl2_space()
    K = build_koszul(H.ring, H.moment, [0, 0, 0])
    bound = 7
    dims = [tor(K, i).graded_dimensions(bound) for i in range(4)]
    alt = [sum((-1) ** i * dims[i][d] for i in range(4)) for d in range(bound + 1)]
    t = sympy.symbols("t")
    series = sympy.series((1 + t) ** 3 / (1 - t), t, 0, bound + 1).removeO()
    assert alt == [int(series.coeff(t, d)) for d in range(bound + 1)]


def hilbert_oracle(polys, ring, bound):
    """Standard monomials of a sympy grevlex basis, counted by degree."""
    syms = sympy.symbols(ring.names)
    loc = dict(zip(ring.names, syms))
    G = sympy.groebner([sympy.sympify(f.to_str().replace("^", "**"), locals=loc) for f in polys], *syms,
                       order="grevlex")
    leads = [sympy.Poly(g, *syms).monoms(order="grevlex")[0] for g in G.exprs]
    out = []
    for d in range(bound + 1):
        count = 0
        for e in itertools.product(range(d + 1), repeat=ring.nvars):
            if sum(e) == d and not any(all(a >= b for a, b in zip(e, L)) for L in leads):
                count += 1
        out.append(count)
    return out


homog = st.sampled_from([
    R3.gens[0] * R3.gens[1], R3.gens[0] ** 2, R3.gens[1] ** 2 - R3.gens[2] ** 2, R3.gens[0] * R3.gens[2],
    R3.gens[0] + R3.gens[1], R3.gens[2], R3.gens[0] ** 2 * R3.gens[1] - R3.gens[2] ** 3,
    R3.gens[1] * R3.gens[2] + R3.gens[0] ** 2,
])


@settings(max_examples=25, deadline=None)
@given(st.lists(homog, min_size=1, max_size=3))
def test_tor0_against_hilbert_oracle(J):
    K = build_koszul(R3, J, [0] * len(J))
    assert tor(K, 0).graded_dimensions(4) == hilbert_oracle(J, R3, 4)


@settings(max_examples=25, deadline=None)
@given(st.lists(homog, min_size=1, max_size=3))
def test_graded_euler_characteristic(J):
    # Σ(-1)^i HS(Tor_i) equals HS(R)·Π(1 - t^deg J_i)
    K = build_koszul(R3, J, [0] * len(J))
    bound = 5
    dims = [tor(K, i).graded_dimensions(bound) for i in range(K.r + 1)]
    alt = [sum((-1) ** i * dims[i][d] for i in range(K.r + 1)) for d in range(bound + 1)]
    t = sympy.symbols("t")
    num = sympy.prod([1 - t ** f.degree() for f in J])
    series = sympy.series(num / (1 - t) ** 3, t, 0, bound + 1).removeO()
    assert alt == [int(series.coeff(t, d)) for d in range(bound + 1)]


level = st.sampled_from([0, 1, -2])


@settings(max_examples=25, deadline=None)
@given(st.lists(st.tuples(homog, level), min_size=1, max_size=3))
def test_complete_intersection_matches_codimension(data):
    J = [f for f, _ in data]
    mu = [c for _, c in data]
    K = build_koszul(R3, J, mu)
    assert is_complete_intersection(K) == codimension_criterion(K)


def test_euler_characteristic_and_ranks():
    for r in range(1, 5):
        K = build_koszul(R3, [R3.gens[0]] * r, [0] * r)
        assert K.complex.ranks == [comb(r, k) for k in range(r, -1, -1)]
        assert euler_characteristic(K) == 0


def test_classical_truncation_includes_level():
    K = build_koszul(R2, [q * p], [1])
    assert classical_truncation(K).to_strings() == ["q*p - 1"]
    assert codimension(K) == 1
    assert codimension(build_koszul(R2, [q, q - 1], [0, 0])) is None
    assert is_complete_intersection(build_koszul(R2, [q, q - 1], [0, 0]))


def test_base_relations():
    # q*p on the parabola q = p^2 is the regular element p^3
    K = build_koszul(R2, [q * p], [0], base_relations=[q - p ** 2])
    assert tor(K, 1).is_zero()
    assert codimension(K) == 1
    base = quotient_presentation(None, [[q - p ** 2], [q * p]], rank=1, ring=R2, shifts=[0])
    assert tor(K, 0).is_zero() == base.is_zero()
