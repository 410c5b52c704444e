import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from derivedmw.chaincx import dual_complex, homology, is_quasi_iso
from derivedmw.errors import CompositeError, PreconditionError, ThetaSquareError
from derivedmw.hamspace import HamiltonianSpace, validate_hamiltonian, validate_symplectic
from derivedmw.koszul import build_koszul, classical_truncation
from derivedmw.polycore import PolyMatrix
from derivedmw.reduction import (build_theta, level_set_complexes, reduced_tangent_complex, theta_defects,
                                 verify_theorem, virtual_dimension)

from conftest import gm11_space, gm_space, sl2_space, trivial_space

SPACES = {"gm": gm_space, "gm11": gm11_space, "trivial": trivial_space, "sl2": sl2_space}


def zero_level(H):
    return [0] * H.r


def test_level_set_examples(qp):
    R, q, p = qp
    L = level_set_complexes(gm_space(), [0])
    assert L.tangent.ranks == [2, 1]
    assert L.tangent.differentials[0] == PolyMatrix(R, [[p, q]])
    assert L.cotangent.differentials[0] == PolyMatrix(R, [[p], [q]])
    T = level_set_complexes(trivial_space(), [0])
    assert T.tangent.differentials[0].is_zero()
    assert homology(T.tangent, 1).graded_dimensions(2) == [1, 2, 3]
    S = level_set_complexes(sl2_space(), [0, 0, 0])
    jac = S.tangent.differentials[0]
    assert jac.shape == (3, 4)
    assert all(x.degree() == 1 for row in jac.entries() for x in row if x)


def test_reduced_tangent_examples():
    G = reduced_tangent_complex(gm_space(), [0])
    A, jac = G.tangent_red.differentials
    assert (jac @ A).is_zero()
    T = reduced_tangent_complex(trivial_space(), [0])
    assert T.tangent_red.ranks == [1, 2, 1]
    assert all(d.is_zero() for d in T.tangent_red.differentials)
    H = sl2_space()
    S = reduced_tangent_complex(H, [0, 0, 0])
    A, jac = S.tangent_red.differentials
    comp = jac @ A
    assert not comp.is_zero()
    assert all(S.level.normal_form(x).is_zero() for row in comp.entries() for x in row)


def test_virtual_dimension_examples():
    assert virtual_dimension(gm11_space()) == 2
    assert virtual_dimension(gm_space()) == 0
    assert virtual_dimension(sl2_space()) == -2


def test_theta_examples():
    th = build_theta(gm_space(), [0])
    assert th.morphism.components[1] == gm_space().omega
    with pytest.raises(ThetaSquareError) as exc:
        build_theta(gm_space(J=lambda q, p: q * p + q ** 3), [0], reduced=reduced_tangent_complex(gm_space(), [0]))
    e = exc.value
    assert (e.square, e.generator, e.entry_index, str(e.value)) == ("left", 0, 0, "3*q^2")
    build_theta(trivial_space(), [0])


def test_composite_error(qp):
    R, q, p = qp
    # a(J) = q - p is not in ⟨q + p⟩
    H = gm_space(J=lambda q, p: q + p)
    with pytest.raises(CompositeError) as exc:
        reduced_tangent_complex(H, [0])
    assert exc.value.entry == (0, 0)
    assert str(exc.value.value) in ("-2*p", "2*q")


def test_precondition():
    with pytest.raises(PreconditionError):
        reduced_tangent_complex(sl2_space(), [1, 0, 0])
    with pytest.raises(PreconditionError):
        verify_theorem(sl2_space(), [0, 1, 0])


@pytest.mark.parametrize("name", sorted(SPACES))
def test_duality_exact(name):
    H = SPACES[name]()
    red = reduced_tangent_complex(H, zero_level(H))
    A, jac = red.tangent_red.differentials
    d0, d1 = red.cotangent_red.differentials
    # reversed order, transposed, with the sign of the dual complex
    assert d0 == jac.transpose()
    assert d1 == -A.transpose()
    assert red.cotangent_red.differentials == dual_complex(red.tangent_red).differentials
    assert red.cotangent_red.ranks == red.tangent_red.ranks[::-1]


@pytest.mark.parametrize("name", sorted(SPACES))
def test_h0_compatibility(name):
    H = SPACES[name]()
    red = reduced_tangent_complex(H, zero_level(H))
    K = build_koszul(H.ring, H.moment, zero_level(H))
    assert red.level == classical_truncation(K)
    assert set(red.tangent_red.relations) == {g for g in classical_truncation(K).generators if g}


@pytest.mark.parametrize("name", sorted(SPACES))
def test_quasi_iso_and_cross_check(name):
    H = SPACES[name]()
    th = build_theta(H, zero_level(H))
    assert validate_symplectic(H).ok
    fast = is_quasi_iso(th.morphism)
    slow = is_quasi_iso(th.morphism, homology_path=True)
    assert fast.value and fast.method == "determinant"
    assert slow.value and slow.method == "cone-homology"
    # middle component is Ω itself
    assert th.morphism.components[1] is H.omega


perturb = st.sampled_from(["0", "q", "q^2", "q*p^2", "p^3", "2*q*p", "1"])


@settings(max_examples=40, deadline=None)
@given(perturb, perturb, st.sampled_from([0, 1]))
def test_theta_agrees_with_hamiltonian(dJ, da, comp):
    from derivedmw.parser import parse_poly
    H = gm_space()
    R = H.ring
    action = [list(H.action[0])]
    action[0][comp] = action[0][comp] + parse_poly(da, R)
    mutant = HamiltonianSpace(R, H.omega, H.lie, action, [H.moment[0] + parse_poly(dJ, R)])
    ham = validate_hamiltonian(mutant).checks["moment_condition"]
    assert (not theta_defects(mutant)) == ham
    left = [(i, j, v) for sq, i, j, v in theta_defects(mutant) if sq == "left"]
    right = [(i, j, v) for sq, i, j, v in theta_defects(mutant) if sq == "right"]
    # Ωᵀ = -Ω makes the right square minus the transpose of the left one
    assert sorted((i, j, str(-v)) for i, j, v in left) == sorted((i, j, str(v)) for i, j, v in right)


def test_verify_theorem_examples():
    g = verify_theorem(gm_space(), [0], cross_check=True)
    assert g["certificates"]["quasi_iso"] is True
    assert g["complete_intersection"] is True and g["virtual_dimension"] == 0
    assert g["quasi_iso_detail"]["cross_check"]["agrees"]
    t = verify_theorem(trivial_space(), [0])
    assert t["certificates"]["quasi_iso"] is True
    assert t["complete_intersection"] is False
    assert t["tor"][1]["is_zero"] is False
    s = verify_theorem(sl2_space(), [0, 0, 0], cross_check=True)
    assert s["certificates"]["quasi_iso"] is True
    assert s["complete_intersection"] is False and s["virtual_dimension"] == -2
    assert s["codimension_check"] == {"codimension": 2, "agrees": True}
    assert s["tor"][1]["graded_dimensions"] == [0, 0, 0, 0, 2, 4, 6]
    assert all(v for v in s["certificates"].values())


def test_verify_theorem_non_hamiltonian():
    g = verify_theorem(gm_space(J=lambda q, p: q * p + q ** 2 * p ** 2), [0])
    c = g["certificates"]
    assert c["hamiltonian"] is False and c["theta_squares"] is False
    assert c["quasi_iso"] is None
    assert g["witnesses"]["theta_squares"][0]["square"] == "left"
    assert g["point_checks"]["hamiltonian"] is False
