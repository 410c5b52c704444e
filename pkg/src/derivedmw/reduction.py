"""Tangent and cotangent complexes of the level set and of the reduced stack,
the map Θ_ω between them, and the end-to-end verification pipeline.

Complex layout (free over R, level-set relations ⟨J - μ⟩ as coefficient ideal):

    tangent_red    g⊗O  --A-->  T_X  --Jac-->  g*⊗O        degrees -1, 0, 1
    cotangent_red  g⊗O --Jacᵀ--> T*_X --(-Aᵀ)--> g*⊗O

where A has the action fields as columns and Jac = (∂J_i/∂x_j).  The
cotangent complex is the signed dual of the tangent one
(d^i = (-1)^(i+1) (d^(-i-1))ᵀ), and Θ = (id, Ω, id).  Its two squares are

    left   Jacᵀ - Ω A = 0        (column i is ∇J_i - Ω a_i)
    right  -Aᵀ Ω - Jac = 0       (the transpose of the left one, as Ωᵀ = -Ω)
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from math import comb

from . import derham
from .chaincx import ChainMorphism, FreeComplex, QuasiIsoResult, dual_complex, homology, is_quasi_iso
from .errors import CompositeError, PreconditionError, ThetaSquareError
from .groebner import GroebnerBasis, ideal_dimension
from .hamspace import (HamiltonianSpace, coadjoint_fixes, hamiltonian_at_points, validate_action,
                       validate_hamiltonian, validate_symplectic)
from .koszul import (KoszulCdga, build_koszul, classical_truncation, codimension, codimension_criterion,
                     is_complete_intersection, tor)
from .polycore import PolyMatrix


@dataclass
class LevelSetComplexes:
    tangent: FreeComplex      # [T_X -> g*⊗O], degrees 0, 1
    cotangent: FreeComplex    # [g⊗O -> T*_X], degrees -1, 0
    base: KoszulCdga


@dataclass
class ReducedComplexes:
    tangent_red: FreeComplex
    cotangent_red: FreeComplex
    level: GroebnerBasis
    virtual_dimension: int


@dataclass
class ThetaMap:
    morphism: ChainMorphism
    reduced: ReducedComplexes


def _level_relations(K: KoszulCdga) -> list:
    return [g for g in classical_truncation(K).generators if g]


def level_set_complexes(H: HamiltonianSpace, mu, order=None, base_relations=(), moment=None) -> LevelSetComplexes:
    moment = H.moment if moment is None else moment
    K = build_koszul(H.ring, moment, mu, base_relations, order)
    rels = _level_relations(K)
    jac = PolyMatrix(H.ring, [J.gradient() for J in moment], H.r, H.n)
    tangent = FreeComplex(H.ring, 0, [H.n, H.r], [jac], relations=rels, order=K.order)
    cotangent = FreeComplex(H.ring, -1, [H.r, H.n], [jac.transpose()], relations=rels, order=K.order)
    return LevelSetComplexes(tangent, cotangent, K)


def virtual_dimension(H: HamiltonianSpace) -> int:
    return H.n - 2 * H.r


def reduced_tangent_complex(H: HamiltonianSpace, mu, order=None, base_relations=(), moment=None,
                            check_fixed=True) -> ReducedComplexes:
    if check_fixed and not coadjoint_fixes(H.lie, mu):
        raise PreconditionError("level is not coadjoint-fixed; reduce through an orbit shift instead")
    moment = H.moment if moment is None else moment
    K = build_koszul(H.ring, moment, mu, base_relations, order)
    level = classical_truncation(K)
    A = H.action_matrix()
    jac = PolyMatrix(H.ring, [J.gradient() for J in moment], H.r, H.n)
    comp = jac @ A
    for i in range(comp.rows):
        for j in range(comp.cols):
            v = level.normal_form(comp[i, j])
            if v:
                raise CompositeError(f"Jac·A entry {(i, j)} is {v} modulo the level ideal",
                                     entry=(i, j), value=v)
    rels = [g for g in level.generators if g]
    tangent = FreeComplex(H.ring, -1, [H.r, H.n, H.r], [A, jac], relations=rels, order=K.order)
    cotangent = dual_complex(tangent)
    return ReducedComplexes(tangent, cotangent, level, virtual_dimension(H))


def theta_defects(H: HamiltonianSpace, omega=None, moment=None) -> list:
    """(square, generator, entry, value) for every failing entry of Θ's squares."""
    omega = H.omega if omega is None else omega
    moment = H.moment if moment is None else moment
    A = H.action_matrix()
    jac = PolyMatrix(H.ring, [J.gradient() for J in moment], H.r, H.n)
    left = jac.transpose() - omega @ A
    right = -(A.transpose() @ omega) - jac
    out = []
    for i in range(H.r):
        for j in range(H.n):
            if left[j, i]:
                out.append(("left", i, j, left[j, i]))
    for i in range(H.r):
        for j in range(H.n):
            if right[i, j]:
                out.append(("right", i, j, right[i, j]))
    return out


def build_theta(H: HamiltonianSpace, mu, reduced: ReducedComplexes | None = None, order=None) -> ThetaMap:
    red = reduced or reduced_tangent_complex(H, mu, order)
    bad = theta_defects(H)
    if bad:
        square, i, j, v = bad[0]
        raise ThetaSquareError(f"{square} square of Θ fails at generator {i}, entry {j}: {v}",
                               square=square, generator=i, entry=j, value=v)
    ring = H.ring
    comps = [PolyMatrix.identity(ring, H.r), H.omega, PolyMatrix.identity(ring, H.r)]
    f = ChainMorphism(red.tangent_red, red.cotangent_red, comps)
    return ThetaMap(f, red)


def _tor_summary(K: KoszulCdga, bound: int) -> list:
    out = []
    for i in range(K.r + 1):
        t = tor(K, i)
        out.append({"index": i, "is_zero": t.is_zero(), "graded_dimensions": t.graded_dimensions(bound)})
    return out


def _cert_value(cert):
    return cert.ok


def verify_theorem(H: HamiltonianSpace, mu, order=None, w_max: int = 3, graded_bound: int = 6, seed: int = 0,
                   cross_check: bool = False) -> dict:
    """Run the whole pipeline on (H, μ) and return a report fragment."""
    t0 = time.perf_counter()
    certs, witnesses = {}, {}
    sym = validate_symplectic(H)
    act = validate_action(H)
    ham = validate_hamiltonian(H)
    for name, c in (("symplectic", sym), ("action", act), ("hamiltonian", ham)):
        certs[name] = c.ok
        if not c.ok:
            witnesses[name] = c.witnesses
    if not coadjoint_fixes(H.lie, mu):
        raise PreconditionError("level is not coadjoint-fixed; reduce through an orbit shift instead")
    K = build_koszul(H.ring, H.moment, mu, order=order)
    fragment = {}
    red = None
    try:
        red = reduced_tangent_complex(H, mu, order)
        certs["tangent_complex"] = True
    except CompositeError as e:
        certs["tangent_complex"] = False
        witnesses["tangent_complex"] = [{"entry": list(e.entry), "value": str(e.value)}]
    theta = None
    if red is not None:
        try:
            theta = build_theta(H, mu, red)
            certs["theta_squares"] = True
        except ThetaSquareError as e:
            certs["theta_squares"] = False
            witnesses["theta_squares"] = [{"square": e.square, "generator": e.generator, "entry": e.entry_index,
                                           "value": str(e.value)}]
    else:
        certs["theta_squares"] = None
    qi = None
    if theta is not None:
        q = is_quasi_iso(theta.morphism)
        certs["quasi_iso"] = q.value
        qi = {"method": q.method}
        if cross_check:
            slow = is_quasi_iso(theta.morphism, homology_path=True)
            qi["cross_check"] = {"value": slow.value, "agrees": slow.value == q.value,
                                 "checked_degrees": slow.checked_degrees}
        if not q.value:
            witnesses["quasi_iso"] = [{"degree": q.degree, "witness": [str(x) for x in (q.witness or [])]}]
    else:
        certs["quasi_iso"] = None
    form = derham.certify_form(H, mu, w_max, koszul=K)
    certs["strictly_closed"] = derham.strictly_closed(form)
    certs["invariant"] = derham.invariant(form)
    if not form.ok:
        witnesses["form"] = form.witnesses
    level = classical_truncation(K)
    ci = is_complete_intersection(K)
    codim = codimension(K)
    fragment.update({
        "certificates": certs,
        "witnesses": witnesses,
        "quasi_iso_detail": qi,
        "tor": _tor_summary(K, graded_bound),
        "complete_intersection": ci,
        "codimension_check": {"codimension": codim, "agrees": ci == codimension_criterion(K)},
        "classical_level_set": {"groebner_basis": level.to_strings(),
                                "dimension": ideal_dimension(level)},
        "virtual_dimension": virtual_dimension(H),
        "point_checks": {"seed": seed, "hamiltonian": hamiltonian_at_points(H, seed)},
        "invariant_matrix_path": derham.invariant_by_matrix(H),
    })
    fragment["elapsed"] = time.perf_counter() - t0
    return fragment


def expected_tor_ranks(r: int) -> list:
    return [comb(r, i) for i in range(r + 1)]


__all__ = [
    "LevelSetComplexes", "ReducedComplexes", "ThetaMap", "level_set_complexes", "reduced_tangent_complex",
    "virtual_dimension", "theta_defects", "build_theta", "verify_theorem", "QuasiIsoResult",
]
