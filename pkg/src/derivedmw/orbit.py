"""Reduction along a coadjoint orbit by the shift X ↦ X × O, J' = J - y.

Coordinates y_1..y_r on g* are dual to the Lie basis.  The coadjoint fields
are v_i = ad*_ξi with components (v_i)_j = -Σ_k c^k_ij y_k, so that
v_i(y_j) = -y([ξ_i, ξ_j]) matches the equivariance convention of the
Hamiltonian side.  ω_O is given on a chart as N / D (an r×r numerator matrix
and a common denominator) with the same orientation as Ω: W v is ι_v ω_O.

The moment-map (KKS) identity is checked on the tangent space of the orbit,
which the v_i span:

    (N v_i) · v_j  ≡  D · v_j(y_i)      modulo the orbit ideal, for all i, j.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from typing import Sequence

from . import derham
from .chaincx import FreeComplex
from .errors import CompositeError, DegenerateInputError, ShapeError
from .groebner import GroebnerBasis, buchberger, ideal_dimension
from .hamspace import (Certificate, HamiltonianSpace, LieAlgebraData, apply_field, hamiltonian_at_points,
                       validate_action, validate_hamiltonian, validate_symplectic)
from .koszul import KoszulCdga, build_koszul, classical_truncation, is_complete_intersection, tor
from .polycore import MonomialOrder, MultiPoly, PolyMatrix, PolyRing, as_order
from .reduction import theta_defects, verify_theorem


@dataclass
class OrbitPresentation:
    ring: PolyRing                  # coordinates y on g*
    ideal: tuple                    # generators of I_O
    numerators: PolyMatrix          # N, with ω_O = N / D on the chart
    denominator: MultiPoly          # D

    def __post_init__(self):
        r = self.ring.nvars
        self.ideal = tuple(self.ring.coerce(g) for g in self.ideal)
        self.denominator = self.ring.coerce(self.denominator)
        if self.numerators.shape != (r, r) or self.numerators.ring != self.ring:
            raise ShapeError(f"orbit form must be {r}x{r} over the orbit coordinates")
        if not self.ideal:
            raise ShapeError("orbit ideal needs at least one generator")

    @property
    def r(self) -> int:
        return self.ring.nvars

    def groebner(self, order=None) -> GroebnerBasis:
        return buchberger(list(self.ideal), as_order(order), rank=1, ring=self.ring)

    def dimension(self) -> int:
        return ideal_dimension(self.groebner())

    def scaled(self, factor) -> "OrbitPresentation":
        return OrbitPresentation(self.ring, self.ideal, self.numerators.scale(factor), self.denominator)

    def point(self):
        """The level μ when the orbit ideal is ⟨y_i - μ_i⟩, else None."""
        gb = self.groebner()
        gens = [g for g in gb.generators if g]
        if len(gens) != self.r:
            return None
        mu = [None] * self.r
        for g in gens:
            if g.degree() != 1:
                return None
            lin = [(m, c) for m, c in g.items() if sum(m) == 1]
            if len(lin) != 1:
                return None
            m, c = lin[0]
            i = m.index(1)
            if c != 1 or mu[i] is not None:
                return None
            mu[i] = -dict(g.items()).get((0,) * self.r, 0)
        return mu


def lie_poisson_fields(lie: LieAlgebraData, ring: PolyRing) -> list:
    """ad*_ξi as vector fields on g*: (v_i)_j = -Σ_k c^k_ij y_k."""
    r = lie.dim
    if ring.nvars != r:
        raise ShapeError(f"{ring.nvars} dual coordinates for an algebra of dimension {r}")
    y = ring.gens
    out = []
    for i in range(r):
        comps = []
        for j in range(r):
            f = ring.zero()
            for k in range(r):
                c = lie.c[i][j][k]
                if c:
                    f = f - y[k] * c
            comps.append(f)
        out.append(comps)
    return out


def certify_kks(orbit: OrbitPresentation, lie: LieAlgebraData, order=None) -> Certificate:
    cert = Certificate("kks")
    gb = orbit.groebner(order)
    fields = lie_poisson_fields(lie, orbit.ring)
    tangent = True
    for i, v in enumerate(fields):
        for g in orbit.ideal:
            val = gb.normal_form(apply_field(v, g))
            if val and tangent:
                cert.witnesses.append({"check": "tangent", "field": i, "generator": g.to_str(), "value": val.to_str()})
                tangent = False
    cert.checks["tangent"] = tangent
    den = not gb.normal_form(orbit.denominator).is_zero()
    cert.checks["denominator"] = den
    if not den:
        cert.witnesses.append({"check": "denominator", "value": orbit.denominator.to_str()})
    ok = True
    N, D = orbit.numerators, orbit.denominator
    for i, vi in enumerate(fields):
        Nv = N.apply(vi)
        for j, vj in enumerate(fields):
            lhs = sum((a * b for a, b in zip(Nv, vj)), orbit.ring.zero())
            val = gb.normal_form(lhs - D * vj[i])
            if val:
                if ok:
                    cert.witnesses.append({"check": "moment_identity", "pair": [i, j], "value": val.to_str()})
                ok = False
    cert.checks["moment_identity"] = ok
    return cert


def orbit_nondegenerate(orbit: OrbitPresentation, lie: LieAlgebraData, order=None) -> bool:
    """Some dim O minor of the Gram matrix (N v_i)·v_j is nonzero modulo the ideal."""
    gb = orbit.groebner(order)
    k = ideal_dimension(gb)
    if k <= 0:
        return True
    fields = lie_poisson_fields(lie, orbit.ring)
    r, ring = orbit.r, orbit.ring
    G = [[sum((a * b for a, b in zip(orbit.numerators.apply(fields[i]), fields[j])), ring.zero())
          for j in range(r)] for i in range(r)]
    for rows in itertools.combinations(range(r), k):
        for cols in itertools.combinations(range(r), k):
            minor = PolyMatrix(ring, [[G[a][b] for b in cols] for a in rows], k, k).determinant()
            if not gb.normal_form(minor).is_zero():
                return True
    return False


@dataclass
class ShiftedSpace:
    ring: PolyRing                 # x then y
    base: HamiltonianSpace         # (X, ω_X, g, a, J)
    orbit: OrbitPresentation
    combined: HamiltonianSpace     # fields (a, ad*), J' = J - y, ω_X padded by a zero y-block
    relations: tuple               # the orbit ideal in the combined ring
    kks: Certificate

    @property
    def n(self) -> int:
        return self.ring.nvars


def build_shifted(H: HamiltonianSpace, orbit: OrbitPresentation, order=None) -> ShiftedSpace:
    if orbit.r != H.r:
        raise ShapeError(f"orbit lives in a {orbit.r}-dimensional dual, algebra has dimension {H.r}")
    clash = set(H.ring.names) & set(orbit.ring.names)
    if clash:
        raise ShapeError(f"orbit coordinates clash with space variables: {sorted(clash)}")
    fields_y = lie_poisson_fields(H.lie, orbit.ring)
    if all(not f for v in fields_y for f in v) and orbit.dimension() > 0:
        raise DegenerateInputError("the coadjoint action is trivial, so every orbit is a point; "
                                   "a positive-dimensional orbit ideal cannot describe one")
    ring = H.ring.extend(orbit.ring.names)
    n, r = H.n, H.r
    xpos = list(range(n))
    ypos = list(range(n, n + r))
    ex = lambda f: f.embed(ring, xpos)
    ey = lambda f: f.embed(ring, ypos)
    omega = [[ring.zero()] * (n + r) for _ in range(n + r)]
    for i in range(n):
        for j in range(n):
            omega[i][j] = ex(H.omega[i, j])
    action = [[ex(a) for a in H.action[i]] + [ey(v) for v in fields_y[i]] for i in range(r)]
    y = [ring.gen(n + i) for i in range(r)]
    moment = [ex(H.moment[i]) - y[i] for i in range(r)]
    combined = HamiltonianSpace(ring, PolyMatrix(ring, omega), H.lie, action, moment,
                                name=(H.name + "_shifted") if H.name else "shifted")
    rels = tuple(ey(g) for g in orbit.ideal)
    return ShiftedSpace(ring, H, orbit, combined, rels, certify_kks(orbit, H.lie, order))


def shifted_koszul(S: ShiftedSpace, order=None) -> KoszulCdga:
    return build_koszul(S.ring, S.combined.moment, [0] * S.base.r, base_relations=S.relations, order=order)


def shifted_virtual_dimension(S: ShiftedSpace) -> int:
    return S.base.n + S.orbit.dimension() - 2 * S.base.r


def _reduced_composite(S: ShiftedSpace, level: GroebnerBasis):
    C = S.combined
    A = C.action_matrix()
    jac = C.jacobian()
    comp = jac @ A
    for i in range(comp.rows):
        for j in range(comp.cols):
            v = level.normal_form(comp[i, j])
            if v:
                raise CompositeError(f"Jac·A entry {(i, j)} is {v} modulo the level ideal", entry=(i, j), value=v)
    return FreeComplex(S.ring, -1, [C.r, C.n, C.r], [A, jac],
                       relations=[g for g in level.generators if g], order=level.order)


def _eliminate(H: HamiltonianSpace, orbit: OrbitPresentation, order=None) -> list:
    """Generators of (⟨J_i - y_i⟩ + I_O) ∩ k[x] via an elimination order with y first."""
    r = H.r
    ring = PolyRing(tuple(orbit.ring.names) + tuple(H.ring.names))
    ypos = list(range(r))
    xpos = list(range(r, r + H.n))
    gens = [J.embed(ring, xpos) - ring.gen(i) for i, J in enumerate(H.moment)]
    gens += [g.embed(ring, ypos) for g in orbit.ideal]
    gb = buchberger(gens, MonomialOrder("elim", r), rank=1, ring=ring)
    back = [H.ring.zero()] * r + list(H.ring.gens)
    out = []
    for g in gb.generators:
        if all(not any(m[:r]) for m, _ in g.items()):
            out.append(g.compose(back, H.ring))
    return out


def classical_consistency(H: HamiltonianSpace, orbit: OrbitPresentation, target: OrbitPresentation | None = None,
                          order=None) -> Certificate:
    """Elimination of y from ⟨J - y⟩ + I_O against ⟨g(J(x)) : g ∈ I_target⟩ (target defaults to O)."""
    target = target or orbit
    cert = Certificate("classical_consistency")
    left = _eliminate(H, orbit, order)
    right = [g.compose(list(H.moment), H.ring) for g in target.ideal]
    gl = buchberger(left or [H.ring.zero()], order, rank=1, ring=H.ring)
    gr = buchberger(right or [H.ring.zero()], order, rank=1, ring=H.ring)
    a = [f for f in right if not gl.contains(f)]
    b = [f for f in left if not gr.contains(f)]
    cert.checks["pullback_in_eliminated"] = not a
    cert.checks["eliminated_in_pullback"] = not b
    if a:
        cert.witnesses.append({"check": "pullback_in_eliminated", "value": a[0].to_str()})
    if b:
        cert.witnesses.append({"check": "eliminated_in_pullback", "value": b[0].to_str()})
    cert.data["eliminated"] = gl.to_strings()
    return cert


def mathematical_summary(fragment: dict) -> dict:
    """Fields that must agree between the direct and the shifted computation."""
    return {
        "certificates": {k: v for k, v in fragment["certificates"].items()
                         if k not in ("kks", "classical_consistency")},
        "tor": fragment["tor"],
        "complete_intersection": fragment["complete_intersection"],
        "virtual_dimension": fragment["virtual_dimension"],
        "level_set_dimension": fragment["classical_level_set"]["dimension"],
    }


def verify_shifted(H: HamiltonianSpace, orbit: OrbitPresentation, order=None, w_max: int = 3,
                   graded_bound: int = 6, seed: int = 0, cross_check: bool = False) -> dict:
    """The reduction pipeline at 0 on (X × O, J - y)."""
    t0 = time.perf_counter()
    S = build_shifted(H, orbit, order)
    certs, witnesses = {}, {}
    sym = validate_symplectic(H)
    certs["symplectic"] = sym.ok
    if not sym.ok:
        witnesses["symplectic"] = sym.witnesses
    act = validate_action(S.combined)
    certs["action"] = act.ok
    if not act.ok:
        witnesses["action"] = act.witnesses
    ham_x = validate_hamiltonian(H)
    ham_c = validate_hamiltonian(S.combined)
    certs["hamiltonian"] = ham_x.checks["moment_condition"] and ham_c.checks["equivariance"]
    if not certs["hamiltonian"]:
        witnesses["hamiltonian"] = [dict(w, side="X") for w in ham_x.witnesses if w["check"] == "moment_condition"] \
            + [dict(w, side="shifted") for w in ham_c.witnesses if w["check"] == "equivariance"]
    certs["kks"] = S.kks.ok
    if not S.kks.ok:
        witnesses["kks"] = [dict(w, side="orbit") for w in S.kks.witnesses]
    K = shifted_koszul(S, order)
    level = classical_truncation(K)
    try:
        _reduced_composite(S, level)
        certs["tangent_complex"] = True
    except CompositeError as e:
        certs["tangent_complex"] = False
        witnesses["tangent_complex"] = [{"entry": list(e.entry), "value": str(e.value)}]
    bad = theta_defects(H)
    certs["theta_squares"] = not bad
    if bad:
        sq, i, j, v = bad[0]
        witnesses["theta_squares"] = [{"square": sq, "generator": i, "entry": j, "value": str(v), "side": "X"}]
    if bad:
        certs["quasi_iso"] = None
    else:
        det = H.omega.determinant()
        certs["quasi_iso"] = bool(det) and det.is_constant() and orbit_nondegenerate(orbit, H.lie, order)
        if not certs["quasi_iso"]:
            witnesses["quasi_iso"] = [{"determinant": det.to_str(), "side": "X or orbit"}]
    form = derham.certify_form(S.combined, [0] * H.r, w_max, koszul=K)
    certs["strictly_closed"] = derham.strictly_closed(form)
    certs["invariant"] = derham.invariant(form)
    if not form.ok:
        witnesses["form"] = form.witnesses
    cc = classical_consistency(H, orbit, order=order)
    certs["classical_consistency"] = cc.ok
    if not cc.ok:
        witnesses["classical_consistency"] = cc.witnesses
    ci = is_complete_intersection(K)
    base_dim = orbit.dimension() + H.n
    level_dim = ideal_dimension(level) if not level.is_unit() else -1
    codim = None if level.is_unit() else base_dim - level_dim
    fragment = {
        "certificates": certs,
        "witnesses": witnesses,
        "quasi_iso_detail": {"method": "structural", "cross_check": None} if certs["quasi_iso"] is not None else None,
        "tor": [{"index": i, "is_zero": tor(K, i).is_zero(),
                 "graded_dimensions": tor(K, i).graded_dimensions(graded_bound)} for i in range(K.r + 1)],
        "complete_intersection": ci,
        "codimension_check": {"codimension": codim, "agrees": ci == (codim is None or codim == H.r)},
        "classical_level_set": {"groebner_basis": level.to_strings(), "dimension": level_dim},
        "eliminated_level_set": cc.data["eliminated"],
        "orbit_dimension": orbit.dimension(),
        "virtual_dimension": shifted_virtual_dimension(S),
        "point_checks": {"seed": seed, "hamiltonian": hamiltonian_at_points(H, seed)},
        "invariant_matrix_path": derham.invariant_by_matrix(H),
    }
    mu = orbit.point()
    if mu is not None:
        direct = verify_theorem(H, mu, order, w_max, graded_bound, seed, cross_check)
        fragment["point_orbit_round_trip"] = {
            "mu": [str(m) for m in mu],
            "identical": mathematical_summary(direct) == mathematical_summary(fragment),
        }
    fragment["elapsed"] = time.perf_counter() - t0
    return fragment


__all__ = [
    "OrbitPresentation", "lie_poisson_fields", "certify_kks", "orbit_nondegenerate", "ShiftedSpace",
    "build_shifted", "shifted_koszul", "shifted_virtual_dimension", "classical_consistency",
    "mathematical_summary", "verify_shifted",
]
