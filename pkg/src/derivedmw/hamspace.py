"""Hamiltonian G-spaces given by polynomial data, and their certificates.

Conventions (used by every module of the package):

* ``Ω`` is the matrix of ``v ↦ ι_v ω``, so the Hamiltonian condition
  ``ι_{a_ξ} ω = dJ_ξ`` reads ``Ω · a_ξ = ∇J_ξ``.
* Vector fields act as derivations ``a(f) = Σ a_j ∂_j f`` with bracket
  ``[a, b]_k = a(b_k) - b(a_k)``.  A left action makes ``ξ ↦ a_ξ`` an
  anti-homomorphism, so the checked identities are

      [a_ξi, a_ξj] = -Σ_k c^k_ij a_ξk        a_ξi(J_ξj) = -Σ_k c^k_ij J_ξk

  where ``[e_i, e_j] = Σ_k c^k_ij e_k``.  The cotangent lift
  ``a_ξ = (A q, -Aᵀ p)``, ``J_ξ = pᵀ A q`` with ``Ω = [[0, -I], [I, 0]]``
  satisfies all of them.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import ShapeError
from .polycore import MultiPoly, PolyMatrix, PolyRing, as_rational


@dataclass
class Certificate:
    """Named boolean checks plus JSON-friendly witnesses for the failures."""

    name: str
    checks: dict = field(default_factory=dict)
    witnesses: list = field(default_factory=list)
    data: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def __bool__(self):
        return self.ok

    def to_dict(self) -> dict:
        return {"ok": self.ok, "checks": dict(self.checks), "witnesses": list(self.witnesses)}


class LieAlgebraData:
    """Structure constants ``c[i][j][k]`` with ``[e_i, e_j] = Σ_k c[i][j][k] e_k``."""

    def __init__(self, labels: Sequence[str], structure, reductive: bool = True):
        self.labels = tuple(labels)
        r = len(self.labels)
        c = [[[as_rational(structure[i][j][k]) for k in range(r)] for j in range(r)] for i in range(r)]
        self.c = c
        self.reductive = reductive

    @classmethod
    def from_brackets(cls, labels, brackets: dict, reductive=True):
        """``brackets`` maps (i, j) label pairs to {label: coefficient}; the
        mirrored entries [e_j, e_i] are filled in by antisymmetry."""
        labels = tuple(labels)
        idx = {l: n for n, l in enumerate(labels)}
        r = len(labels)
        c = [[[Fraction(0)] * r for _ in range(r)] for _ in range(r)]
        seen = {}
        for (a, b), value in brackets.items():
            i, j = idx[a], idx[b]
            vec = [Fraction(0)] * r
            for lab, coeff in value.items():
                vec[idx[lab]] = as_rational(coeff)
            seen[(i, j)] = vec
        for (i, j), vec in seen.items():
            c[i][j] = list(vec)
            if (j, i) not in seen:
                c[j][i] = [-x for x in vec]
        return cls(labels, c, reductive)

    @property
    def dim(self) -> int:
        return len(self.labels)

    def bracket(self, i: int, j: int) -> list:
        return list(self.c[i][j])

    def is_abelian(self) -> bool:
        return all(x == 0 for plane in self.c for row in plane for x in row)

    def validate(self) -> Certificate:
        r = self.dim
        cert = Certificate("lie_algebra")
        anti = True
        for i in range(r):
            for j in range(r):
                for k in range(r):
                    if self.c[i][j][k] != -self.c[j][i][k]:
                        if anti:
                            cert.witnesses.append({"check": "antisymmetric", "indices": [i, j, k]})
                        anti = False
        jac = True
        for i in range(r):
            for j in range(r):
                for k in range(r):
                    for l in range(r):
                        s = sum(self.c[i][j][m] * self.c[m][k][l] + self.c[j][k][m] * self.c[m][i][l]
                                + self.c[k][i][m] * self.c[m][j][l] for m in range(r))
                        if s and jac:
                            cert.witnesses.append({"check": "jacobi", "indices": [i, j, k, l],
                                                   "value": str(s)})
                            jac = False
        cert.checks["antisymmetric"] = anti
        cert.checks["jacobi"] = jac
        return cert

    def __repr__(self):
        return f"LieAlgebraData({self.labels})"


def sl2() -> LieAlgebraData:
    """Basis (e, h, f) with [h,e]=2e, [h,f]=-2f, [e,f]=h."""
    return LieAlgebraData.from_brackets(
        ("e", "h", "f"), {("h", "e"): {"e": 2}, ("h", "f"): {"f": -2}, ("e", "f"): {"h": 1}})


def abelian(labels) -> LieAlgebraData:
    labels = tuple(labels)
    r = len(labels)
    return LieAlgebraData(labels, [[[0] * r for _ in range(r)] for _ in range(r)])


def apply_field(field_: Sequence[MultiPoly], f: MultiPoly) -> MultiPoly:
    """The derivation Σ_j a_j ∂_j applied to ``f``."""
    out = f.ring.zero()
    for j, a in enumerate(field_):
        if a:
            d = f.diff(j)
            if d:
                out = out + a * d
    return out


def field_bracket(a: Sequence[MultiPoly], b: Sequence[MultiPoly]) -> list:
    """Derivation commutator: [a, b]_k = a(b_k) - b(a_k)."""
    return [apply_field(a, bk) - apply_field(b, ak) for ak, bk in zip(a, b)]


class HamiltonianSpace:
    """(X, ω_X, g, a, J) on affine space with polynomial data."""

    def __init__(self, ring: PolyRing, omega: PolyMatrix, lie: LieAlgebraData,
                 action: Sequence[Sequence[MultiPoly]], moment: Sequence[MultiPoly], name: str = ""):
        n, r = ring.nvars, lie.dim
        if omega.ring != ring or omega.shape != (n, n):
            raise ShapeError(f"omega must be {n}x{n} over {ring}")
        if len(action) != r or len(moment) != r:
            raise ShapeError(f"need {r} action fields and {r} moment components")
        self.ring = ring
        self.omega = omega
        self.lie = lie
        self.action = tuple(tuple(ring.coerce(x) for x in v) for v in action)
        for v in self.action:
            if len(v) != n:
                raise ShapeError(f"action field with {len(v)} components, expected {n}")
        self.moment = tuple(ring.coerce(J) for J in moment)
        self.name = name

    @property
    def n(self) -> int:
        return self.ring.nvars

    @property
    def r(self) -> int:
        return self.lie.dim

    def action_matrix(self) -> PolyMatrix:
        """n x r matrix whose columns are the action fields."""
        return PolyMatrix.from_columns(self.ring, self.action, self.n)

    def jacobian(self) -> PolyMatrix:
        """r x n matrix (∂J_i / ∂x_j)."""
        return PolyMatrix(self.ring, [J.gradient() for J in self.moment], self.r, self.n)

    def __repr__(self):
        return f"HamiltonianSpace({self.name or '?'}, n={self.n}, r={self.r})"


def validate_symplectic(H: HamiltonianSpace) -> Certificate:
    cert = Certificate("symplectic")
    Om, n = H.omega, H.n
    anti = True
    for i in range(n):
        for j in range(i, n):
            s = Om[i, j] + Om[j, i]
            if s:
                anti = False
                cert.witnesses.append({"check": "antisymmetric", "indices": [i, j], "value": str(s)})
                break
        if not anti:
            break
    closed = True
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                s = Om[j, k].diff(i) + Om[k, i].diff(j) + Om[i, j].diff(k)
                if s and closed:
                    closed = False
                    cert.witnesses.append({"check": "closed", "indices": [i, j, k], "value": str(s)})
    det = Om.determinant()
    nondeg = bool(det) and det.is_constant()
    if not nondeg:
        cert.witnesses.append({"check": "nondegenerate", "determinant": str(det)})
    cert.checks["antisymmetric"] = anti
    cert.checks["closed"] = closed
    cert.checks["nondegenerate"] = nondeg
    cert.checks["even_dimension"] = n % 2 == 0
    return cert


def validate_action(H: HamiltonianSpace) -> Certificate:
    """[a_i, a_j] = -Σ_k c^k_ij a_k for all basis pairs."""
    cert = Certificate("action")
    lie_cert = H.lie.validate()
    cert.checks["lie_algebra"] = lie_cert.ok
    cert.witnesses.extend(lie_cert.witnesses)
    ok = True
    for i in range(H.r):
        for j in range(i + 1, H.r):
            lhs = field_bracket(H.action[i], H.action[j])
            for comp in range(H.n):
                rhs = H.ring.zero()
                for k in range(H.r):
                    c = H.lie.c[i][j][k]
                    if c:
                        rhs = rhs - H.action[k][comp] * c
                diff = lhs[comp] - rhs
                if diff:
                    if ok:
                        cert.witnesses.append({"check": "bracket", "pair": [i, j], "component": comp,
                                               "value": str(diff)})
                    ok = False
    cert.checks["bracket"] = ok
    return cert


def hamiltonian_defects(H: HamiltonianSpace) -> list:
    """All (generator, entry, ∇J - Ω·a) triples with a nonzero entry."""
    out = []
    for i in range(H.r):
        lhs = H.omega.apply(H.action[i])
        grad = H.moment[i].gradient()
        for j in range(H.n):
            d = grad[j] - lhs[j]
            if d:
                out.append((i, j, d))
    return out


def validate_hamiltonian(H: HamiltonianSpace) -> Certificate:
    """Ω · a_ξ = ∇J_ξ for every ξ, and a_ξi(J_ξj) = -Σ_k c^k_ij J_ξk."""
    cert = Certificate("hamiltonian")
    defects = hamiltonian_defects(H)
    cert.checks["moment_condition"] = not defects
    for i, j, d in defects:
        vec = [g - x for g, x in zip(H.moment[i].gradient(), H.omega.apply(H.action[i]))]
        cert.witnesses.append({"check": "moment_condition", "generator": i, "entry": j, "value": str(d),
                               "vector": [str(x) for x in vec]})
    equi = True
    for i in range(H.r):
        for j in range(H.r):
            val = apply_field(H.action[i], H.moment[j])
            for k in range(H.r):
                c = H.lie.c[i][j][k]
                if c:
                    val = val + H.moment[k] * c
            if val:
                if equi:
                    cert.witnesses.append({"check": "equivariance", "pair": [i, j], "value": str(val)})
                equi = False
    cert.checks["equivariance"] = equi
    return cert


def hamiltonian_at_points(H: HamiltonianSpace, seed: int = 0, count: int = 4) -> bool:
    """Evaluate Ω·a - ∇J at seeded random integer points (a numeric sanity path)."""
    rng = random.Random(seed)
    for _ in range(count):
        pt = [Fraction(rng.randint(-9, 9)) for _ in range(H.n)]
        Om = H.omega.evaluate(pt)
        for i in range(H.r):
            a = [x.evaluate(pt) for x in H.action[i]]
            grad = [g.evaluate(pt) for g in H.moment[i].gradient()]
            for j in range(H.n):
                if sum(Om[j][k] * a[k] for k in range(H.n)) != grad[j]:
                    return False
    return True


def coadjoint_fixes(lie: LieAlgebraData, mu: Sequence) -> bool:
    """μ([e_i, e_j]) = 0 for all i, j."""
    mu = [as_rational(m) for m in mu]
    if len(mu) != lie.dim:
        raise ShapeError(f"level has {len(mu)} entries, algebra has dimension {lie.dim}")
    r = lie.dim
    return all(sum(lie.c[i][j][k] * mu[k] for k in range(r)) == 0 for i in range(r) for j in range(r))


def cotangent_lift(matrices: Sequence[Sequence[Sequence]], lie: LieAlgebraData, qnames=None, pnames=None,
                   name: str = "") -> HamiltonianSpace:
    """T*C^m with a linear action ξ ↦ A_ξ: a_ξ = (A q, -Aᵀ p), J_ξ = pᵀ A q."""
    m = len(matrices[0])
    qnames = list(qnames or [f"q{i + 1}" for i in range(m)])
    pnames = list(pnames or [f"p{i + 1}" for i in range(m)])
    ring = PolyRing(qnames + pnames)
    gens = ring.gens
    q, p = gens[:m], gens[m:]
    n = 2 * m
    omega = [[0] * n for _ in range(n)]
    for i in range(m):
        omega[i][m + i] = -1
        omega[m + i][i] = 1
    action, moment = [], []
    for A in matrices:
        A = [[as_rational(x) for x in row] for row in A]
        Aq = [sum((q[k] * A[i][k] for k in range(m) if A[i][k]), ring.zero()) for i in range(m)]
        ATp = [sum((p[k] * A[k][i] for k in range(m) if A[k][i]), ring.zero()) for i in range(m)]
        action.append(Aq + [-x for x in ATp])
        moment.append(sum((p[i] * Aq[i] for i in range(m)), ring.zero()))
    return HamiltonianSpace(ring, PolyMatrix(ring, omega), lie, action, moment, name=name)


__all__ = [
    "Certificate", "LieAlgebraData", "sl2", "abelian", "apply_field", "field_bracket", "HamiltonianSpace",
    "validate_symplectic", "validate_action", "validate_hamiltonian", "hamiltonian_defects",
    "hamiltonian_at_points", "coadjoint_fixes", "cotangent_lift",
]
