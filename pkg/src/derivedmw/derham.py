"""Weight-graded de Rham bicomplex of a Koszul CDGA.

Generators and (cohomological degree, weight):

    x_j   (0, 0)  even        η_i   (-1, 0)  odd
    dx_j  (0, 1)  odd         dη_i  (-1, 1)  even

A monomial is stored as ``(odd_mask, deta)``: bit ``i < r`` of the mask is
η_i, bit ``r + j`` is dx_j, and the odd factors are written in increasing bit
order; ``deta`` holds the exponents of the even dη's.  Coefficients are
polynomials in x.

Sign table of the three odd derivations (x-coefficients handled by Leibniz):

    d_int :  η_i ↦ J_i - μ_i      dη_i ↦ -Σ_j ∂_j J_i dx_j     x, dx ↦ 0
    d_dR  :  x_j ↦ dx_j           η_i ↦ dη_i                   dx, dη ↦ 0
    ι_v   :  dx_j ↦ v_j           dη_i ↦ v_η(η_i)              x, η ↦ 0

The minus sign on d_int(dη) makes d_int and d_dR anticommute.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import PreconditionError, ShapeError, TruncationError
from .hamspace import Certificate, HamiltonianSpace, apply_field, coadjoint_fixes
from .koszul import KoszulCdga, build_koszul
from .polycore import MultiPoly, PolyMatrix


def _popcount(m: int) -> int:
    return bin(m).count("1")


def _merge_sign(m1: int, m2: int) -> int:
    """Sign of reordering (odd factors of m1)(odd factors of m2) increasingly."""
    inv = 0
    b = m2
    while b:
        low = b & -b
        inv += _popcount(m1 & ~((low << 1) - 1))
        b ^= low
    return -1 if inv & 1 else 1


class FormAlgebra:
    def __init__(self, base: KoszulCdga, w_max: int = 3):
        if w_max < 0:
            raise ValueError("w_max must be non-negative")
        self.base = base
        self.ring = base.ring
        self.n = base.ring.nvars
        self.r = base.r
        self.w_max = w_max
        self._eta_mask = (1 << self.r) - 1

    def weight_of(self, key) -> int:
        mask, deta = key
        return _popcount(mask >> self.r) + sum(deta)

    def degree_of(self, key) -> int:
        mask, deta = key
        return -_popcount(mask & self._eta_mask) - sum(deta)

    def element(self, terms: dict) -> "FormElement":
        return FormElement(self, terms)

    def zero(self) -> "FormElement":
        return FormElement(self, {})

    def function(self, f) -> "FormElement":
        f = self.ring.coerce(f)
        return FormElement(self, {(0, (0,) * self.r): f} if f else {})

    def one(self):
        return self.function(1)

    def x(self, j: int):
        return self.function(self.ring.gen(j))

    def eta(self, i: int):
        return FormElement(self, {(1 << i, (0,) * self.r): self.ring.one()})

    def dx(self, j: int):
        return FormElement(self, {(1 << (self.r + j), (0,) * self.r): self.ring.one()})

    def deta(self, i: int):
        e = [0] * self.r
        e[i] = 1
        return FormElement(self, {(0, tuple(e)): self.ring.one()}) if self.w_max >= 1 else self.zero()

    def one_form(self, coeffs: Sequence[MultiPoly]):
        """Σ_j c_j dx_j."""
        out = {}
        for j, c in enumerate(coeffs):
            c = self.ring.coerce(c)
            if c:
                out[(1 << (self.r + j), (0,) * self.r)] = c
        return FormElement(self, out)

    def two_form(self, omega: PolyMatrix):
        """ω = Σ_{j<k} Ω_kj dx_j ∧ dx_k, so that ι_v ω = Σ_m (Ω v)_m dx_m."""
        out = {}
        for j in range(self.n):
            for k in range(j + 1, self.n):
                c = omega[k, j]
                if c:
                    out[((1 << (self.r + j)) | (1 << (self.r + k)), (0,) * self.r)] = c
        return FormElement(self, out)

    def _mono_mul(self, k1, k2):
        (m1, e1), (m2, e2) = k1, k2
        if m1 & m2:
            return None, 0
        key = (m1 | m2, tuple(a + b for a, b in zip(e1, e2)))
        if self.weight_of(key) > self.w_max:
            return None, 0
        return key, _merge_sign(m1, m2)

    def __repr__(self):
        return f"FormAlgebra(n={self.n}, r={self.r}, w_max={self.w_max})"


class FormElement:
    __slots__ = ("alg", "terms")

    def __init__(self, alg: FormAlgebra, terms: dict):
        self.alg = alg
        self.terms = {k: c for k, c in terms.items() if c and alg.weight_of(k) <= alg.w_max}

    def _same(self, other):
        if isinstance(other, FormElement):
            if other.alg is not self.alg:
                raise ShapeError("form elements from different algebras")
            return other
        return self.alg.function(other)

    def __add__(self, other):
        other = self._same(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out[k] + c if k in out else c
        return FormElement(self.alg, out)

    __radd__ = __add__

    def __neg__(self):
        return FormElement(self.alg, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._same(other))

    def __rsub__(self, other):
        return self._same(other) - self

    def __mul__(self, other):
        if not isinstance(other, FormElement):
            c = self.alg.ring.coerce(other)
            return FormElement(self.alg, {k: v * c for k, v in self.terms.items()})
        other = self._same(other)
        out = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                key, sign = self.alg._mono_mul(k1, k2)
                if key is None:
                    continue
                v = c1 * c2
                if sign < 0:
                    v = -v
                out[key] = out[key] + v if key in out else v
        return FormElement(self.alg, out)

    def __rmul__(self, other):
        # scalars and polynomials are even, so they commute
        return self * other

    def __eq__(self, other):
        if not isinstance(other, FormElement):
            other = self.alg.function(other)
        return (self - other).is_zero()

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def weights(self) -> set:
        return {self.alg.weight_of(k) for k in self.terms}

    def degrees(self) -> set:
        return {self.alg.degree_of(k) for k in self.terms}

    def bidegrees(self) -> set:
        return {(self.alg.degree_of(k), self.alg.weight_of(k)) for k in self.terms}

    def parity(self):
        ps = {(d + w) % 2 for d, w in self.bidegrees()}
        return ps.pop() if len(ps) == 1 else None

    def to_str(self) -> str:
        if not self.terms:
            return "0"
        alg, parts = self.alg, []
        for (mask, deta), c in sorted(self.terms.items(), key=lambda t: (t[0][0], t[0][1])):
            gens = [f"eta{i}" for i in range(alg.r) if mask >> i & 1]
            gens += [f"d{alg.ring.names[j]}" for j in range(alg.n) if mask >> (alg.r + j) & 1]
            gens += [f"deta{i}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(deta) if e]
            parts.append(f"({c.to_str()})" + ("*" + "∧".join(gens) if gens else ""))
        return " + ".join(parts)

    __str__ = to_str

    def __repr__(self):
        return f"FormElement({self.to_str()})"


def _odd_factors(alg: FormAlgebra, mask: int) -> list:
    return [b for b in range(alg.r + alg.n) if mask >> b & 1]


def _apply_derivation(f: FormElement, parity: int, on_coeff, on_odd, on_deta) -> FormElement:
    """Extend generator images to a derivation of the given parity.

    ``on_coeff(c)`` returns D(c) for an x-polynomial, ``on_odd(b)`` the image of
    odd generator bit ``b``, ``on_deta(i)`` the image of dη_i (each a
    FormElement or None for zero).
    """
    alg = f.alg
    out = alg.zero()
    zero_e = (0,) * alg.r
    for (mask, deta), c in f.terms.items():
        bits = _odd_factors(alg, mask)
        odd_mono = FormElement(alg, {(mask, zero_e): alg.ring.one()})
        even_mono = FormElement(alg, {(0, deta): alg.ring.one()})
        dc = on_coeff(c) if on_coeff is not None else None
        if dc:
            out = out + dc * odd_mono * even_mono
        for t, b in enumerate(bits):
            img = on_odd(b)
            if not img:
                continue
            pre = 0
            for bb in bits[:t]:
                pre |= 1 << bb
            post = 0
            for bb in bits[t + 1:]:
                post |= 1 << bb
            term = FormElement(alg, {(pre, zero_e): c}) * img * FormElement(alg, {(post, zero_e): alg.ring.one()})
            if parity and t % 2:
                term = -term
            out = out + term * even_mono
        if on_deta is None:
            continue
        for i, e in enumerate(deta):
            if not e:
                continue
            img = on_deta(i)
            if not img:
                continue
            rest = list(deta)
            rest[i] -= 1
            term = FormElement(alg, {(mask, zero_e): c}) * img * FormElement(alg, {(0, tuple(rest)): alg.ring.one()})
            if parity and len(bits) % 2:
                term = -term
            out = out + term * e
    return out


def d_internal(f: FormElement) -> FormElement:
    alg = f.alg
    vals = alg.base.differential_values
    jac = [J.gradient() for J in alg.base.moment]

    def on_odd(b):
        return alg.function(vals[b]) if b < alg.r else None

    def on_deta(i):
        return -alg.one_form(jac[i])

    return _apply_derivation(f, 1, None, on_odd, on_deta)


def d_derham(f: FormElement) -> FormElement:
    alg = f.alg
    for k in f.terms:
        if alg.weight_of(k) >= alg.w_max:
            raise TruncationError(f"d_derham of a weight-{alg.weight_of(k)} term exceeds w_max={alg.w_max}")

    def on_coeff(c):
        return alg.one_form(c.gradient())

    def on_odd(b):
        return alg.deta(b) if b < alg.r else None

    return _apply_derivation(f, 1, on_coeff, on_odd, None)


@dataclass
class ExtendedField:
    """Vector field on the Koszul CDGA: x-components and images of the η's."""

    x: tuple
    eta: tuple  # FormElements (η-linear) or None

    def on(self, alg: FormAlgebra):
        x = tuple(alg.ring.coerce(v) for v in self.x)
        if len(x) != alg.n:
            raise ShapeError(f"field has {len(x)} x-components, expected {alg.n}")
        eta = tuple(e if e is not None else alg.zero() for e in (self.eta or (None,) * alg.r))
        if len(eta) != alg.r:
            raise ShapeError(f"field has {len(eta)} η-components, expected {alg.r}")
        return x, eta


def contract(v: ExtendedField, f: FormElement) -> FormElement:
    alg = f.alg
    x, eta = v.on(alg)

    def on_odd(b):
        return alg.function(x[b - alg.r]) if b >= alg.r else None

    def on_deta(i):
        return eta[i]

    return _apply_derivation(f, 1, None, on_odd, on_deta)


def lie_derivative(v: ExtendedField, f: FormElement) -> FormElement:
    """Cartan formula L_v = d_dR ι_v + ι_v d_dR."""
    return d_derham(contract(v, f)) + contract(v, d_derham(f))


def lift_action(H: HamiltonianSpace, mu, alg: FormAlgebra | None = None) -> list:
    """a_ξi extended by δ_i(η_j) = -Σ_k c^k_ij η_k (requires a coadjoint-fixed μ)."""
    if not coadjoint_fixes(H.lie, mu):
        raise PreconditionError("level is not coadjoint-fixed; use an orbit shift")
    alg = alg or FormAlgebra(build_koszul(H.ring, H.moment, mu))
    out = []
    for i in range(H.r):
        eta = []
        for j in range(H.r):
            e = alg.zero()
            for k in range(H.r):
                c = H.lie.c[i][j][k]
                if c:
                    e = e - alg.eta(k) * c
            eta.append(e)
        out.append(ExtendedField(tuple(H.action[i]), tuple(eta)))
    return out


def lift_commutes(alg: FormAlgebra, fields: Sequence[ExtendedField]) -> Certificate:
    """[L_v, d_int] = 0 on the generators x, η, dx, dη."""
    cert = Certificate("lift_commutes")
    gens = [("x", j, alg.x(j)) for j in range(alg.n)] + [("eta", i, alg.eta(i)) for i in range(alg.r)]
    if alg.w_max >= 2:
        gens += [("dx", j, alg.dx(j)) for j in range(alg.n)] + [("deta", i, alg.deta(i)) for i in range(alg.r)]
    ok = True
    for idx, v in enumerate(fields):
        for kind, j, g in gens:
            comm = lie_derivative(v, d_internal(g)) - d_internal(lie_derivative(v, g))
            if comm and ok:
                cert.witnesses.append({"check": "commutator", "field": idx, "generator": f"{kind}{j}",
                                       "value": comm.to_str()})
                ok = False
    cert.checks["commutes"] = ok
    return cert


def lie_derivative_matrix(omega: PolyMatrix, field_: Sequence[MultiPoly]) -> PolyMatrix:
    """Coefficient path: with M = Ωᵀ (M_jk = ω(∂_j, ∂_k)) and (Da)_lj = ∂_j a_l,
    the matrix of L_a ω is a(M) + (Da)ᵀ M + M Da."""
    ring, n = omega.ring, omega.rows
    M = omega.transpose()
    Da = PolyMatrix(ring, [[field_[l].diff(j) for j in range(n)] for l in range(n)], n, n)
    aM = M.map(lambda f: apply_field(field_, f))
    return aM + Da.transpose() @ M + M @ Da


def invariant_by_matrix(H: HamiltonianSpace) -> bool:
    return all(lie_derivative_matrix(H.omega, a).is_zero() for a in H.action)


def certify_form(H: HamiltonianSpace, mu, w_max: int = 3, koszul: KoszulCdga | None = None) -> Certificate:
    """Strict closedness and invariance of ω = j*ω_X on the bicomplex."""
    if w_max < 3:
        raise ValueError("w_max >= 3 is needed to certify a weight-2 form")
    K = koszul or build_koszul(H.ring, H.moment, mu)
    alg = FormAlgebra(K, w_max)
    omega = alg.two_form(H.omega)
    cert = Certificate("form")
    dr = d_derham(omega)
    di = d_internal(omega)
    cert.checks["d_derham"] = dr.is_zero()
    cert.checks["d_internal"] = di.is_zero()
    if dr:
        cert.witnesses.append({"check": "d_derham", "value": dr.to_str()})
    if di:
        cert.witnesses.append({"check": "d_internal", "value": di.to_str()})
    fields = lift_action(H, K.mu, alg)
    inv = True
    for i, v in enumerate(fields):
        L = lie_derivative(v, omega)
        if L:
            if inv:
                cert.witnesses.append({"check": "invariant", "generator": i, "value": L.to_str()})
            inv = False
    cert.checks["invariant"] = inv
    lc = lift_commutes(alg, fields)
    cert.checks["lift_commutes"] = lc.ok
    cert.witnesses.extend(lc.witnesses)
    return cert


def strictly_closed(cert: Certificate) -> bool:
    return cert.checks["d_derham"] and cert.checks["d_internal"]


def invariant(cert: Certificate) -> bool:
    return cert.checks["invariant"] and cert.checks["lift_commutes"]


__all__ = [
    "FormAlgebra", "FormElement", "d_internal", "d_derham", "contract", "lie_derivative", "ExtendedField",
    "lift_action", "lift_commutes", "lie_derivative_matrix", "invariant_by_matrix", "certify_form",
    "strictly_closed", "invariant",
]
