"""Bounded cochain complexes of free R-modules, chain maps, cones, homology.

Cohomological indexing: slot ``i`` carries a free module of rank ``ranks[i]``
and the differential ``d_i`` maps slot ``i`` to slot ``i + 1`` (a matrix with
``rank(i+1)`` rows and ``rank(i)`` columns).

A complex may carry a coefficient ideal ``relations``: it is then a complex of
free R/I-modules, the d^2 = 0 check and all homology are taken modulo I.

Cone convention: ``cone(f)^i = source^(i+1) + target^i`` with differential
``[[-d_source, 0], [f, d_target]]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .errors import ChainMapError, ComplexError, ShapeError
from .groebner import ModulePresentation, Submodule, buchberger, quotient_presentation, syzygy_module
from .polycore import MultiPoly, PolyMatrix, PolyRing, as_order


def _first_nonzero(M: PolyMatrix, reduce=None, column_major=False):
    coords = ((i, j) for j in range(M.cols) for i in range(M.rows)) if column_major else \
        ((i, j) for i in range(M.rows) for j in range(M.cols))
    for i, j in coords:
        x = M[i, j]
        if reduce is not None:
            x = reduce(x)
        if x:
            return (i, j), x
    return None


def _infer_shifts(ring, lo, ranks, diffs):
    """Basis degrees making every differential homogeneous, or None."""
    hi = lo + len(ranks) - 1
    shifts = {hi: [0] * ranks[-1]}
    for i in range(hi - 1, lo - 1, -1):
        d = diffs[i - lo]
        tgt = shifts[i + 1]
        cur = []
        for a in range(ranks[i - lo]):
            s = None
            for b in range(ranks[i - lo + 1]):
                f = d[b, a]
                if not f:
                    continue
                h = f.homogeneous_degree()
                if h is None:
                    return None
                val = h + tgt[b]
                if s is None:
                    s = val
                elif s != val:
                    return None
            cur.append(0 if s is None else s)
        shifts[i] = cur
    return [shifts[i] for i in range(lo, hi + 1)]


class FreeComplex:
    """Validated bounded complex; ``differentials[k]`` is d at slot ``lo + k``."""

    def __init__(self, ring: PolyRing, lo: int, ranks: Sequence[int], differentials: Sequence[PolyMatrix],
                 relations: Sequence[MultiPoly] = (), shifts=None, order=None, check=True):
        ranks = list(ranks)
        if not ranks:
            raise ShapeError("a complex needs at least one slot")
        if len(differentials) != len(ranks) - 1:
            raise ShapeError(f"{len(ranks)} slots need {len(ranks) - 1} differentials")
        for k, d in enumerate(differentials):
            if d.ring != ring:
                raise ShapeError("differential over a different ring")
            if d.shape != (ranks[k + 1], ranks[k]):
                raise ShapeError(f"d at slot {lo + k} has shape {d.shape}, expected {(ranks[k + 1], ranks[k])}")
        self.ring = ring
        self.lo = lo
        self.ranks = ranks
        self.differentials = list(differentials)
        self.relations = tuple(r for r in relations if r)
        self.order = as_order(order)
        self._rel_gb = buchberger(self.relations, self.order, rank=1, ring=ring) if self.relations else None
        self.shifts = shifts if shifts is not None else _infer_shifts(ring, lo, ranks, self.differentials)
        if check:
            self._check_square_zero()

    @property
    def hi(self) -> int:
        return self.lo + len(self.ranks) - 1

    def degrees(self):
        return range(self.lo, self.hi + 1)

    def rank(self, i) -> int:
        if i < self.lo or i > self.hi:
            return 0
        return self.ranks[i - self.lo]

    def d(self, i) -> PolyMatrix:
        """Differential out of slot ``i`` (a zero matrix outside the range)."""
        if self.lo <= i < self.hi:
            return self.differentials[i - self.lo]
        return PolyMatrix.zeros(self.ring, self.rank(i + 1), self.rank(i))

    def reduce(self, f: MultiPoly) -> MultiPoly:
        return self._rel_gb.normal_form(f) if self._rel_gb is not None else f

    def _check_square_zero(self):
        for i in range(self.lo, self.hi - 1):
            comp = self.d(i + 1) @ self.d(i)
            bad = _first_nonzero(comp, self.reduce if self._rel_gb else None)
            if bad is not None:
                (r, c), val = bad
                raise ComplexError(f"d∘d != 0 at slot {i}, entry {(r, c)}: {val}", degree=i,
                                   entry=(r, c), value=val)

    def euler_characteristic(self) -> int:
        return sum((-1) ** (i % 2) * self.rank(i) for i in self.degrees())

    def __repr__(self):
        return f"FreeComplex(lo={self.lo}, ranks={self.ranks})"


def make_complex(ring: PolyRing, ranks, differentials, lo: int = 0, relations=(), order=None) -> FreeComplex:
    return FreeComplex(ring, lo, ranks, differentials, relations=relations, order=order)


def homology(cx: FreeComplex, i: int) -> ModulePresentation:
    """ker(d_i) / im(d_{i-1}) as a presentation (taken modulo the coefficient ideal)."""
    if not cx.lo <= i <= cx.hi:
        raise IndexError(f"degree {i} outside [{cx.lo}, {cx.hi}]")
    ring, order = cx.ring, cx.order
    n_i = cx.rank(i)
    zero = ring.zero()
    rels = list(cx.relations)
    shifts = cx.shifts[i - cx.lo] if cx.shifts is not None else None
    if n_i == 0:
        return ModulePresentation(ring, 0, None, Submodule(ring, 0, [], order), [], order)
    if i < cx.hi and cx.rank(i + 1) > 0:
        ker = syzygy_module(cx.d(i), order, relations=rels).generators
        numerator = [list(v) for v in ker]
    else:
        numerator = None
    den = []
    if i > cx.lo and cx.rank(i - 1) > 0:
        den = [list(c) for c in cx.d(i - 1).columns() if any(c)]
    for g in rels:
        for a in range(n_i):
            den.append([g if t == a else zero for t in range(n_i)])
    if numerator is not None:
        numerator = numerator + [v for v in den if v not in numerator]
    return quotient_presentation(numerator, den, rank=n_i, ring=ring, shifts=shifts, order=order)


class ChainMorphism:
    """Chain map between complexes over the same degree range."""

    def __init__(self, source: FreeComplex, target: FreeComplex, components: Sequence[PolyMatrix], check=True):
        if source.ring != target.ring:
            raise ShapeError("source and target over different rings")
        if (source.lo, source.hi) != (target.lo, target.hi):
            raise ShapeError("source and target must share a degree range")
        if len(components) != len(source.ranks):
            raise ShapeError("one component per degree is required")
        for k, f in enumerate(components):
            i = source.lo + k
            if f.shape != (target.rank(i), source.rank(i)):
                raise ShapeError(f"component at degree {i} has shape {f.shape}")
        self.source = source
        self.target = target
        self.components = list(components)
        if check:
            self._check_squares()

    @property
    def ring(self):
        return self.source.ring

    def f(self, i) -> PolyMatrix:
        if self.source.lo <= i <= self.source.hi:
            return self.components[i - self.source.lo]
        return PolyMatrix.zeros(self.ring, self.target.rank(i), self.source.rank(i))

    def square(self, i) -> PolyMatrix:
        """d_target ∘ f_i - f_{i+1} ∘ d_source at slot i."""
        return self.target.d(i) @ self.f(i) - self.f(i + 1) @ self.source.d(i)

    def _check_squares(self):
        red = self.target.reduce if self.target.relations else None
        for i in range(self.source.lo, self.source.hi):
            bad = _first_nonzero(self.square(i), red, column_major=True)
            if bad is not None:
                (r, c), val = bad
                raise ChainMapError(f"square at degree {i} fails at entry {(r, c)}: {val}",
                                    degree=i, entry=(r, c), value=val)

    @classmethod
    def identity(cls, cx: FreeComplex):
        return cls(cx, cx, [PolyMatrix.identity(cx.ring, r) for r in cx.ranks])

    @classmethod
    def zero(cls, source: FreeComplex, target: FreeComplex):
        return cls(source, target, [PolyMatrix.zeros(source.ring, target.rank(i), source.rank(i))
                                    for i in source.degrees()])


def _block2(ring, A, B, C, D) -> PolyMatrix:
    """[[A, B], [C, D]] for conforming blocks."""
    rows = A.rows + C.rows
    cols = A.cols + B.cols
    out = [[ring.zero()] * cols for _ in range(rows)]
    for blk, r0, c0 in ((A, 0, 0), (B, 0, A.cols), (C, A.rows, 0), (D, A.rows, A.cols)):
        for i in range(blk.rows):
            for j in range(blk.cols):
                out[r0 + i][c0 + j] = blk[i, j]
    return PolyMatrix(ring, out, rows, cols)


def cone(f: ChainMorphism) -> FreeComplex:
    """Mapping cone with differential [[-d_source, 0], [f, d_target]]."""
    S, T, ring = f.source, f.target, f.ring
    lo, hi = S.lo - 1, S.hi
    ranks = [S.rank(i + 1) + T.rank(i) for i in range(lo, hi + 1)]
    diffs = []
    for i in range(lo, hi):
        diffs.append(_block2(ring, -S.d(i + 1), PolyMatrix.zeros(ring, S.rank(i + 2), T.rank(i)),
                             f.f(i + 1), T.d(i)))
    return FreeComplex(ring, lo, ranks, diffs, relations=T.relations, order=T.order)


@dataclass
class QuasiIsoResult:
    value: bool
    method: str
    degree: int | None = None
    witness: list | None = None
    checked_degrees: list = field(default_factory=list)

    def __bool__(self):
        return self.value


def _unit_determinants(f: ChainMorphism) -> bool:
    for comp in f.components:
        if not comp.is_square():
            return False
        if comp.rows == 0:
            continue
        det = comp.determinant()
        if f.target.relations:
            det = f.target.reduce(det)
        if not det.is_constant() or not det:
            return False
    return True


def is_quasi_iso(f: ChainMorphism, homology_path: bool = False) -> QuasiIsoResult:
    """Decide whether ``f`` is a quasi-isomorphism.

    Fast path: every component square with nonzero constant determinant.
    Otherwise (or when ``homology_path`` is forced) every homology module of
    the cone is tested for vanishing; a failure reports the degree and a
    generator surviving in the quotient.
    """
    if not homology_path and _unit_determinants(f):
        return QuasiIsoResult(True, "determinant")
    c = cone(f)
    checked = []
    for i in c.degrees():
        h = homology(c, i)
        checked.append(i)
        if not h.is_zero():
            return QuasiIsoResult(False, "cone-homology", degree=i, witness=h.witness, checked_degrees=checked)
    return QuasiIsoResult(True, "cone-homology", checked_degrees=checked)


def dual_complex(cx: FreeComplex) -> FreeComplex:
    """Signed dual: slot i holds slot -i dualised, d^i = (-1)^(i+1) (d^(-i-1))^T."""
    lo, hi = -cx.hi, -cx.lo
    ranks = [cx.rank(-i) for i in range(lo, hi + 1)]
    diffs = []
    for i in range(lo, hi):
        m = cx.d(-i - 1).transpose()
        diffs.append(m if (i + 1) % 2 == 0 else -m)
    return FreeComplex(cx.ring, lo, ranks, diffs, relations=cx.relations, order=cx.order)


__all__ = [
    "FreeComplex", "ChainMorphism", "make_complex", "homology", "cone", "is_quasi_iso",
    "QuasiIsoResult", "dual_complex",
]
