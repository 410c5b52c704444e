"""Gröbner bases for ideals and submodules of free modules over Q[x].

Module elements are handled internally as term dictionaries keyed by
``(position, e_1, ..., e_n)``; the order is position over term with the
chosen monomial order underneath and position 0 largest.  Ideals are rank-1
modules.
"""

from __future__ import annotations

import functools
import itertools
from fractions import Fraction
from math import comb
from typing import Sequence

from ._backend import kernels
from .errors import ContainmentError, NotGradedError, ShapeError
from .polycore import MonomialOrder, MultiPoly, PolyMatrix, PolyRing, as_order

__all__ = [
    "MonomialOrder", "GroebnerBasis", "Submodule", "ModulePresentation", "buchberger",
    "normal_form", "syzygy_module", "ideal_dimension", "quotient_presentation",
    "to_vdict", "from_vdict",
]


def to_vdict(vector: Sequence[MultiPoly]) -> dict:
    out = {}
    for pos, f in enumerate(vector):
        for m, c in f.items():
            out[(pos,) + m] = c
    return out


def from_vdict(ring: PolyRing, rank: int, terms: dict) -> list:
    parts = [dict() for _ in range(rank)]
    for m, c in terms.items():
        parts[m[0]][m[1:]] = c
    return [MultiPoly(ring, p) for p in parts]


def _as_vectors(generators, rank=None):
    """Normalise ideal or module generators to (ring, rank, [vector, ...])."""
    gens = list(generators)
    vectors = []
    ideal = None
    for g in gens:
        if isinstance(g, MultiPoly):
            if ideal is False:
                raise ShapeError("mixed polynomial and vector generators")
            ideal = True
            vectors.append([g])
        else:
            if ideal is True:
                raise ShapeError("mixed polynomial and vector generators")
            ideal = False
            vectors.append(list(g))
    if rank is None:
        if not vectors:
            raise ValueError("rank is required for an empty generator list")
        rank = len(vectors[0])
    ring = None
    for v in vectors:
        if len(v) != rank:
            raise ShapeError(f"generator of length {len(v)} in a rank-{rank} module")
        for f in v:
            if ring is None:
                ring = f.ring
            f = ring.coerce(f)
    return ring, rank, vectors


def _monic(terms, order: MonomialOrder):
    lm = kernels.leading(terms, order.code, order.block)
    c = terms[lm]
    if c == 1:
        return lm, terms
    inv = 1 / c
    return lm, {m: v * inv for m, v in terms.items()}


class GroebnerBasis:
    """Reduced Gröbner basis of a submodule of R^rank (an ideal when rank == 1)."""

    def __init__(self, ring: PolyRing, rank: int, order: MonomialOrder, elements, reduced=True):
        self.ring = ring
        self.rank = rank
        self.order = order
        self.elements = tuple(elements)  # (lead, terms) pairs, monic
        self.reduced = reduced
        self._basis = [(lm, t) for lm, t in self.elements]

    @property
    def leads(self) -> list:
        return [lm for lm, _ in self.elements]

    @property
    def generators(self) -> list:
        if self.rank == 1:
            return [from_vdict(self.ring, 1, t)[0] for _, t in self.elements]
        return [from_vdict(self.ring, self.rank, t) for _, t in self.elements]

    @property
    def vectors(self) -> list:
        return [from_vdict(self.ring, self.rank, t) for _, t in self.elements]

    def __len__(self):
        return len(self.elements)

    def reduce_terms(self, terms: dict) -> dict:
        if not terms or not self._basis:
            return dict(terms)
        return kernels.normal_form(terms, self._basis, self.order.code, self.order.block)

    def normal_form(self, f):
        if isinstance(f, MultiPoly):
            if self.rank != 1:
                raise ShapeError("polynomial reduced against a module basis")
            f = self.ring.coerce(f)
            return from_vdict(self.ring, 1, self.reduce_terms(to_vdict([f])))[0]
        vec = [self.ring.coerce(x) for x in f]
        if len(vec) != self.rank:
            raise ShapeError(f"vector of length {len(vec)} reduced in rank {self.rank}")
        return from_vdict(self.ring, self.rank, self.reduce_terms(to_vdict(vec)))

    def contains(self, f) -> bool:
        if isinstance(f, MultiPoly):
            return not self.reduce_terms(to_vdict([self.ring.coerce(f)]))
        return not self.reduce_terms(to_vdict([self.ring.coerce(x) for x in f]))

    def is_unit(self) -> bool:
        """True for the unit ideal (or the whole free module)."""
        found = {lm[0] for lm in self.leads if not any(lm[1:])}
        return len(found) == self.rank

    def leading_exponents(self, position=0) -> list:
        return [lm[1:] for lm in self.leads if lm[0] == position]

    def to_strings(self) -> list:
        if self.rank == 1:
            return [g.to_str(self.order) for g in self.generators]
        return [[f.to_str(self.order) for f in v] for v in self.vectors]

    def __eq__(self, other):
        return (isinstance(other, GroebnerBasis) and self.ring == other.ring and self.rank == other.rank
                and self.order == other.order and self.elements == other.elements)

    def __repr__(self):
        return f"GroebnerBasis({self.to_strings()}, order={self.order!r})"


def _buchberger_terms(elems: list, rank: int, order: MonomialOrder, ideal: bool) -> list:
    """Core loop over monic (lead, terms) pairs; returns the reduced basis."""
    code, block = order.code, order.block
    G: list = []
    pending: set = set()

    def add(pair):
        G.append(pair)
        t = len(G) - 1
        lt = pair[0]
        for i in range(t):
            if G[i][0][0] == lt[0]:
                pending.add((i, t))

    for lm, t in elems:
        r = kernels.normal_form(t, G, code, block) if G else t
        if r:
            add(_monic(r, order))

    def pair_key(p):
        L = kernels.lcm(G[p[0]][0], G[p[1]][0])
        return L


    def cmp_pairs(p, q):
        Lp, Lq = pair_key(p), pair_key(q)
        dp, dq = sum(Lp[1:]), sum(Lq[1:])
        if dp != dq:
            return -1 if dp < dq else 1
        c = kernels.mono_cmp(Lp, Lq, code, block)
        if c:
            return c
        return -1 if p < q else (1 if p > q else 0)

    pkey = functools.cmp_to_key(cmp_pairs)
    while pending:
        i, j = min(pending, key=pkey)
        pending.discard((i, j))
        li, lj = G[i][0], G[j][0]
        L = kernels.lcm(li, lj)
        if ideal and all(min(a, b) == 0 for a, b in zip(li[1:], lj[1:])):
            continue
        skip = False
        for k in range(len(G)):
            if k == i or k == j:
                continue
            if kernels.divides(G[k][0], L):
                a, b = (min(i, k), max(i, k)), (min(j, k), max(j, k))
                if a not in pending and b not in pending:
                    skip = True
                    break
        if skip:
            continue
        s = kernels.shift_terms(G[i][1], Fraction(1), kernels.quotient(L, li))
        for m, c in kernels.shift_terms(G[j][1], Fraction(-1), kernels.quotient(L, lj)).items():
            v = s.get(m, 0) + c
            if v:
                s[m] = v
            else:
                s.pop(m, None)
        if not s:
            continue
        r = kernels.normal_form(s, G, code, block)
        if r:
            add(_monic(r, order))

    # minimalise
    minimal = []
    for idx, (lm, t) in enumerate(G):
        dominated = False
        for jdx, (lm2, _) in enumerate(G):
            if jdx == idx:
                continue
            if kernels.divides(lm2, lm) and (lm2 != lm or jdx < idx):
                dominated = True
                break
        if not dominated:
            minimal.append((lm, t))
    # interreduce
    reduced = list(minimal)
    for idx in range(len(reduced)):
        others = reduced[:idx] + reduced[idx + 1:]
        lm, t = reduced[idx]
        r = kernels.normal_form(t, others, code, block) if others else t
        reduced[idx] = _monic(r, order)
    key = functools.cmp_to_key(lambda a, b: kernels.mono_cmp(a[0], b[0], code, block))
    reduced.sort(key=key, reverse=True)
    return reduced


def buchberger(generators, order=None, rank: int | None = None, ring: PolyRing | None = None) -> GroebnerBasis:
    """Reduced Gröbner basis of the ideal or submodule spanned by ``generators``.

    Pairs are processed by the normal strategy (smallest lcm degree first);
    Buchberger's coprime criterion (ideals only) and chain criterion are both
    applied.  The output is the unique reduced basis, sorted by decreasing
    leading monomial, so it does not depend on the input order.
    """
    order = as_order(order)
    g_ring, rank, vectors = _as_vectors(generators, rank)
    ring = ring or g_ring
    if ring is None:
        raise ValueError("cannot infer the ring of an empty generator list")
    elems = []
    for v in vectors:
        t = to_vdict([ring.coerce(f) for f in v])
        if t:
            elems.append(_monic(t, order))
    ideal = rank == 1
    basis = _buchberger_terms(elems, rank, order, ideal) if elems else []
    return GroebnerBasis(ring, rank, order, basis)


def normal_form(f, gb: GroebnerBasis):
    """Remainder of ``f`` on division by ``gb``; zero iff ``f`` is in the span."""
    return gb.normal_form(f)


def _vec_homogeneous_degree(vec, shifts):
    """Degree of a vector under component shifts; None if inhomogeneous, 'zero' if 0."""
    deg = None
    for f, s in zip(vec, shifts):
        for m, _ in f.items():
            d = sum(m) + s
            if deg is None:
                deg = d
            elif deg != d:
                return None
    return "zero" if deg is None else deg


class Submodule:
    """Submodule of R^rank given by generators; the Gröbner basis is lazy."""

    def __init__(self, ring: PolyRing, rank: int, generators: Sequence[Sequence[MultiPoly]], order=None):
        self.ring = ring
        self.rank = rank
        self.generators = [tuple(ring.coerce(x) for x in v) for v in generators]
        for v in self.generators:
            if len(v) != rank:
                raise ShapeError(f"generator of length {len(v)} in rank {rank}")
        self.order = as_order(order)
        self._gb = None

    @classmethod
    def full(cls, ring, rank, order=None):
        return cls(ring, rank, [[ring.one() if i == j else ring.zero() for i in range(rank)]
                                for j in range(rank)], order)

    @property
    def gb(self) -> GroebnerBasis:
        if self._gb is None:
            self._gb = buchberger(self.generators, self.order, rank=self.rank, ring=self.ring)
        return self._gb

    @property
    def matrix(self) -> PolyMatrix:
        """Generators as the columns of a matrix."""
        return PolyMatrix.from_columns(self.ring, self.generators, self.rank)

    def contains(self, vec) -> bool:
        return self.gb.contains(vec)

    def is_zero(self) -> bool:
        return all(not f for v in self.generators for f in v)

    def __len__(self):
        return len(self.generators)

    def __repr__(self):
        return f"Submodule(rank={self.rank}, {len(self.generators)} generators)"


def syzygy_module(M: PolyMatrix, order=None, relations: Sequence[MultiPoly] = ()) -> Submodule:
    """Generators of ``{v : M v = 0}`` (or ``M v in I R^rows`` when relations span I).

    Each column m_j is lifted to (m_j, e_j) in R^(rows + cols); a position-over-term
    Gröbner basis with the first ``rows`` positions largest then tracks every
    reduction of the m_j in the e-block, and the basis elements that vanish on
    the first block are exactly the syzygies.  Every returned generator is
    checked by substitution.
    """
    order = as_order(order)
    ring, s, k = M.ring, M.rows, M.cols
    zero = ring.zero()
    rels = [ring.coerce(g) for g in relations if g]
    if k == 0:
        return Submodule(ring, 0, [], order)
    aug = []
    for j in range(k):
        aug.append(list(M.column(j)) + [ring.one() if t == j else zero for t in range(k)])
    for g in rels:
        for a in range(s):
            aug.append([g if t == a else zero for t in range(s + k)])
    gb = buchberger(aug, order, rank=s + k, ring=ring)
    syz = []
    for lm, terms in gb.elements:
        if lm[0] >= s:
            vec = from_vdict(ring, s + k, terms)[s:]
            syz.append(vec)
    rel_gb = buchberger(rels, order, rank=1, ring=ring) if rels else None
    for v in syz:
        image = M.apply(v)
        for x in image:
            ok = rel_gb.contains(x) if rel_gb is not None else not x
            if not ok:
                raise AssertionError(f"syzygy check failed: M*v has entry {x}")
    return Submodule(ring, k, syz, order)


def ideal_dimension(gb: GroebnerBasis) -> int:
    """Krull dimension of R/I from the leading-term ideal; -1 for the unit ideal.

    Uses the characterisation as the largest set of variables containing the
    support of no leading monomial.
    """
    if gb.rank != 1:
        raise ShapeError("ideal_dimension expects an ideal")
    if gb.is_unit():
        return -1
    n = gb.ring.nvars
    supports = [frozenset(i for i, e in enumerate(lm) if e) for lm in gb.leading_exponents()]
    for size in range(n, -1, -1):
        for subset in itertools.combinations(range(n), size):
            S = frozenset(subset)
            if not any(sup <= S for sup in supports):
                return size
    return 0


def _standard_count(gb: GroebnerBasis | None, n: int, rank: int, shifts, d: int) -> int:
    """Number of module monomials of degree d outside the leading-term module."""
    total = 0
    leads = {}
    if gb is not None:
        for lm in gb.leads:
            leads.setdefault(lm[0], []).append(lm[1:])
    for a in range(rank):
        k = d - shifts[a]
        if k < 0:
            continue
        lms = leads.get(a, [])
        if not lms:
            total += comb(n + k - 1, k) if n else (1 if k == 0 else 0)
            continue
        if any(not any(lm) for lm in lms):
            continue
        for combo in itertools.combinations_with_replacement(range(n), k):
            e = [0] * n
            for i in combo:
                e[i] += 1
            if not any(all(x <= y for x, y in zip(lm, e)) for lm in lms):
                total += 1
    return total


class ModulePresentation:
    """The subquotient numerator / relations of R^rank.

    ``numerator`` of ``None`` means the whole free module.  ``relations`` are
    the columns of :attr:`relation_matrix`.  ``shifts`` are the degrees of the
    ambient basis vectors, used for graded dimensions.
    """

    def __init__(self, ring: PolyRing, rank: int, numerator: Submodule | None, relations: Submodule,
                 shifts: Sequence[int] | None = None, order=None):
        self.ring = ring
        self.rank = rank
        self.numerator = numerator
        self.relations = relations
        self.shifts = list(shifts) if shifts is not None else [0] * rank
        self.order = as_order(order)
        self._zero = None
        self._witness = None

    @property
    def relation_matrix(self) -> PolyMatrix:
        return self.relations.matrix

    def numerator_generators(self) -> list:
        if self.numerator is None:
            return [tuple(self.ring.one() if i == j else self.ring.zero() for i in range(self.rank))
                    for j in range(self.rank)]
        return self.numerator.generators

    def _compute(self):
        if self._zero is not None:
            return
        rel_gb = self.relations.gb
        for v in self.numerator_generators():
            if not rel_gb.contains(v):
                self._zero = False
                self._witness = list(v)
                return
        self._zero = True

    def is_zero(self) -> bool:
        self._compute()
        return self._zero

    @property
    def witness(self):
        """A numerator generator that is nonzero in the quotient, or None."""
        self._compute()
        return self._witness

    def is_graded(self) -> bool:
        parts = [self.relations] if self.numerator is None else [self.relations, self.numerator]
        return all(self._homogeneous(sub) for sub in parts)

    def _homogeneous(self, sub: Submodule) -> bool:
        # a submodule is graded iff its reduced basis is, whatever the generators look like
        def hom(vecs):
            return all(_vec_homogeneous_degree(v, self.shifts) is not None for v in vecs)
        return hom(sub.generators) or sub.is_zero() or hom(sub.gb.vectors)

    def graded_dimension(self, d: int) -> int:
        """dim_Q of the degree-d piece; raises NotGradedError for inhomogeneous data."""
        if self.is_zero():
            return 0
        if not self.is_graded():
            raise NotGradedError("graded dimension requested for inhomogeneous data")
        n = self.ring.nvars
        rel_gb = self.relations.gb if not self.relations.is_zero() else None
        quot_rel = _standard_count(rel_gb, n, self.rank, self.shifts, d)
        if self.numerator is None:
            return quot_rel
        num_gb = self.numerator.gb if not self.numerator.is_zero() else None
        quot_num = _standard_count(num_gb, n, self.rank, self.shifts, d)
        return quot_rel - quot_num

    def graded_dimensions(self, bound: int):
        """Dimensions in degrees 0..bound, or None when not graded.

        The zero module counts as graded whatever its presentation.
        """
        if self.is_zero():
            return [0] * (bound + 1)
        if not self.is_graded():
            return None
        return [self.graded_dimension(d) for d in range(bound + 1)]

    def __repr__(self):
        return f"ModulePresentation(rank={self.rank}, zero={self.is_zero()})"


def quotient_presentation(numerator_gens, denominator_gens, rank: int | None = None,
                          ring: PolyRing | None = None, shifts=None, order=None) -> ModulePresentation:
    """Presentation of span(numerator) / span(denominator).

    ``numerator_gens=None`` denotes the whole free module of ``rank``.
    Containment of the denominator in the numerator is checked by normal
    forms; a violating generator is reported as the witness.
    """
    order = as_order(order)
    vecs = [list(v) for v in (denominator_gens or [])]
    if numerator_gens is not None:
        num_vecs = [list(v) for v in numerator_gens]
    else:
        num_vecs = None
    sample = (vecs or num_vecs or [[]])
    if rank is None:
        rank = len(sample[0]) if sample and sample[0] is not None else 0
    if ring is None:
        for v in (vecs + (num_vecs or [])):
            for f in v:
                ring = f.ring
                break
            if ring:
                break
    if ring is None:
        raise ValueError("cannot infer the ring")
    den = Submodule(ring, rank, vecs, order)
    num = Submodule(ring, rank, num_vecs, order) if num_vecs is not None else None
    if num is not None and vecs:
        num_gb = num.gb
        for v in vecs:
            if not num_gb.contains(v):
                raise ContainmentError("denominator generator outside the numerator", witness=v)
    return ModulePresentation(ring, rank, num, den, shifts, order)
