"""Koszul model of the derived level set of a moment map.

``R ⊗ Λ(η_1..η_r)`` with ``dη_i = J_i - μ_i``.  The slot in degree ``-k`` has
the k-subsets of ``{0..r-1}`` as basis, in lexicographic order, and

    d(η_{s_0} ∧ ... ∧ η_{s_{k-1}}) = Σ_t (-1)^t (J_{s_t} - μ_{s_t}) η_{S \\ s_t}.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .chaincx import FreeComplex, homology
from .errors import ShapeError
from .groebner import GroebnerBasis, ModulePresentation, buchberger, ideal_dimension
from .polycore import MultiPoly, PolyMatrix, PolyRing, as_order, as_rational


def _subsets(r: int, k: int) -> list:
    return list(itertools.combinations(range(r), k))


@dataclass
class KoszulCdga:
    ring: PolyRing
    moment: tuple          # J_i
    mu: tuple              # μ_i
    base_relations: tuple = ()  # ideal the base ring is divided by (orbit constraints)
    order: object = None
    _complex: FreeComplex | None = field(default=None, repr=False)
    _tor: dict = field(default_factory=dict, repr=False)

    @property
    def r(self) -> int:
        return len(self.moment)

    @property
    def differential_values(self) -> list:
        """dη_i = J_i - μ_i."""
        return [J - m for J, m in zip(self.moment, self.mu)]

    def basis(self, degree: int) -> list:
        return _subsets(self.r, -degree)

    @property
    def complex(self) -> FreeComplex:
        if self._complex is None:
            self._complex = _koszul_complex(self)
        return self._complex


def _koszul_complex(K: KoszulCdga) -> FreeComplex:
    r, ring = K.r, K.ring
    vals = K.differential_values
    ranks = [len(_subsets(r, k)) for k in range(r, -1, -1)]
    diffs = []
    for k in range(r, 0, -1):
        src = _subsets(r, k)
        tgt = {S: i for i, S in enumerate(_subsets(r, k - 1))}
        rows = [[ring.zero()] * len(src) for _ in range(len(tgt))]
        for j, S in enumerate(src):
            for t, s in enumerate(S):
                face = S[:t] + S[t + 1:]
                v = vals[s]
                rows[tgt[face]][j] = v if t % 2 == 0 else -v
        diffs.append(PolyMatrix(ring, rows, len(tgt), len(src)))
    return FreeComplex(ring, -r, ranks, diffs, relations=K.base_relations, order=K.order)


def build_koszul(ring: PolyRing, J: Sequence[MultiPoly], mu: Sequence, base_relations=(), order=None) -> KoszulCdga:
    J = tuple(ring.coerce(f) for f in J)
    mu = tuple(as_rational(m) for m in mu)
    if len(J) != len(mu):
        raise ShapeError(f"{len(J)} moment components but {len(mu)} level values")
    if not J:
        raise ShapeError("at least one moment component is required")
    rels = tuple(ring.coerce(g) for g in base_relations)
    return KoszulCdga(ring, J, mu, rels, as_order(order))


def tor(K: KoszulCdga, i: int) -> ModulePresentation:
    """Tor_i, i.e. the homology of the Koszul complex in degree -i."""
    if not 0 <= i <= K.r:
        raise IndexError(f"Tor index {i} outside [0, {K.r}]")
    if i not in K._tor:
        K._tor[i] = homology(K.complex, -i)
    return K._tor[i]


def classical_truncation(K: KoszulCdga) -> GroebnerBasis:
    """Reduced basis of ⟨J - μ⟩ (plus base relations): the underived level set."""
    gens = list(K.differential_values) + list(K.base_relations)
    return buchberger(gens, K.order, rank=1, ring=K.ring)


def codimension(K: KoszulCdga):
    """codim of V(J - μ) inside the base; None when the level set is empty."""
    level = classical_truncation(K)
    if level.is_unit():
        return None
    if K.base_relations:
        base_dim = ideal_dimension(buchberger(list(K.base_relations), K.order, rank=1, ring=K.ring))
    else:
        base_dim = K.ring.nvars
    return base_dim - ideal_dimension(level)


def is_complete_intersection(K: KoszulCdga) -> bool:
    """True iff Tor_i vanishes for every 1 <= i <= r."""
    return all(tor(K, i).is_zero() for i in range(1, K.r + 1))


def codimension_criterion(K: KoszulCdga) -> bool:
    """Independent check: codim V(J - μ) = r (an empty level set counts as exact)."""
    c = codimension(K)
    return True if c is None else c == K.r


def euler_characteristic(K: KoszulCdga) -> int:
    return sum((-1) ** k * len(_subsets(K.r, k)) for k in range(K.r + 1))


__all__ = [
    "KoszulCdga", "build_koszul", "tor", "classical_truncation", "is_complete_intersection",
    "codimension", "codimension_criterion", "euler_characteristic",
]
