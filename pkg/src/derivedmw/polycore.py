"""Exact arithmetic: polynomial rings over Q, sparse polynomials, dense matrices.

Coefficients are :class:`fractions.Fraction`, which already keeps numerator and
denominator in lowest terms with a positive denominator.
"""

from __future__ import annotations

import functools
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from ._backend import DEGREVLEX, ELIM, LEX, kernels
from .errors import RingMismatchError, ShapeError

Rational = Fraction


def as_rational(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a coefficient")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"cannot coerce {value!r} to a rational")


class MonomialOrder:
    """A monomial order by tag.

    ``degrevlex`` and ``lex`` compare whole exponent vectors.  ``elim`` with
    ``block=k`` is the block order that compares the first ``k`` variables by
    degrevlex first and the remaining ones only on ties; it eliminates the
    first block.
    """

    _codes = {"degrevlex": DEGREVLEX, "lex": LEX, "elim": ELIM}

    __slots__ = ("tag", "block", "code")

    def __init__(self, tag: str = "degrevlex", block: int = 0):
        if tag not in self._codes:
            raise ValueError(f"unknown monomial order {tag!r}")
        if tag == "elim" and block < 0:
            raise ValueError("elimination block must be non-negative")
        self.tag = tag
        self.block = block if tag == "elim" else 0
        self.code = self._codes[tag]

    def cmp(self, a: tuple, b: tuple) -> int:
        return kernels.exps_cmp(a, b, self.code, self.block)

    def sort_key(self):
        return functools.cmp_to_key(self.cmp)

    def __eq__(self, other):
        return isinstance(other, MonomialOrder) and (self.tag, self.block) == (other.tag, other.block)

    def __hash__(self):
        return hash((self.tag, self.block))

    def __repr__(self):
        if self.tag == "elim":
            return f"MonomialOrder('elim', block={self.block})"
        return f"MonomialOrder({self.tag!r})"


DEFAULT_ORDER = MonomialOrder("degrevlex")


def as_order(order) -> MonomialOrder:
    if order is None:
        return DEFAULT_ORDER
    if isinstance(order, MonomialOrder):
        return order
    return MonomialOrder(order)


class PolyRing:
    """Q[x_1, ..., x_n]; two rings are the same iff their variable names agree."""

    __slots__ = ("names", "_index")

    def __init__(self, names: Iterable[str]):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        self.names = names
        self._index = {v: i for i, v in enumerate(names)}

    @property
    def nvars(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        return self._index[name]

    def __contains__(self, name):
        return name in self._index

    def zero(self) -> "MultiPoly":
        return MultiPoly(self, {})

    def one(self) -> "MultiPoly":
        return self.const(1)

    def const(self, c) -> "MultiPoly":
        c = as_rational(c)
        return MultiPoly(self, {(0,) * self.nvars: c} if c else {})

    def gen(self, i) -> "MultiPoly":
        if isinstance(i, str):
            i = self._index[i]
        if not 0 <= i < self.nvars:
            raise IndexError(f"variable index {i} out of range for {self.nvars} variables")
        e = [0] * self.nvars
        e[i] = 1
        return MultiPoly(self, {tuple(e): Fraction(1)})

    @property
    def gens(self) -> tuple:
        return tuple(self.gen(i) for i in range(self.nvars))

    def monomial(self, exps, coeff=1) -> "MultiPoly":
        exps = tuple(exps)
        if len(exps) != self.nvars:
            raise ShapeError("exponent vector length differs from ring arity")
        c = as_rational(coeff)
        return MultiPoly(self, {exps: c} if c else {})

    def coerce(self, value) -> "MultiPoly":
        if isinstance(value, MultiPoly):
            if value.ring != self:
                raise RingMismatchError(f"{value.ring} is not {self}")
            return value
        return self.const(value)

    def extend(self, names: Iterable[str]) -> "PolyRing":
        return PolyRing(self.names + tuple(names))

    def __eq__(self, other):
        return isinstance(other, PolyRing) and self.names == other.names

    def __hash__(self):
        return hash(self.names)

    def __repr__(self):
        return f"PolyRing({', '.join(self.names)})"


def _check(a: "MultiPoly", b) -> "MultiPoly":
    if isinstance(b, MultiPoly):
        if b.ring != a.ring:
            raise RingMismatchError(f"cannot combine polynomials over {a.ring} and {b.ring}")
        return b
    if isinstance(b, (int, Fraction)) and not isinstance(b, bool):
        return a.ring.const(b)
    return NotImplemented


class MultiPoly:
    """Immutable sparse polynomial: a mapping exponent tuple -> nonzero Fraction."""

    __slots__ = ("ring", "_terms", "_hash")

    def __init__(self, ring: PolyRing, terms: Mapping[tuple, object]):
        n = ring.nvars
        clean = {}
        for m, c in terms.items():
            if len(m) != n:
                raise ShapeError(f"exponent vector {m} has length {len(m)}, ring arity is {n}")
            c = as_rational(c)
            if c:
                clean[tuple(m)] = c
        self.ring = ring
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, ring, terms):
        obj = cls.__new__(cls)
        obj.ring = ring
        obj._terms = terms
        obj._hash = None
        return obj

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self):
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and not any(next(iter(self._terms))))

    def constant_value(self) -> Fraction:
        return self._terms.get((0,) * self.ring.nvars, Fraction(0))

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(m) for m in self._terms), default=-1)

    def homogeneous_degree(self):
        """The common degree of all terms, ``None`` if inhomogeneous or zero."""
        degs = {sum(m) for m in self._terms}
        return degs.pop() if len(degs) == 1 else None

    def is_homogeneous(self) -> bool:
        return not self._terms or self.homogeneous_degree() is not None

    def variables(self) -> set:
        used = set()
        for m in self._terms:
            used.update(i for i, e in enumerate(m) if e)
        return used

    # arithmetic -------------------------------------------------------------
    def __add__(self, other):
        other = _check(self, other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for m, c in other._terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return MultiPoly._raw(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw(self.ring, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        other = _check(self, other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = _check(self, other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            c = Fraction(other)
            if not c:
                return self.ring.zero()
            return MultiPoly._raw(self.ring, {m: v * c for m, v in self._terms.items()})
        other = _check(self, other)
        if other is NotImplemented:
            return other
        return MultiPoly._raw(self.ring, kernels.poly_mul(self._terms, other._terms))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.ring == other.ring and self._terms == other._terms
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self._terms == self.ring.const(other)._terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self._terms.items())))
        return self._hash

    # calculus and evaluation -----------------------------------------------
    def diff(self, i: int) -> "MultiPoly":
        """Formal partial derivative with respect to variable ``i``."""
        if isinstance(i, str):
            i = self.ring.index(i)
        if not 0 <= i < self.ring.nvars:
            raise IndexError(f"variable index {i} out of range for {self.ring.nvars} variables")
        out = {}
        for m, c in self._terms.items():
            e = m[i]
            if e:
                mm = m[:i] + (e - 1,) + m[i + 1:]
                out[mm] = c * e
        return MultiPoly._raw(self.ring, out)

    def gradient(self) -> list:
        return [self.diff(i) for i in range(self.ring.nvars)]

    def evaluate(self, point: Sequence) -> Fraction:
        if len(point) != self.ring.nvars:
            raise ShapeError(f"point has {len(point)} coordinates, ring arity is {self.ring.nvars}")
        pt = [as_rational(v) for v in point]
        total = Fraction(0)
        for m, c in self._terms.items():
            v = c
            for x, e in zip(pt, m):
                if e:
                    v *= x ** e
            total += v
        return total

    def compose(self, images: Sequence["MultiPoly"], target: PolyRing | None = None) -> "MultiPoly":
        """Substitute ``images[i]`` for variable ``i``."""
        if len(images) != self.ring.nvars:
            raise ShapeError("one image per variable is required")
        if target is None:
            if not images:
                raise ShapeError("target ring required for a ring with no variables")
            target = images[0].ring
        images = [target.coerce(g) for g in images]
        powers: dict = {}

        def power(i, e):
            key = (i, e)
            if key not in powers:
                powers[key] = images[i] ** e
            return powers[key]

        total = target.zero()
        for m, c in self._terms.items():
            t = target.const(c)
            for i, e in enumerate(m):
                if e:
                    t = t * power(i, e)
            total = total + t
        return total

    def embed(self, target: PolyRing, positions: Sequence[int] | None = None) -> "MultiPoly":
        """Reinterpret in ``target`` by variable name (or explicit positions)."""
        if positions is None:
            positions = [target.index(v) for v in self.ring.names]
        n = target.nvars
        out = {}
        for m, c in self._terms.items():
            e = [0] * n
            for i, k in zip(positions, m):
                e[i] = k
            out[tuple(e)] = c
        return MultiPoly._raw(target, out)

    # orders and printing ---------------------------------------------------
    def leading_monomial(self, order=None) -> tuple:
        order = as_order(order)
        if not self._terms:
            raise ValueError("zero polynomial has no leading monomial")
        return kernels.leading_exps(self._terms, order.code, order.block)

    def leading_coefficient(self, order=None) -> Fraction:
        return self._terms[self.leading_monomial(order)]

    def sorted_terms(self, order=None) -> list:
        key = as_order(order).sort_key()
        return sorted(self._terms.items(), key=lambda t: key(t[0]), reverse=True)

    def to_str(self, order=None) -> str:
        if not self._terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms(order):
            factors = []
            for name, e in zip(self.ring.names, m):
                if e == 1:
                    factors.append(name)
                elif e:
                    factors.append(f"{name}^{e}")
            mag = abs(c)
            if factors:
                body = "*".join(factors)
                if mag != 1:
                    body = f"{_fmt(mag)}*{body}"
            else:
                body = _fmt(mag)
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"MultiPoly({self.to_str()!s} in {self.ring.names})"


def _fmt(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


class PolyMatrix:
    """Dense rectangular matrix of polynomials over a single ring."""

    __slots__ = ("ring", "rows", "cols", "_e")

    def __init__(self, ring: PolyRing, entries: Sequence[Sequence], rows: int | None = None,
                 cols: int | None = None):
        data = tuple(tuple(ring.coerce(x) for x in row) for row in entries)
        r = len(data) if rows is None else rows
        if len(data) != r:
            raise ShapeError(f"expected {r} rows, got {len(data)}")
        c = cols if cols is not None else (len(data[0]) if data else 0)
        for row in data:
            if len(row) != c:
                raise ShapeError("matrix rows have unequal lengths")
        self.ring = ring
        self.rows = r
        self.cols = c
        self._e = data

    @classmethod
    def zeros(cls, ring, rows, cols):
        z = ring.zero()
        return cls(ring, [[z] * cols for _ in range(rows)], rows, cols)

    @classmethod
    def identity(cls, ring, n):
        return cls(ring, [[1 if i == j else 0 for j in range(n)] for i in range(n)], n, n)

    @classmethod
    def from_columns(cls, ring, columns: Sequence[Sequence], rows: int):
        cols = [[ring.coerce(x) for x in col] for col in columns]
        for col in cols:
            if len(col) != rows:
                raise ShapeError("column length differs from row count")
        return cls(ring, [[cols[j][i] for j in range(len(cols))] for i in range(rows)], rows, len(cols))

    @classmethod
    def block_diag(cls, ring, blocks: Sequence["PolyMatrix"]):
        rows = sum(b.rows for b in blocks)
        cols = sum(b.cols for b in blocks)
        out = [[ring.zero()] * cols for _ in range(rows)]
        r0 = c0 = 0
        for b in blocks:
            for i in range(b.rows):
                for j in range(b.cols):
                    out[r0 + i][c0 + j] = b[i, j]
            r0 += b.rows
            c0 += b.cols
        return cls(ring, out, rows, cols)

    @property
    def shape(self):
        return (self.rows, self.cols)

    def __getitem__(self, ij):
        i, j = ij
        return self._e[i][j]

    def row(self, i) -> tuple:
        return self._e[i]

    def column(self, j) -> tuple:
        return tuple(self._e[i][j] for i in range(self.rows))

    def columns(self) -> list:
        return [self.column(j) for j in range(self.cols)]

    def entries(self):
        return self._e

    def _same(self, other):
        if not isinstance(other, PolyMatrix):
            raise TypeError("expected a PolyMatrix")
        if other.ring != self.ring:
            raise RingMismatchError("matrices over different rings")

    def __add__(self, other):
        self._same(other)
        if self.shape != other.shape:
            raise ShapeError(f"cannot add {self.shape} and {other.shape}")
        return PolyMatrix(self.ring, [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self._e, other._e)],
                          self.rows, self.cols)

    def __neg__(self):
        return PolyMatrix(self.ring, [[-a for a in row] for row in self._e], self.rows, self.cols)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "PolyMatrix":
        c = self.ring.coerce(c)
        return PolyMatrix(self.ring, [[c * a for a in row] for row in self._e], self.rows, self.cols)

    def __matmul__(self, other):
        self._same(other)
        if self.cols != other.rows:
            raise ShapeError(f"cannot multiply {self.shape} by {other.shape}")
        z = self.ring.zero()
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = z
                for k in range(self.cols):
                    a = self._e[i][k]
                    if a:
                        b = other._e[k][j]
                        if b:
                            acc = acc + a * b
                row.append(acc)
            out.append(row)
        return PolyMatrix(self.ring, out, self.rows, other.cols)

    def apply(self, vector: Sequence) -> list:
        if len(vector) != self.cols:
            raise ShapeError("vector length differs from column count")
        vec = [self.ring.coerce(v) for v in vector]
        out = []
        for i in range(self.rows):
            acc = self.ring.zero()
            for a, v in zip(self._e[i], vec):
                if a and v:
                    acc = acc + a * v
            out.append(acc)
        return out

    def transpose(self) -> "PolyMatrix":
        return PolyMatrix(self.ring, [self.column(j) for j in range(self.cols)], self.cols, self.rows)

    @property
    def T(self):
        return self.transpose()

    def is_zero(self) -> bool:
        return all(not a for row in self._e for a in row)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_antisymmetric(self) -> bool:
        return self.is_square() and all(
            self._e[i][j] == -self._e[j][i] for i in range(self.rows) for j in range(i, self.cols))

    def determinant(self) -> MultiPoly:
        """Cofactor expansion with memoised minors (division free)."""
        if not self.is_square():
            raise ShapeError(f"determinant of non-square {self.shape} matrix")
        n = self.rows
        if n == 0:
            return self.ring.one()
        e = self._e
        memo: dict = {}

        def minor(row, cols):
            # determinant of rows row..n-1 restricted to column tuple cols
            if row == n:
                return self.ring.one()
            key = (row, cols)
            if key in memo:
                return memo[key]
            acc = self.ring.zero()
            for k, j in enumerate(cols):
                a = e[row][j]
                if a:
                    sub = minor(row + 1, cols[:k] + cols[k + 1:])
                    if sub:
                        term = a * sub
                        acc = acc - term if k % 2 else acc + term
            memo[key] = acc
            return acc

        return minor(0, tuple(range(n)))

    def evaluate(self, point) -> list:
        return [[a.evaluate(point) for a in row] for row in self._e]

    def map(self, fn) -> "PolyMatrix":
        return PolyMatrix(self.ring, [[fn(a) for a in row] for row in self._e], self.rows, self.cols)

    def __eq__(self, other):
        return (isinstance(other, PolyMatrix) and self.ring == other.ring
                and self.shape == other.shape and self._e == other._e)

    def __hash__(self):
        return hash((self.ring, self.shape, self._e))

    def to_strings(self, order=None) -> list:
        return [[a.to_str(order) for a in row] for row in self._e]

    def __repr__(self):
        return f"PolyMatrix({self.to_strings()})"


def poly_arith(op: str, a: MultiPoly, b: MultiPoly) -> MultiPoly:
    """Tagged arithmetic: ``op`` in {'add', 'sub', 'mul'}."""
    if not isinstance(a, MultiPoly) or not isinstance(b, MultiPoly):
        raise TypeError("poly_arith expects two MultiPoly operands")
    if a.ring != b.ring:
        raise RingMismatchError(f"cannot combine polynomials over {a.ring} and {b.ring}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def partial_derivative(f: MultiPoly, var_index: int) -> MultiPoly:
    return f.diff(var_index)


def evaluate(f: MultiPoly, point: Sequence) -> Fraction:
    return f.evaluate(point)


def mat_ops(op: str, a: PolyMatrix, b: PolyMatrix | None = None):
    """Tagged matrix operations: 'product', 'transpose', 'determinant'."""
    if op == "product":
        return a @ b
    if op == "transpose":
        return a.transpose()
    if op == "determinant":
        return a.determinant()
    raise ValueError(f"unknown matrix operation {op!r}")


__all__ = [
    "Rational", "as_rational", "MonomialOrder", "DEFAULT_ORDER", "as_order", "PolyRing",
    "MultiPoly", "PolyMatrix", "poly_arith", "partial_derivative", "evaluate", "mat_ops",
    "DEGREVLEX", "LEX", "ELIM",
]
