"""Pure-Python monomial and reduction kernels.

Module monomials are tuples ``(position, e_1, ..., e_n)``; plain polynomial
monomials are exponent tuples ``(e_1, ..., e_n)``.  Term dictionaries map
monomials to nonzero ``Fraction`` coefficients.  ``_kernels.pyx`` mirrors this
file function for function.
"""

DEGREVLEX = 0
LEX = 1
ELIM = 2


def _grevlex(a, b, lo, hi):
    da = 0
    db = 0
    for i in range(lo, hi):
        da += a[i]
        db += b[i]
    if da != db:
        return 1 if da > db else -1
    for i in range(hi - 1, lo - 1, -1):
        if a[i] != b[i]:
            return 1 if a[i] < b[i] else -1
    return 0


def _exps_cmp(a, b, lo, order, block):
    hi = len(a)
    if order == DEGREVLEX:
        return _grevlex(a, b, lo, hi)
    if order == LEX:
        for i in range(lo, hi):
            if a[i] != b[i]:
                return 1 if a[i] > b[i] else -1
        return 0
    mid = lo + block
    c = _grevlex(a, b, lo, mid)
    if c:
        return c
    return _grevlex(a, b, mid, hi)


def exps_cmp(a, b, order, block):
    """Compare two exponent tuples; returns -1, 0 or 1."""
    return _exps_cmp(a, b, 0, order, block)


def mono_cmp(a, b, order, block):
    """Compare module monomials, position over term (position 0 is largest)."""
    if a[0] != b[0]:
        return 1 if a[0] < b[0] else -1
    return _exps_cmp(a, b, 1, order, block)


def leading(terms, order, block):
    best = None
    for m in terms:
        if best is None or mono_cmp(m, best, order, block) > 0:
            best = m
    return best


def leading_exps(terms, order, block):
    best = None
    for m in terms:
        if best is None or _exps_cmp(m, best, 0, order, block) > 0:
            best = m
    return best


def divides(a, b):
    """True iff module monomial ``a`` divides ``b``."""
    if a[0] != b[0]:
        return False
    for i in range(1, len(a)):
        if a[i] > b[i]:
            return False
    return True


def quotient(b, a):
    """Exponent tuple ``b / a`` (positions dropped); assumes ``divides(a, b)``."""
    return tuple(b[i] - a[i] for i in range(1, len(a)))


def lcm(a, b):
    return (a[0],) + tuple(max(a[i], b[i]) for i in range(1, len(a)))


def shift_terms(terms, coeff, shift):
    """``coeff * x**shift * terms`` for a module term dictionary."""
    out = {}
    for m, c in terms.items():
        out[(m[0],) + tuple(m[i] + shift[i - 1] for i in range(1, len(m)))] = c * coeff
    return out


def poly_mul(a, b):
    out = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            m = tuple(x + y for x, y in zip(ma, mb))
            v = out.get(m, 0) + ca * cb
            if v:
                out[m] = v
            else:
                out.pop(m, None)
    return out


def normal_form(terms, basis, order, block):
    """Fully reduce ``terms`` by ``basis``, a list of ``(lead, terms)`` pairs with
    monic leading coefficient.  Returns the remainder term dictionary."""
    p = dict(terms)
    rem = {}
    while p:
        lm = leading(p, order, block)
        c = p[lm]
        for g_lm, g_terms in basis:
            if divides(g_lm, lm):
                n = len(lm)
                shift = tuple(lm[i] - g_lm[i] for i in range(1, n))
                for m, gc in g_terms.items():
                    mm = (m[0],) + tuple(m[i] + shift[i - 1] for i in range(1, n))
                    v = p.get(mm, 0) - c * gc
                    if v:
                        p[mm] = v
                    else:
                        del p[mm]
                break
        else:
            rem[lm] = c
            del p[lm]
    return rem
