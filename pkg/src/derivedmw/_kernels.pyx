# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled monomial and reduction kernels; same contract as ``_kernels_py``."""

DEGREVLEX = 0
LEX = 1
ELIM = 2


cdef int _grevlex(tuple a, tuple b, Py_ssize_t lo, Py_ssize_t hi):
    cdef long da = 0, db = 0, x, y
    cdef Py_ssize_t i
    for i in range(lo, hi):
        da += <long>a[i]
        db += <long>b[i]
    if da != db:
        return 1 if da > db else -1
    i = hi - 1
    while i >= lo:
        x = <long>a[i]
        y = <long>b[i]
        if x != y:
            return 1 if x < y else -1
        i -= 1
    return 0


cdef int _exps_cmp(tuple a, tuple b, Py_ssize_t lo, int order, Py_ssize_t block):
    cdef Py_ssize_t hi = len(a), i, mid
    cdef long x, y
    cdef int c
    if order == 0:
        return _grevlex(a, b, lo, hi)
    if order == 1:
        for i in range(lo, hi):
            x = <long>a[i]
            y = <long>b[i]
            if x != y:
                return 1 if x > y else -1
        return 0
    mid = lo + block
    c = _grevlex(a, b, lo, mid)
    if c:
        return c
    return _grevlex(a, b, mid, hi)


def exps_cmp(tuple a, tuple b, int order, Py_ssize_t block):
    return _exps_cmp(a, b, 0, order, block)


cdef int _mono_cmp(tuple a, tuple b, int order, Py_ssize_t block):
    cdef long pa = <long>a[0], pb = <long>b[0]
    if pa != pb:
        return 1 if pa < pb else -1
    return _exps_cmp(a, b, 1, order, block)


def mono_cmp(tuple a, tuple b, int order, Py_ssize_t block):
    return _mono_cmp(a, b, order, block)


cdef tuple _leading(dict terms, int order, Py_ssize_t block):
    cdef tuple best = None
    cdef tuple m
    for m in terms:
        if best is None or _mono_cmp(m, best, order, block) > 0:
            best = m
    return best


def leading(dict terms, int order, Py_ssize_t block):
    return _leading(terms, order, block)


def leading_exps(dict terms, int order, Py_ssize_t block):
    cdef tuple best = None
    cdef tuple m
    for m in terms:
        if best is None or _exps_cmp(m, best, 0, order, block) > 0:
            best = m
    return best


cdef bint _divides(tuple a, tuple b):
    cdef Py_ssize_t i, n = len(a)
    if <long>a[0] != <long>b[0]:
        return False
    for i in range(1, n):
        if <long>a[i] > <long>b[i]:
            return False
    return True


def divides(tuple a, tuple b):
    return _divides(a, b)


def quotient(tuple b, tuple a):
    cdef Py_ssize_t i, n = len(a)
    return tuple([<long>b[i] - <long>a[i] for i in range(1, n)])


def lcm(tuple a, tuple b):
    cdef Py_ssize_t i, n = len(a)
    cdef list out = [a[0]]
    for i in range(1, n):
        out.append(a[i] if <long>a[i] >= <long>b[i] else b[i])
    return tuple(out)


cdef tuple _shifted(tuple m, tuple shift):
    cdef Py_ssize_t i, n = len(m)
    cdef list out = [m[0]]
    for i in range(1, n):
        out.append(<long>m[i] + <long>shift[i - 1])
    return tuple(out)


def shift_terms(dict terms, coeff, tuple shift):
    cdef dict out = {}
    cdef tuple m
    for m, c in terms.items():
        out[_shifted(m, shift)] = c * coeff
    return out


def poly_mul(dict a, dict b):
    cdef dict out = {}
    cdef tuple ma, mb, m
    cdef Py_ssize_t i, n
    for ma, ca in a.items():
        n = len(ma)
        for mb, cb in b.items():
            m = tuple([<long>ma[i] + <long>mb[i] for i in range(n)])
            v = out.get(m, 0) + ca * cb
            if v:
                out[m] = v
            else:
                out.pop(m, None)
    return out


def normal_form(dict terms, list basis, int order, Py_ssize_t block):
    cdef dict p = dict(terms)
    cdef dict rem = {}
    cdef dict g_terms
    cdef tuple lm, g_lm, m, mm, shift
    cdef Py_ssize_t i, n
    cdef bint reduced
    while p:
        lm = _leading(p, order, block)
        c = p[lm]
        reduced = False
        for g_lm, g_terms in basis:
            if _divides(g_lm, lm):
                n = len(lm)
                shift = tuple([<long>lm[i] - <long>g_lm[i] for i in range(1, n)])
                for m, gc in g_terms.items():
                    mm = _shifted(m, shift)
                    v = p.get(mm, 0) - c * gc
                    if v:
                        p[mm] = v
                    else:
                        del p[mm]
                reduced = True
                break
        if not reduced:
            rem[lm] = c
            del p[lm]
    return rem
