# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Fraction-free int64 elimination kernels.

Same contract as ``_elim_py``. Each row is scaled to integers, then
eliminated with ``a*row_k - b*row_i`` updates followed by a gcd
normalisation. Every multiply and subtract is overflow-checked; on overflow
the call is redone by the pure-Python kernel, so results never depend on
which backend ran.
"""

from fractions import Fraction
from math import lcm

from libc.stdlib cimport calloc, free

from . import _elim_py

cdef extern from *:
    """
    static inline int gk_mul_ovf(long long a, long long b, long long *r) {
        return __builtin_mul_overflow(a, b, r);
    }
    static inline int gk_sub_ovf(long long a, long long b, long long *r) {
        return __builtin_sub_overflow(a, b, r);
    }
    """
    int gk_mul_ovf(long long a, long long b, long long *r) nogil
    int gk_sub_ovf(long long a, long long b, long long *r) nogil

# Entries are kept below 2**62 on load so the first products cannot wrap silently.
cdef long long LOAD_LIMIT = 1LL << 62
# Dense buffers beyond this many cells go to the sparse kernel instead.
cdef Py_ssize_t MAX_CELLS = 4000000


class KernelOverflow(ArithmeticError):
    pass


cdef inline long long _gcd(long long a, long long b) nogil:
    if a < 0:
        a = -a
    if b < 0:
        b = -b
    while b:
        a, b = b, a % b
    return a


cdef long long* _load(rows, Py_ssize_t m, Py_ssize_t n) except NULL:
    cdef long long* a = <long long*> calloc(max(m * n, 1), sizeof(long long))
    cdef Py_ssize_t i
    if a == NULL:
        raise MemoryError()
    try:
        for i in range(m):
            row = rows[i]
            den = 1
            for v in row.values():
                if isinstance(v, Fraction):
                    den = lcm(den, v.denominator)
            for c, v in row.items():
                if not v:
                    continue
                if c < 0 or c >= n:
                    raise IndexError(f"column {c} outside 0..{n - 1}")
                x = v * den
                if isinstance(x, Fraction):
                    x = x.numerator
                if x >= LOAD_LIMIT or x <= -LOAD_LIMIT:
                    raise KernelOverflow()
                a[i * n + c] = x
    except BaseException:
        free(a)
        raise
    return a


cdef int _combine(long long* a, Py_ssize_t n, Py_ssize_t k, Py_ssize_t i,
                  Py_ssize_t col, Py_ssize_t start) nogil:
    """row_k := piv*row_k - f*row_i, then divide by the row gcd.

    Returns 1 on overflow, 0 otherwise.
    """
    cdef long long piv = a[i * n + col]
    cdef long long f = a[k * n + col]
    cdef long long g0, t1, t2, g = 0
    cdef Py_ssize_t c
    g0 = _gcd(piv, f)
    piv //= g0
    f //= g0
    for c in range(start, n):
        if gk_mul_ovf(piv, a[k * n + c], &t1):
            return 1
        if gk_mul_ovf(f, a[i * n + c], &t2):
            return 1
        if gk_sub_ovf(t1, t2, &t1):
            return 1
        a[k * n + c] = t1
        if t1:
            g = _gcd(g, t1)
    if g > 1:
        for c in range(start, n):
            a[k * n + c] //= g
    return 0


cdef inline Py_ssize_t _row_nnz(long long* a, Py_ssize_t n, Py_ssize_t i) nogil:
    cdef Py_ssize_t c, cnt = 0
    for c in range(n):
        if a[i * n + c]:
            cnt += 1
    return cnt


def _rref_int(rows, Py_ssize_t ncols):
    cdef Py_ssize_t m = len(rows), n = ncols
    cdef long long* a
    cdef Py_ssize_t c, i, k, best, best_nnz, nnz, lead = 0
    cdef int ovf = 0
    if m == 0 or n == 0:
        return [], []
    a = _load(rows, m, n)
    try:
        with nogil:
            for c in range(n):
                best = -1
                best_nnz = 0
                for i in range(lead, m):
                    if a[i * n + c]:
                        nnz = _row_nnz(a, n, i)
                        if best < 0 or nnz < best_nnz:
                            best = i
                            best_nnz = nnz
                if best < 0:
                    continue
                if best != lead:
                    for k in range(n):
                        a[best * n + k], a[lead * n + k] = a[lead * n + k], a[best * n + k]
                for k in range(m):
                    if k != lead and a[k * n + c]:
                        if _combine(a, n, k, lead, c, 0):
                            ovf = 1
                            break
                if ovf:
                    break
                lead += 1
        if ovf:
            raise KernelOverflow()
        basis = []
        pivots = []
        for i in range(lead):
            c = 0
            while a[i * n + c] == 0:
                c += 1
            p = a[i * n + c]
            row = {}
            for k in range(c, n):
                if a[i * n + k]:
                    row[k] = Fraction(a[i * n + k], p)
            basis.append(row)
            pivots.append(c)
        return basis, pivots
    finally:
        free(a)


def _rank_int(rows, Py_ssize_t ncols):
    cdef Py_ssize_t m = len(rows), n = ncols
    cdef long long* a
    cdef Py_ssize_t* rnz
    cdef Py_ssize_t* cnz
    cdef char* alive
    cdef Py_ssize_t i, j, k, bi, bj, r = 0, live
    cdef long long cost, best
    cdef int ovf = 0
    if m == 0 or n == 0:
        return 0
    a = _load(rows, m, n)
    rnz = <Py_ssize_t*> calloc(m, sizeof(Py_ssize_t))
    cnz = <Py_ssize_t*> calloc(n, sizeof(Py_ssize_t))
    alive = <char*> calloc(m, sizeof(char))
    if rnz == NULL or cnz == NULL or alive == NULL:
        free(a); free(rnz); free(cnz); free(alive)
        raise MemoryError()
    try:
        with nogil:
            for i in range(m):
                alive[i] = 1
            live = m
            while live:
                for j in range(n):
                    cnz[j] = 0
                for i in range(m):
                    rnz[i] = 0
                    if alive[i]:
                        for j in range(n):
                            if a[i * n + j]:
                                rnz[i] += 1
                                cnz[j] += 1
                        if rnz[i] == 0:
                            alive[i] = 0
                            live -= 1
                bi = -1
                bj = -1
                best = 0
                for i in range(m):
                    if not alive[i]:
                        continue
                    for j in range(n):
                        if a[i * n + j]:
                            cost = (rnz[i] - 1) * (cnz[j] - 1)
                            if bi < 0 or cost < best:
                                best = cost
                                bi = i
                                bj = j
                if bi < 0:
                    break
                for k in range(m):
                    if k != bi and alive[k] and a[k * n + bj]:
                        if _combine(a, n, k, bi, bj, 0):
                            ovf = 1
                            break
                if ovf:
                    break
                alive[bi] = 0
                live -= 1
                r += 1
        if ovf:
            raise KernelOverflow()
        return r
    finally:
        free(a); free(rnz); free(cnz); free(alive)


# calls handed to the Python kernel (size limit or overflow); read by the benchmark
stats = {"fallbacks": 0}


def _too_big(rows, Py_ssize_t ncols):
    return len(rows) * ncols > MAX_CELLS


def rref(rows, ncols):
    rows = [r for r in rows if r]
    if _too_big(rows, ncols):
        stats["fallbacks"] += 1
        return _elim_py.rref(rows, ncols)
    try:
        return _rref_int(rows, ncols)
    except KernelOverflow:
        stats["fallbacks"] += 1
        return _elim_py.rref(rows, ncols)


def rank(rows, ncols):
    rows = [r for r in rows if r]
    if _too_big(rows, ncols):
        stats["fallbacks"] += 1
        return _elim_py.rank(rows, ncols)
    try:
        return _rank_int(rows, ncols)
    except KernelOverflow:
        stats["fallbacks"] += 1
        return _elim_py.rank(rows, ncols)
