"""Dense brute-force oracle for homology dimensions.

Deliberately shares no code with the sparse kernels: plain lists of
Fractions, textbook row reduction, dim H_k = (n_k - rank d_k) - rank d_{k+1}.
"""

from __future__ import annotations

from fractions import Fraction

from .complex import GradedDims, default_window


def dense_rank(matrix):
    m = [[Fraction(x) for x in row] for row in matrix]
    if not m or not m[0]:
        return 0
    nrows, ncols = len(m), len(m[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(r + 1, nrows):
            if m[i][c] != 0:
                f = m[i][c] / m[r][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        r += 1
        if r == nrows:
            break
    return r


def boundary_matrix(complex_, k):
    """Dense matrix of d_k : C_k -> C_{k-1}, rows indexed by targets (sorted names)."""
    src = sorted(g.name for g in complex_.generators if g.degree == k)
    tgt = sorted(g.name for g in complex_.generators if g.degree == k - 1)
    col = {nm: j for j, nm in enumerate(src)}
    row = {nm: i for i, nm in enumerate(tgt)}
    mat = [[Fraction(0)] * len(src) for _ in tgt]
    for s, t, c in complex_.entries:
        if s in col and t in row:
            mat[row[t]][col[s]] += c
    return mat


def oracle_homology_dims(complex_, window=None):
    window = window or default_window(complex_)
    if window is None:
        return GradedDims()
    lo, hi = window
    dims = {}
    for k in range(lo, hi + 1):
        n_k = sum(1 for g in complex_.generators if g.degree == k)
        if n_k:
            dims[k] = n_k - dense_rank(boundary_matrix(complex_, k)) - dense_rank(boundary_matrix(complex_, k + 1))
    return GradedDims(dims)
