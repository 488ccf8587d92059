"""Sparse exact elimination over Q, pure Python.

Rows are ``dict[int, Fraction]`` mapping column index to a nonzero entry.
This module is the reference kernel; ``_elim.pyx`` computes the same results
with fraction-free int64 arithmetic and defers back here on overflow.
"""

from __future__ import annotations

from collections import defaultdict
from fractions import Fraction


def _load(rows):
    work = []
    for r in rows:
        row = {c: Fraction(v) for c, v in r.items() if v}
        if row:
            work.append(row)
    colidx = defaultdict(set)
    for i, row in enumerate(work):
        for c in row:
            colidx[c].add(i)
    return work, colidx


def _axpy(work, colidx, k, f, src):
    """row_k -= f * src, keeping the column index in sync."""
    row = work[k]
    for c, v in src.items():
        nv = row.get(c, 0) - f * v
        if nv:
            if c not in row:
                colidx[c].add(k)
            row[c] = nv
        elif c in row:
            del row[c]
            colidx[c].discard(k)


def rref(rows, ncols):
    """Reduced row echelon form.

    Returns ``(basis, pivots)``: the nonzero rows of the RREF, each a dict with
    entry 1 at its pivot, ordered by ascending pivot column. Columns are
    processed left to right; within a column the candidate row with the fewest
    nonzeros is chosen to limit fill-in.
    """
    work, colidx = _load(rows)
    used = set()
    pivot_rows = []
    for c in range(ncols):
        cands = [i for i in colidx.get(c, ()) if i not in used]
        if not cands:
            continue
        i = min(cands, key=lambda j: (len(work[j]), j))
        piv = work[i]
        inv = 1 / piv[c]
        if inv != 1:
            for cc in piv:
                piv[cc] *= inv
        for k in list(colidx[c]):
            if k != i:
                _axpy(work, colidx, k, work[k][c], piv)
        used.add(i)
        pivot_rows.append((c, i))
    basis = [dict(sorted(work[i].items())) for _, i in pivot_rows]
    return basis, [c for c, _ in pivot_rows]


def rank(rows, ncols):
    """Rank by Markowitz-pivoted elimination (no back substitution)."""
    work, colidx = _load(rows)
    active = set(range(len(work)))
    r = 0
    while active:
        best = None
        for i in active:
            ri = len(work[i]) - 1
            for c in work[i]:
                cc = sum(1 for k in colidx[c] if k in active) - 1
                key = (ri * cc, i, c)
                if best is None or key < best:
                    best = key
        if best is None:
            break
        _, i, c = best
        piv = work[i]
        pv = piv[c]
        for k in list(colidx[c]):
            if k != i and k in active:
                _axpy(work, colidx, k, work[k][c] / pv, piv)
        active.discard(i)
        r += 1
        active = {k for k in active if work[k]}
    return r
