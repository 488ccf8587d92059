"""Subspaces of Q^n in canonical (reduced echelon) form.

Vectors are sparse ``dict[int, Fraction]``. Everything here sits on top of
the two kernel primitives ``rref`` and ``rank`` from the selected backend.
"""

from __future__ import annotations

from fractions import Fraction

from . import _backend


def rref(rows, ncols):
    return _backend.kernel.rref(list(rows), ncols)


def rank(rows, ncols):
    return _backend.kernel.rank(list(rows), ncols)


class Subspace:
    """A subspace of Q^ncols held as its RREF basis."""

    __slots__ = ("ncols", "basis", "pivots")

    def __init__(self, basis, pivots, ncols):
        self.basis = tuple(basis)
        self.pivots = tuple(pivots)
        self.ncols = ncols

    @classmethod
    def span(cls, vectors, ncols):
        basis, pivots = rref(vectors, ncols)
        return cls(basis, pivots, ncols)

    @classmethod
    def zero(cls, ncols):
        return cls((), (), ncols)

    @classmethod
    def coordinate(cls, cols, ncols):
        cols = sorted(cols)
        return cls([{c: Fraction(1)} for c in cols], cols, ncols)

    @property
    def dim(self):
        return len(self.basis)

    def reduce(self, vec):
        """Return ``vec`` minus its component along the pivot columns."""
        out = {c: Fraction(v) for c, v in vec.items() if v}
        for row, p in zip(self.basis, self.pivots):
            f = out.get(p)
            if f:
                for c, v in row.items():
                    nv = out.get(c, 0) - f * v
                    if nv:
                        out[c] = nv
                    else:
                        out.pop(c, None)
        return out

    def __contains__(self, vec):
        return not self.reduce(vec)

    def coordinates(self, vec):
        """Coefficients of ``vec`` in the RREF basis; ``vec`` must lie in the span."""
        if self.reduce(vec):
            raise ValueError("vector is not in the subspace")
        return tuple(Fraction(vec.get(p, 0)) for p in self.pivots)

    def contains_subspace(self, other):
        return all(v in self for v in other.basis)

    def complement_in(self, ambient):
        """Canonical complement of ``self`` inside ``ambient`` (self must be a subspace of it).

        The complement is ``ambient`` intersected with the vectors vanishing on
        this subspace's pivot columns, returned in RREF.
        """
        reduced = [self.reduce(v) for v in ambient.basis]
        return Subspace.span([r for r in reduced if r], self.ncols)

    def embed(self, cols, ncols):
        """Re-index coordinates through ``cols`` (local index -> global column)."""
        basis = [{cols[c]: v for c, v in row.items()} for row in self.basis]
        return Subspace(basis, [cols[p] for p in self.pivots], ncols)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ncols == other.ncols and self.pivots == other.pivots and self.basis == other.basis

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ncols={self.ncols})"


def nullspace(rows, ncols):
    """``{x : <row, x> = 0 for every row}`` as a Subspace in RREF."""
    basis, pivots = rref(rows, ncols)
    pivset = set(pivots)
    vecs = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = {f: Fraction(1)}
        for row, p in zip(basis, pivots):
            x = row.get(f)
            if x:
                v[p] = -x
        vecs.append(v)
    return Subspace.span(vecs, ncols)


def transpose(rows, nrows_out):
    """Transpose a list of sparse rows; ``nrows_out`` is the column count of the input."""
    out = [dict() for _ in range(nrows_out)]
    for i, row in enumerate(rows):
        for c, v in row.items():
            if v:
                out[c][i] = v
    return out
