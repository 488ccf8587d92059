"""Small dense rational matrices for maps between explicit bases."""

from __future__ import annotations

from fractions import Fraction

from . import linalg
from .rational import format_rational, parse_rational


class QMatrix:
    """Immutable ``nrows x ncols`` matrix over Q; column j is the image of source basis vector j."""

    __slots__ = ("nrows", "ncols", "rows")

    def __init__(self, rows, nrows=None, ncols=None):
        rows = tuple(tuple(Fraction(x) for x in r) for r in rows)
        self.nrows = len(rows) if nrows is None else nrows
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        self.ncols = ncols
        if len(rows) != self.nrows or any(len(r) != ncols for r in rows):
            raise ValueError("ragged matrix or shape mismatch")
        self.rows = rows

    @classmethod
    def zeros(cls, nrows, ncols):
        return cls([[0] * ncols for _ in range(nrows)], nrows, ncols)

    @classmethod
    def identity(cls, n):
        return cls([[int(i == j) for j in range(n)] for i in range(n)], n, n)

    @classmethod
    def from_columns(cls, columns, nrows):
        cols = [tuple(c) for c in columns]
        return cls([[c[i] for c in cols] for i in range(nrows)], nrows, len(cols))

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def column(self, j):
        return tuple(r[j] for r in self.rows)

    def sparse_rows(self):
        return [{j: x for j, x in enumerate(r) if x} for r in self.rows]

    def rank(self):
        if not self.nrows or not self.ncols:
            return 0
        return linalg.rank(self.sparse_rows(), self.ncols)

    def is_zero(self):
        return all(not x for r in self.rows for x in r)

    def __matmul__(self, other):
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = [other.column(j) for j in range(other.ncols)]
        return QMatrix(
            [[sum((a * b for a, b in zip(r, c)), Fraction(0)) for c in cols] for r in self.rows],
            self.nrows,
            other.ncols,
        )

    def scale(self, row_factors=None, col_factors=None):
        rf = row_factors or [1] * self.nrows
        cf = col_factors or [1] * self.ncols
        return QMatrix(
            [[x * rf[i] * cf[j] for j, x in enumerate(r)] for i, r in enumerate(self.rows)],
            self.nrows,
            self.ncols,
        )

    def with_entry(self, i, j, value):
        rows = [list(r) for r in self.rows]
        rows[i][j] = Fraction(value)
        return QMatrix(rows, self.nrows, self.ncols)

    def __eq__(self, other):
        if not isinstance(other, QMatrix):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        return hash((self.shape, self.rows))

    def __repr__(self):
        return f"QMatrix({self.to_json()!r}, shape={self.shape})"

    def to_json(self):
        return [[format_rational(x) for x in r] for r in self.rows]

    @classmethod
    def from_json(cls, data, ncols=None):
        return cls([[parse_rational(x) for x in r] for r in data], len(data), ncols)
