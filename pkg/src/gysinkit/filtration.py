"""Filtered complexes, splitting of the differential and spectral sequence pages.

Pages are computed from the classical subspaces of a filtered complex. For
filtration ``p`` and total degree ``n``::

    Z^r_{p,n} = {x in F_p C_n : dx in F_{p-r}},      Z^{-1}_{p,n} = F_p C_n
    B^r_{p,n} = Z^{r-1}_{p-1,n} + d(Z^{r-1}_{p+r-1,n+1})
    E^r_{p,n} = Z^r_{p,n} / B^r_{p,n}

Every slot keeps the canonical complement of B in Z as its basis, so each
basis vector is an honest chain in the original complex and ``d^r`` is
evaluated by applying ``d`` and reducing modulo ``B`` of the target slot.

The complementary degree is ``q = n - p - degree_offset``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .algebra import linalg
from .algebra.complex import ChainComplex, GradedDims, homology, validate
from .algebra.linalg import Subspace
from .algebra.matrix import QMatrix
from .errors import ConvergenceMismatch, FiltrationViolation, InvalidComplex, NotTwoLine


class FilteredComplex:
    """A chain complex with an increasing filtration read from ``Generator.filtration``.

    ``excluded_from`` is the lowest filtration level that the truncation has
    removed (None when the complex is not truncated); it drives the
    contamination flags on pages.
    """

    def __init__(self, complex_: ChainComplex, max_shift: int = 2, excluded_from=None, degree_offset: int = 0):
        report = validate(complex_)
        if not report.valid:
            raise InvalidComplex(report)
        self.complex = complex_
        self.max_shift = max_shift
        self.excluded_from = excluded_from
        self.degree_offset = degree_offset
        for s, t, _ in complex_.entries:
            shift = complex_.generator(s).filtration - complex_.generator(t).filtration
            if shift < 0 or shift > max_shift:
                raise FiltrationViolation((s, t), shift)

    def shift_of(self, source, target):
        return self.complex.generator(source).filtration - self.complex.generator(target).filtration

    def levels(self):
        return tuple(sorted({g.filtration for g in self.complex.generators}))

    def bidegree(self, name):
        g = self.complex.generator(name)
        return (g.filtration, g.degree - g.filtration - self.degree_offset)

    def __repr__(self):
        return f"FilteredComplex({self.complex!r}, max_shift={self.max_shift})"


@dataclass(frozen=True)
class DifferentialSplitting:
    """The differential sorted by filtration shift: ``components[i]`` is d^i."""

    components: tuple

    @property
    def d0(self):
        return self.component(0)

    @property
    def d1(self):
        return self.component(1)

    @property
    def d2(self):
        return self.component(2)

    def component(self, i):
        return self.components[i] if i < len(self.components) else ()

    def resum(self):
        out = {}
        for comp in self.components:
            for s, t, c in comp:
                out[(s, t)] = out.get((s, t), 0) + c
        return tuple((s, t, c) for (s, t), c in sorted(out.items()) if c)


def split_differential(fc: FilteredComplex) -> DifferentialSplitting:
    comps = [[] for _ in range(fc.max_shift + 1)]
    for s, t, c in fc.complex.entries:
        shift = fc.shift_of(s, t)
        if shift < 0 or shift > fc.max_shift:
            raise FiltrationViolation((s, t), shift)
        comps[shift].append((s, t, c))
    return DifferentialSplitting(tuple(tuple(c) for c in comps))


def _compose(entries_a, entries_b):
    """Entries of a o b (apply b first), summed."""
    a = {}
    for s, t, c in entries_a:
        a.setdefault(s, {})[t] = c
    out = {}
    for s, m, c in entries_b:
        for t, v in a.get(m, {}).items():
            out[(s, t)] = out.get((s, t), 0) + c * v
    return out


def anticommutator_vanishes(split: DifferentialSplitting, i, j):
    """Whether d^i d^j + d^j d^i = 0 (for i = j this is (d^i)^2 = 0)."""
    total = _compose(split.component(i), split.component(j))
    if i != j:
        for k, v in _compose(split.component(j), split.component(i)).items():
            total[k] = total.get(k, 0) + v
    return not any(total.values())


@dataclass
class Slot:
    p: int
    q: int
    degree: int
    basis: Subspace
    cycles: Subspace
    boundaries: Subspace
    names: tuple
    contaminated: bool = False

    @property
    def dim(self):
        return self.basis.dim

    def representatives(self):
        """Slot basis as chains ``{generator name: coefficient}`` of the original complex."""
        return tuple({self.names[i]: v for i, v in sorted(vec.items())} for vec in self.basis.basis)

    def coordinates(self, vec):
        """Class of a vector of Z^r in the slot basis."""
        return self.basis.coordinates(self.boundaries.reduce(vec))


@dataclass
class Page:
    r: int
    slots: dict
    differentials: dict = field(default_factory=dict)
    degree_offset: int = 0

    def dims(self):
        return {pq: s.dim for pq, s in sorted(self.slots.items()) if s.dim}

    def dim(self, p, q):
        s = self.slots.get((p, q))
        return s.dim if s else 0

    def slot(self, p, q):
        return self.slots.get((p, q))

    def target(self, p, q):
        return (p - self.r, q + self.r - 1)

    def differential(self, p, q):
        """Matrix of d^r out of slot (p, q); zero matrix when either end is empty."""
        mat = self.differentials.get((p, q))
        if mat is not None:
            return mat
        return QMatrix.zeros(self.dim(*self.target(p, q)), self.dim(p, q))

    def is_contaminated(self, p, q):
        s = self.slots.get((p, q))
        return bool(s and s.contaminated)

    def nonzero_rows(self):
        return tuple(sorted({q for (p, q), s in self.slots.items() if s.dim}))

    def total_dims(self, clean_only=False):
        out = {}
        for (p, q), s in self.slots.items():
            if clean_only and s.contaminated:
                continue
            out[s.degree] = out.get(s.degree, 0) + s.dim
        return GradedDims(out)

    def to_json(self):
        return {
            "r": self.r,
            "slots": [
                {"p": p, "q": q, "degree": s.degree, "dim": s.dim, "contaminated": s.contaminated}
                for (p, q), s in sorted(self.slots.items())
                if s.dim
            ],
            "differentials": [
                {
                    "from": [p, q],
                    "to": list(self.target(p, q)),
                    "matrix": m.to_json(),
                }
                for (p, q), m in sorted(self.differentials.items())
                if not m.is_zero()
            ],
        }


class _SpectralData:
    """Memoised Z^r and B^r subspaces for one filtered complex."""

    def __init__(self, fc: FilteredComplex):
        self.fc = fc
        cx = fc.complex
        self.cx = cx
        self.names = {n: tuple(g.name for g in cx.in_degree(n)) for n in cx.degrees}
        self.filt = {n: tuple(g.filtration for g in cx.in_degree(n)) for n in cx.degrees}
        self.images = {n: cx.boundary_images(n) for n in cx.degrees}
        self._z = {}

    def ncols(self, n):
        return len(self.names.get(n, ()))

    def d(self, vec, n):
        """d of a vector in C_n, as a vector in C_{n-1}."""
        out = {}
        imgs = self.images.get(n, ())
        for i, c in vec.items():
            for j, v in imgs[i].items():
                nv = out.get(j, 0) + c * v
                if nv:
                    out[j] = nv
                else:
                    out.pop(j, None)
        return out

    def Z(self, r, p, n):
        key = (max(r, -1), p, n)
        if key in self._z:
            return self._z[key]
        N = self.ncols(n)
        cols = [i for i, f in enumerate(self.filt.get(n, ())) if f <= p]
        if r <= 0 or not cols:
            z = Subspace.coordinate(cols, N)
        else:
            below = self.filt.get(n - 1, ())
            bad = [j for j, f in enumerate(below) if f > p - r]
            imgs = self.images[n]
            rows = [{li: imgs[i][j] for li, i in enumerate(cols) if imgs[i].get(j)} for j in bad]
            z = linalg.nullspace(rows, len(cols)).embed(cols, N)
        self._z[key] = z
        return z

    def B(self, r, p, n):
        if r <= 0:
            return self.Z(-1, p - 1, n)
        vecs = list(self.Z(r - 1, p - 1, n).basis)
        vecs += [self.d(v, n + 1) for v in self.Z(r - 1, p + r - 1, n + 1).basis]
        return Subspace.span(vecs, self.ncols(n))


def _q_support(fc):
    qs = [fc.bidegree(g.name)[1] for g in fc.complex.generators]
    return (min(qs), max(qs)) if qs else (0, 0)


def slot_contaminated(fc: FilteredComplex, r, p, q, qsupport=None):
    """Whether truncation can change E^r_{p,q}.

    The slot is unreliable when it sits at or above the excluded level, or
    when B^r could receive boundaries from a removed generator: one of degree
    n+1 at a level in [excluded_from, p+r-1] whose q lies in the E^0 support.
    """
    E = fc.excluded_from
    if E is None:
        return False
    qmin, qmax = qsupport or _q_support(fc)
    if p >= E:
        return True
    return max(E, p + q + 1 - qmax) <= min(p + r - 1, p + q + 1 - qmin)


def clean_degree(fc: FilteredComplex, n, qsupport=None):
    """Whether the total homology in degree ``n`` is unaffected by truncation."""
    E = fc.excluded_from
    if E is None:
        return True
    qmin, _ = qsupport or _q_support(fc)
    return n - fc.degree_offset + 1 - qmin < E


def _page(data: _SpectralData, r, qsupport):
    fc = data.fc
    slots = {}
    for n in data.cx.degrees:
        for p in sorted(set(data.filt[n])):
            z = data.Z(r, p, n)
            b = data.B(r, p, n)
            q = n - p - fc.degree_offset
            slots[(p, q)] = Slot(
                p, q, n, b.complement_in(z), z, b, data.names[n],
                contaminated=slot_contaminated(fc, r, p, q, qsupport),
            )
    diffs = {}
    for (p, q), s in slots.items():
        tgt = slots.get((p - r, q + r - 1))
        if not s.dim or tgt is None or not tgt.dim:
            continue
        cols = []
        for vec in s.basis.basis:
            img = data.d(vec, s.degree)
            cols.append(tgt.coordinates(img))
        diffs[(p, q)] = QMatrix.from_columns(cols, tgt.dim)
    return Page(r, slots, diffs, fc.degree_offset)


def pages(fc: FilteredComplex, up_to_r: int):
    """Pages E^0 .. E^{up_to_r}."""
    data = _SpectralData(fc)
    qs = _q_support(fc)
    return [_page(data, r, qs) for r in range(up_to_r + 1)]


def page(fc: FilteredComplex, r: int):
    return _page(_SpectralData(fc), r, _q_support(fc))


def two_line_check(pg: Page) -> bool:
    return all(q in (0, 1) for (p, q), s in pg.slots.items() if s.dim)


@dataclass(frozen=True)
class ConvergenceCertificate:
    """Per total degree: (dim H_n, anti-diagonal sum of E^infinity, clean)."""

    rows: tuple

    @property
    def ok(self):
        return all(h == e for _, h, e, clean in self.rows if clean)

    def mismatches(self):
        return tuple(n for n, h, e, clean in self.rows if clean and h != e)

    def clean_degrees(self):
        return tuple(n for n, _, _, clean in self.rows if clean)

    def to_json(self):
        return [{"degree": n, "homology": h, "e_infinity": e, "clean": clean} for n, h, e, clean in self.rows]


@dataclass
class EInfinity:
    pages: list
    homology: object
    certificate: ConvergenceCertificate

    @property
    def e2(self):
        return self.pages[2]

    @property
    def e3(self):
        return self.pages[3]


def e_infinity(fc: FilteredComplex, strict: bool = False) -> EInfinity:
    """E^3 of a two-line spectral sequence, compared with the total homology.

    Raises NotTwoLine if E^2 is not supported in q = 0, 1. With ``strict`` a
    disagreement in a clean degree raises ConvergenceMismatch.
    """
    pgs = pages(fc, 3)
    if not two_line_check(pgs[2]):
        raise NotTwoLine(f"E^2 has nonzero rows q = {pgs[2].nonzero_rows()}")
    h = homology(fc.complex)
    e3 = pgs[3].total_dims()
    qs = _q_support(fc)
    degs = sorted(set(h.dims) | set(e3) | set(fc.complex.degrees))
    rows = tuple((n, h.dims[n], e3[n], clean_degree(fc, n, qs)) for n in degs)
    cert = ConvergenceCertificate(rows)
    if strict and not cert.ok:
        raise ConvergenceMismatch(f"E^infinity and homology differ in degrees {cert.mismatches()}")
    return EInfinity(pgs, h, cert)
