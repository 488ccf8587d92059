"""Graded chain complexes over Q, validation and homology."""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field
from fractions import Fraction

from ..errors import ComplexError, InvalidComplex, WindowLeak
from . import linalg
from .linalg import Subspace
from .rational import format_rational


@dataclass(frozen=True)
class HomologyClass:
    """A declared class A in H_2(W) used as a Novikov monomial e^A.

    Only the pairing with c_1 (which shifts gradings by -2<c_1, A>) and the
    symplectic energy are recorded.
    """

    label: str
    c1_pairing: int = 0
    omega_energy: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "omega_energy", Fraction(self.omega_energy))
        if self.omega_energy < 0:
            raise ComplexError(f"class {self.label}: omega_energy must be >= 0")
        if self.label == ZERO_LABEL and (self.c1_pairing or self.omega_energy):
            raise ComplexError("the zero class must have c1_pairing = 0 and omega_energy = 0")

    @property
    def grading_shift(self):
        return -2 * self.c1_pairing

    @property
    def is_zero(self):
        return self.c1_pairing == 0 and self.omega_energy == 0


ZERO_LABEL = "0"
ZERO_CLASS = HomologyClass(ZERO_LABEL)


@dataclass(frozen=True)
class Generator:
    name: str
    degree: int
    filtration: int = 0
    class_label: str = ""
    novikov: HomologyClass = field(default=ZERO_CLASS)


class GradedDims(Mapping):
    """Dimensions indexed by degree; missing degrees read as 0."""

    def __init__(self, dims=None):
        clean = {}
        for k, v in dict(dims or {}).items():
            k, v = int(k), int(v)
            if v < 0:
                raise ValueError(f"negative dimension {v} in degree {k}")
            if v:
                clean[k] = v
        self._dims = dict(sorted(clean.items()))

    def __getitem__(self, k):
        return self._dims.get(k, 0)

    def __contains__(self, k):
        return k in self._dims

    def __iter__(self):
        return iter(self._dims)

    def __len__(self):
        return len(self._dims)

    def __eq__(self, other):
        if isinstance(other, GradedDims):
            return self._dims == other._dims
        if isinstance(other, Mapping):
            return self._dims == GradedDims(other)._dims
        return NotImplemented

    def __hash__(self):
        return hash(tuple(self._dims.items()))

    def __repr__(self):
        return f"GradedDims({self._dims})"

    def restrict(self, lo, hi):
        return GradedDims({k: v for k, v in self._dims.items() if lo <= k <= hi})

    def shift(self, s):
        return GradedDims({k + s: v for k, v in self._dims.items()})

    def alternating_sum(self):
        return sum((-1) ** (k % 2) * v for k, v in self._dims.items())

    def total(self):
        return sum(self._dims.values())

    def to_json(self):
        return {str(k): v for k, v in self._dims.items()}

    @classmethod
    def from_json(cls, data):
        return cls({int(k): v for k, v in data.items()})


def _basis_key(g):
    return (-g.filtration, g.name)


class ChainComplex:
    """A finitely generated graded free Q-module with a sparse differential.

    ``differential`` is an iterable of ``(source, target, coefficient)``;
    repeated entries are summed and zero entries dropped. Instances are
    immutable after construction.
    """

    def __init__(self, generators=(), differential=()):
        gens = {}
        for g in generators:
            if g.name in gens:
                raise ComplexError(f"duplicate generator name {g.name!r}")
            gens[g.name] = g
        diff = {}
        for src, tgt, c in differential:
            for nm in (src, tgt):
                if nm not in gens:
                    raise ComplexError(f"differential references unknown generator {nm!r}")
            row = diff.setdefault(src, {})
            row[tgt] = row.get(tgt, 0) + Fraction(c)
        self._gens = gens
        self._diff = {
            s: dict(sorted((t, c) for t, c in row.items() if c))
            for s, row in sorted(diff.items())
        }
        self._diff = {s: row for s, row in self._diff.items() if row}
        by_deg = {}
        for g in gens.values():
            by_deg.setdefault(g.degree, []).append(g)
        self._by_degree = {k: tuple(sorted(v, key=_basis_key)) for k, v in sorted(by_deg.items())}
        self._index = {
            k: {g.name: i for i, g in enumerate(v)} for k, v in self._by_degree.items()
        }

    @property
    def generators(self):
        return tuple(sorted(self._gens.values(), key=lambda g: (g.degree, g.name)))

    def generator(self, name):
        return self._gens[name]

    def __contains__(self, name):
        return name in self._gens

    def __len__(self):
        return len(self._gens)

    @property
    def entries(self):
        """Differential entries sorted by (source, target)."""
        return tuple((s, t, c) for s, row in self._diff.items() for t, c in row.items())

    @property
    def degrees(self):
        return tuple(self._by_degree)

    def in_degree(self, k):
        """Generators of degree ``k`` in basis order (filtration descending, then name)."""
        return self._by_degree.get(k, ())

    def index(self, k):
        return self._index.get(k, {})

    def d(self, chain):
        """Apply the differential to a chain given as ``{name: coefficient}``."""
        out = {}
        for s, c in chain.items():
            if not c:
                continue
            for t, v in self._diff.get(s, {}).items():
                nv = out.get(t, 0) + c * v
                if nv:
                    out[t] = nv
                else:
                    out.pop(t, None)
        return out

    def d_of(self, name):
        return dict(self._diff.get(name, {}))

    def to_vector(self, chain, k):
        idx = self.index(k)
        out = {}
        for nm, c in chain.items():
            if c:
                if nm not in idx:
                    raise ValueError(f"{nm!r} is not a generator of degree {k}")
                out[idx[nm]] = Fraction(c)
        return out

    def to_chain(self, vec, k):
        gens = self.in_degree(k)
        return {gens[i].name: v for i, v in sorted(vec.items(), key=lambda kv: gens[kv[0]].name) if v}

    def boundary_images(self, k):
        """Images d(g) for g of degree ``k``, as vectors in degree k-1 coordinates."""
        return [self.to_vector(self.d_of(g.name), k - 1) for g in self.in_degree(k)]

    def restrict(self, names):
        """Subcomplex or quotient on a subset of generators (entries leaving the subset are dropped)."""
        names = set(names)
        gens = [g for g in self._gens.values() if g.name in names]
        diff = [(s, t, c) for s, t, c in self.entries if s in names and t in names]
        return ChainComplex(gens, diff)

    def class_labels(self):
        return tuple(sorted({g.class_label for g in self._gens.values()}))

    def restrict_to_class(self, label):
        return self.restrict(g.name for g in self._gens.values() if g.class_label == label)

    def __repr__(self):
        return f"ChainComplex({len(self._gens)} generators, {len(self.entries)} entries)"


@dataclass(frozen=True)
class Violation:
    kind: str  # "degree", "d_squared" or "class_label"
    generators: tuple
    detail: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple = ()

    @property
    def valid(self):
        return not self.violations

    def __bool__(self):
        return self.valid


def validate(complex_):
    """Check the degree -1 rule, d o d = 0 and preservation of class labels."""
    out = []
    for s, t, c in complex_.entries:
        gs, gt = complex_.generator(s), complex_.generator(t)
        if gt.degree != gs.degree - 1:
            out.append(Violation("degree", (s, t), f"{s} (deg {gs.degree}) -> {t} (deg {gt.degree})"))
        if gs.class_label != gt.class_label:
            out.append(
                Violation(
                    "class_label",
                    (s, t),
                    f"{s} (class {gs.class_label!r}) -> {t} (class {gt.class_label!r})",
                )
            )
    for g in complex_.generators:
        dd = complex_.d(complex_.d_of(g.name))
        for t, c in dd.items():
            out.append(
                Violation("d_squared", (g.name, t), f"d(d({g.name})) has coefficient {format_rational(c)} on {t}")
            )
    return ValidationReport(tuple(out))


class Homology:
    """Homology of a complex over a window, with canonical representatives.

    For each degree the cycle space Z, boundary space B and a canonical
    complement of B in Z are kept; representatives are the RREF basis of
    that complement, in the per-degree basis order of the complex.
    """

    def __init__(self, complex_, window):
        self.complex = complex_
        self.window = window
        self._cycles = {}
        self._boundaries = {}
        self._complement = {}
        if window is None:
            self.dims = GradedDims()
            return
        lo, hi = window
        dims = {}
        for k in range(lo, hi + 1):
            n_k = len(complex_.in_degree(k))
            if not n_k:
                continue
            images = complex_.boundary_images(k)
            # cycles: x with sum_i x_i d(g_i) = 0, i.e. nullspace of the transposed image matrix
            rows = linalg.transpose(images, len(complex_.in_degree(k - 1)))
            z = linalg.nullspace(rows, n_k)
            b = Subspace.span(complex_.boundary_images(k + 1), n_k)
            comp = b.complement_in(z)
            self._cycles[k], self._boundaries[k], self._complement[k] = z, b, comp
            dims[k] = comp.dim
        self.dims = GradedDims(dims)

    def cycles(self, k):
        return self._cycles.get(k, Subspace.zero(len(self.complex.in_degree(k))))

    def boundaries(self, k):
        return self._boundaries.get(k, Subspace.zero(len(self.complex.in_degree(k))))

    def basis(self, k):
        return self._complement.get(k, Subspace.zero(len(self.complex.in_degree(k))))

    def representatives(self, k):
        return tuple(self.complex.to_chain(v, k) for v in self.basis(k).basis)

    def class_coordinates(self, chain, k):
        """Coordinates of the class of a cycle in the representative basis of H_k."""
        if self.window is None or not (self.window[0] <= k <= self.window[1]):
            raise ValueError(f"degree {k} outside the computed window")
        vec = self.complex.to_vector(chain, k)
        if vec not in self.cycles(k):
            raise ValueError("chain is not a cycle")
        return self.basis(k).coordinates(self.boundaries(k).reduce(vec))


def default_window(complex_):
    degs = complex_.degrees
    if not degs:
        return None
    return (degs[0], degs[-1])


def homology(complex_, window=None):
    """Homology of a valid complex; raises InvalidComplex otherwise.

    ``window`` is an inclusive ``(lo, hi)`` degree range, defaulting to the
    degrees carrying generators.
    """
    report = validate(complex_)
    if not report.valid:
        raise InvalidComplex(report)
    if window is None:
        window = default_window(complex_)
    return Homology(complex_, window)


def chain_dims(complex_, window=None):
    window = window or default_window(complex_)
    if window is None:
        return GradedDims()
    lo, hi = window
    return GradedDims({k: len(complex_.in_degree(k)) for k in range(lo, hi + 1)})


def euler_characteristic(complex_, window=None):
    """Alternating sum of chain dimensions over ``window``.

    Also computes the alternating sum of homology and insists they agree,
    which holds exactly when no differential entry crosses the window edge.
    """
    window = window or default_window(complex_)
    if window is None:
        return 0
    lo, hi = window
    for s, t, _ in complex_.entries:
        ds, dt = complex_.generator(s).degree, complex_.generator(t).degree
        if (ds == lo and dt == lo - 1) or (ds == hi + 1 and dt == hi):
            raise WindowLeak(f"entry {s} -> {t} crosses the window [{lo}, {hi}]")
    chi_c = chain_dims(complex_, window).alternating_sum()
    chi_h = homology(complex_, window).dims.alternating_sum()
    if chi_c != chi_h:
        raise AssertionError(f"Euler characteristic mismatch: chains {chi_c}, homology {chi_h}")
    return chi_c
