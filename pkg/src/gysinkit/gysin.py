"""Long exact sequences: extraction from a two-line E^2 page and exactness certificates.

For a spectral sequence supported in q = 0, 1 converging to H, the two short
exact sequences

    0 -> E^3_{p,0} -> E^2_{p,0} -d2-> E^2_{p-2,1} -> E^3_{p-2,1} -> 0
    0 -> E^3_{p-1,1} -> H_p -> E^3_{p,0} -> 0

splice into

    ... -> E^2_{p-1,1} -> H_p -> E^2_{p,0} -d2-> E^2_{p-2,1} -> H_{p-1} -> ...

All maps are computed, not assumed: a basis chain of E^2_{p-1,1} is a cycle
and is sent to its homology class, and a homology representative is sent to
its class modulo B^2 of slot (p, 0). Reading E^2_{p,0} as HC_{p+n-3} turns
this into the sequence SH -> HC -> HC -> SH with D conjugate to d2 by Theta.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction

from .algebra.complex import ChainComplex, GradedDims, homology, validate
from .algebra.matrix import QMatrix
from .errors import ComplexError, ConvergenceMismatch, InvalidComplex, NotTwoLine, UnknownMultiplicity
from .filtration import FilteredComplex, _q_support, clean_degree, pages, two_line_check


def degree_bookkeeping(n: int, k: int):
    """Degrees (SH, HC, HC, SH) of one segment SH_{k-(n-3)} -> HC_k -> HC_{k-2} -> SH_{k-1-(n-3)}."""
    s = n - 3
    return (k - s, k, k - 2, k - 1 - s)


@dataclass(frozen=True)
class Node:
    label: str
    role: str  # "SH", "HC", "E2" or free text
    degree: int
    dim: int
    contaminated: bool = False

    def to_json(self):
        return {"label": self.label, "role": self.role, "degree": self.degree, "dim": self.dim, "contaminated": self.contaminated}


@dataclass(frozen=True)
class NodeCheck:
    index: int
    label: str
    rank_in: int
    dim: int
    rank_out: int
    composite_zero: bool

    @property
    def exact(self):
        return self.composite_zero and self.rank_in + self.rank_out == self.dim

    def to_json(self):
        return {
            "node": self.label,
            "rank_in": self.rank_in,
            "dim": self.dim,
            "rank_out": self.rank_out,
            "composite_zero": self.composite_zero,
            "exact": self.exact,
        }


@dataclass(frozen=True)
class ExactnessCertificate:
    """Rank checks at every interior node plus the alternating-sum identity.

    A node passes when the composite through it vanishes and
    rank(in) + rank(out) = dim. The alternating identity
    sum_{interior} (-1)^i dim V_i = -r_0 + (-1)^N r_{N-2} is recorded as an
    independent consistency check.
    """

    checks: tuple
    ranks: tuple
    alternating_lhs: int
    alternating_rhs: int

    @property
    def exact(self):
        return all(c.exact for c in self.checks) and self.alternating_lhs == self.alternating_rhs

    def failing(self):
        return tuple(c.label for c in self.checks if not c.exact)

    def to_json(self):
        return {
            "exact": self.exact,
            "nodes": [c.to_json() for c in self.checks],
            "alternating": {"lhs": self.alternating_lhs, "rhs": self.alternating_rhs},
        }


@dataclass(frozen=True)
class LongExactSequence:
    """Nodes V_0, ..., V_{N-1} and maps f_i : V_i -> V_{i+1} (``maps[i]`` has shape dim V_{i+1} x dim V_i)."""

    nodes: tuple
    maps: tuple
    annotations: tuple = ()
    d_maps: tuple = ()  # (k, D matrix, d2 matrix)
    window: tuple | None = None
    notes: tuple = ()

    def __post_init__(self):
        if len(self.maps) != max(len(self.nodes) - 1, 0):
            raise ValueError("a sequence of N nodes needs N - 1 maps")
        for i, m in enumerate(self.maps):
            if m.shape != (self.nodes[i + 1].dim, self.nodes[i].dim):
                raise ValueError(
                    f"map {i} has shape {m.shape}, expected {(self.nodes[i + 1].dim, self.nodes[i].dim)}"
                )

    def with_map(self, i, matrix):
        maps = list(self.maps)
        maps[i] = matrix
        return replace(self, maps=tuple(maps))

    def node_index(self, label):
        return next(i for i, nd in enumerate(self.nodes) if nd.label == label)

    def map_from(self, label):
        return self.maps[self.node_index(label)]

    def certificate(self):
        return verify_exactness(self)

    def to_json(self):
        return {
            "window": list(self.window) if self.window else None,
            "nodes": [nd.to_json() for nd in self.nodes],
            "maps": [
                {
                    "from": self.nodes[i].label,
                    "to": self.nodes[i + 1].label,
                    "shape": list(m.shape),
                    "rank": m.rank(),
                    "matrix": m.to_json(),
                }
                for i, m in enumerate(self.maps)
            ],
            "segments": [dict(a) for a in self.annotations],
            "D": [
                {"k": k, "rank": dm.rank(), "D": dm.to_json(), "d2": d2.to_json(), "shape": list(dm.shape)}
                for k, dm, d2 in self.d_maps
            ],
            "notes": list(self.notes),
            "certificate": self.certificate().to_json(),
        }


def verify_exactness(seq: LongExactSequence) -> ExactnessCertificate:
    ranks = tuple(m.rank() for m in seq.maps)
    checks = []
    for i in range(1, len(seq.nodes) - 1):
        f_in, f_out = seq.maps[i - 1], seq.maps[i]
        comp = (f_out @ f_in).is_zero() if f_in.ncols and f_out.nrows else True
        checks.append(NodeCheck(i, seq.nodes[i].label, ranks[i - 1], seq.nodes[i].dim, ranks[i], comp))
    N = len(seq.nodes)
    lhs = sum((-1) ** i * seq.nodes[i].dim for i in range(1, N - 1))
    rhs = (-ranks[0] + (-1) ** N * ranks[N - 2]) if N >= 3 else lhs
    return ExactnessCertificate(tuple(checks), ranks, lhs, rhs)


def _theta_value(label, multiplicities):
    orbit, kind = label
    if orbit not in multiplicities:
        raise UnknownMultiplicity(f"no multiplicity for orbit {orbit!r}")
    k = multiplicities[orbit]
    if k < 1:
        raise UnknownMultiplicity(f"orbit {orbit!r} has multiplicity {k}")
    return Fraction(1, k) if kind == "m" else Fraction(1)


def apply_theta_conjugation(d2_map: QMatrix, row_labels, col_labels, multiplicities, inverse=False) -> QMatrix:
    """D = Theta d2 Theta^{-1} for a matrix in orbit-generator coordinates.

    ``row_labels``/``col_labels`` are ``(orbit, kind)`` pairs with kind "M" or
    "m"; ``multiplicities`` maps orbit names to kappa. Theta fixes gamma (x) M
    and scales gamma (x) m by 1/kappa, so entry (i, j) is multiplied by
    theta(row i) / theta(col j). ``inverse`` undoes the conjugation.
    """
    rf = [_theta_value(lb, multiplicities) for lb in row_labels]
    cf = [1 / _theta_value(lb, multiplicities) for lb in col_labels]
    if inverse:
        rf, cf = [1 / x for x in rf], [1 / x for x in cf]
    return d2_map.scale(rf, cf)


def _unit_label(slot, info):
    """(orbit, kind) labels of a slot basis when every basis vector is a single generator."""
    if info is None:
        return None
    labels = []
    for rep in slot.representatives():
        if len(rep) != 1 or next(iter(rep.values())) != 1:
            return None
        og = info.get(next(iter(rep)))
        if og is None:
            return None
        labels.append((og.orbit, og.kind))
    return labels


def _require_two_line_e0(fc):
    qmin, qmax = _q_support(fc)
    if fc.complex.generators and (qmin < 0 or qmax > 1):
        raise NotTwoLine(f"E^0 is supported in q = {qmin}..{qmax}; the splice needs q in {{0, 1}}")


def extract_les(e2, total_homology, window=None, *, n=None, clean=None, info=None, multiplicities=None):
    """Splice the two-line E^2 page and H into a long exact sequence.

    ``window`` is an inclusive range ``(p_lo, p_hi)`` of filtration levels
    (equivalently SH degrees when the degree offset is 0). The emitted
    sequence runs from E^2_{p_hi-1,1} to H_{p_lo-1}; ``clean`` is a predicate
    on total degrees and the window is clipped to slots and degrees that are
    neither contaminated nor unclean. With ``n`` given, E^2_{p,0} is labelled
    HC_{p+n-3}. ``info`` and ``multiplicities`` enable Theta-conjugation of
    d2 when slot bases are single orbit generators.
    """
    if not two_line_check(e2):
        raise NotTwoLine(f"E^2 has nonzero rows q = {e2.nonzero_rows()}")
    off = e2.degree_offset
    clean = clean or (lambda deg: True)
    cx = total_homology.complex
    levels = sorted({p for (p, q) in e2.slots}) or [0]
    lo, hi = window if window is not None else (levels[0], levels[-1] + 1)
    notes = []

    def slot_ok(p, q):
        return not e2.is_contaminated(p, q)

    def segment_ok(p):
        return clean(p + off) and clean(p - 1 + off) and slot_ok(p - 1, 1) and slot_ok(p, 0) and slot_ok(p - 2, 1)

    while hi >= lo and not all(segment_ok(p) for p in range(lo, hi + 1)):
        hi -= 1
    if window is not None and hi != window[1]:
        notes.append(f"window clipped to [{lo}, {hi}] by truncation contamination")
    if hi < lo:
        return LongExactSequence((), (), window=(lo, hi), notes=tuple(notes))

    hw = total_homology.window
    def hdim(deg):
        if hw is None or not hw[0] <= deg <= hw[1]:
            return 0
        return total_homology.dims[deg]

    def e3_check(p):
        deg = p + off
        ker0 = e2.dim(p, 0) - e2.differential(p, 0).rank()
        coker1 = e2.dim(p - 1, 1) - e2.differential(p + 1, 0).rank()
        if hdim(deg) != ker0 + coker1:
            raise ConvergenceMismatch(
                f"degree {deg}: dim H = {hdim(deg)} but E^3 gives {ker0} + {coker1}"
            )

    for p in range(lo - 1, hi + 1):
        if clean(p + off):
            e3_check(p)

    def e2_label(p, q):
        # both rows read as contact homology of the orbits at level p
        return f"HC_{p + n - 3}[{q}]" if n is not None else f"E2[{p},{q}]"

    def sh_node(p):
        return Node(f"SH_{p + off}", "SH", p + off, hdim(p + off))

    def e2_node(p, q):
        deg = p + n - 3 if n is not None else p + q + off
        return Node(e2_label(p, q), "HC" if n is not None else "E2", deg, e2.dim(p, q), e2.is_contaminated(p, q))

    def into_h(p1):
        """E^2_{p1,1} -> H_{p1+1+off}: slot chains are cycles."""
        s = e2.slot(p1, 1)
        deg = p1 + 1 + off
        cols = []
        for rep in (s.representatives() if s else ()):
            if cx.d(rep):
                raise NotTwoLine(f"slot ({p1}, 1) basis chain is not a cycle")
            cols.append(total_homology.class_coordinates(rep, deg))
        return QMatrix.from_columns(cols, hdim(deg)) if cols else QMatrix.zeros(hdim(deg), 0)

    def out_of_h(p):
        """H_{p+off} -> E^2_{p,0}: project a representative modulo B^2."""
        s = e2.slot(p, 0)
        deg = p + off
        reps = total_homology.representatives(deg) if hdim(deg) else ()
        if s is None or not s.dim:
            return QMatrix.zeros(0, len(reps))
        cols = [s.coordinates(cx.to_vector(rep, deg)) for rep in reps]
        return QMatrix.from_columns(cols, s.dim) if cols else QMatrix.zeros(s.dim, 0)

    nodes = [e2_node(hi - 1, 1), sh_node(hi)]
    maps = [into_h(hi - 1)]
    annotations = []
    d_maps = []
    for p in range(hi, lo - 1, -1):
        d2 = e2.differential(p, 0)
        maps += [out_of_h(p), d2, into_h(p - 2)]
        nodes += [e2_node(p, 0), e2_node(p - 2, 1), sh_node(p - 1)]
        d = d2
        if multiplicities is not None:
            rows = _unit_label(e2.slot(p - 2, 1), info) if e2.slot(p - 2, 1) else []
            cols = _unit_label(e2.slot(p, 0), info) if e2.slot(p, 0) else []
            if rows is not None and cols is not None:
                d = apply_theta_conjugation(d2, rows, cols, multiplicities)
        k = p + n - 3 if n is not None else p
        d_maps.append((k, d, d2))
        ann = {"p": p, "SH": p + off, "E2_0": [p, 0], "E2_1": [p - 2, 1], "SH_next": p - 1 + off}
        if n is not None:
            ann.update({"k": k, "HC": k, "HC_next": k - 2})
        annotations.append(ann)
    return LongExactSequence(
        tuple(nodes), tuple(maps), tuple(annotations), tuple(d_maps), (lo, hi), tuple(notes)
    )


def gysin_sequence(fc: FilteredComplex, window=None, n=None):
    """Pages, homology and the spliced sequence for a filtered complex."""
    _require_two_line_e0(fc)
    pgs = pages(fc, 2)
    h = homology(fc.complex)
    qs = _q_support(fc)
    info = getattr(fc, "info", None)
    mults = None
    if info is not None:
        mults = {og.orbit: og.multiplicity for og in info.values()}
        if n is None:
            n = fc.orbit_set.n
    seq = extract_les(
        pgs[2], h, window, n=n, clean=lambda deg: clean_degree(fc, deg, qs), info=info, multiplicities=mults
    )
    return seq, pgs


def pair_les(complex_: ChainComplex, sub_names, window=None) -> LongExactSequence:
    """... -> H_k(A) -> H_k(C) -> H_k(C, A) -> H_{k-1}(A) -> ... for a subcomplex A on ``sub_names``."""
    report = validate(complex_)
    if not report.valid:
        raise InvalidComplex(report)
    sub = set(sub_names)
    for s, t, _ in complex_.entries:
        if s in sub and t not in sub:
            raise ComplexError(f"{sorted(sub)[:3]}... is not a subcomplex: {s} -> {t}")
    A = complex_.restrict(sub)
    Q = complex_.restrict(set(g.name for g in complex_.generators) - sub)
    degs = complex_.degrees
    if not degs:
        return LongExactSequence((), ())
    lo, hi = window or (degs[0], degs[-1])
    w = (lo - 1, hi + 1)
    hA, hC, hQ = homology(A, w), homology(complex_, w), homology(Q, w)

    def classes(h, cx, deg, chains):
        cols = [h.class_coordinates({k: v for k, v in ch.items() if k in cx}, deg) for ch in chains]
        return QMatrix.from_columns(cols, h.dims[deg]) if cols else QMatrix.zeros(h.dims[deg], 0)

    nodes, maps = [], []
    for k in range(hi, lo - 1, -1):
        if nodes:
            # connecting map H_{k+1}(C,A) -> H_k(A): lift, apply d, the result lies in A
            maps.append(classes(hA, A, k, [complex_.d(rep) for rep in hQ.representatives(k + 1)]))
        nodes.append(Node(f"H_{k}(A)", "A", k, hA.dims[k]))
        maps.append(classes(hC, complex_, k, hA.representatives(k)))
        nodes.append(Node(f"H_{k}(C)", "C", k, hC.dims[k]))
        maps.append(classes(hQ, Q, k, hC.representatives(k)))
        nodes.append(Node(f"H_{k}(C,A)", "C/A", k, hQ.dims[k]))
    return LongExactSequence(tuple(nodes), tuple(maps), window=(lo, hi))


def assemble_split_les(s_dims, n: int, window) -> LongExactSequence:
    """The split sequence with HC_k = sum_{m >= 0} S_{k-2m} and SH_{k-(n-3)} = S_k.

    SH -> HC is the inclusion of the m = 0 summand, HC_k -> HC_{k-2} the
    projection forgetting it, and HC_{k-2} -> SH_{k-1-(n-3)} is zero.
    ``s_dims`` is indexed by HC degree k; ``window`` is an inclusive k range.
    """
    lo, hi = window
    s_dims = GradedDims(s_dims)
    low = min(list(s_dims) + [lo]) - 2

    def summands(k):
        return [(j, s_dims[j]) for j in range(k, low - 1, -2) if s_dims[j]]

    def hc_dim(k):
        return sum(d for _, d in summands(k))

    def inclusion(k):
        rows = hc_dim(k)
        m = [[0] * s_dims[k] for _ in range(rows)]
        for i in range(s_dims[k]):
            m[i][i] = 1
        return QMatrix(m, rows, s_dims[k])

    def projection(k):
        m = [[0] * hc_dim(k) for _ in range(hc_dim(k - 2))]
        off = s_dims[k]
        for i in range(hc_dim(k - 2)):
            m[i][off + i] = 1
        return QMatrix(m, hc_dim(k - 2), hc_dim(k))

    s = n - 3
    # each HC_k occurs twice: as source of D (row 0) and as target of D (row 1)
    nodes = [Node(f"HC_{hi - 1}[1]", "HC", hi - 1, hc_dim(hi - 1)), Node(f"SH_{hi - s}", "SH", hi - s, s_dims[hi])]
    maps = [QMatrix.zeros(s_dims[hi], hc_dim(hi - 1))]
    annotations = []
    for k in range(hi, lo - 1, -1):
        maps += [inclusion(k), projection(k), QMatrix.zeros(s_dims[k - 1], hc_dim(k - 2))]
        nodes += [
            Node(f"HC_{k}[0]", "HC", k, hc_dim(k)),
            Node(f"HC_{k - 2}[1]", "HC", k - 2, hc_dim(k - 2)),
            Node(f"SH_{k - 1 - s}", "SH", k - 1 - s, s_dims[k - 1]),
        ]
        sh, hc, hc2, sh2 = degree_bookkeeping(n, k)
        annotations.append({"k": k, "SH": sh, "HC": hc, "HC_next": hc2, "SH_next": sh2})
    return LongExactSequence(tuple(nodes), tuple(maps), tuple(annotations), window=(lo, hi))
