"""Reeb orbit records and the complexes built from them.

Orbit data is taken as given: indices, actions, multiplicities and every
differential coming from a count of curves are inputs. This module only
classifies orbits, assigns gradings and filtration levels, installs the
canonical Morse-Bott differential inside each orbit circle and checks the
supplied data for consistency.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

from .algebra.complex import ZERO_CLASS, ZERO_LABEL, ChainComplex, Generator, HomologyClass, validate
from .algebra.rational import parse_rational
from .errors import (
    ActionIncrease,
    AugmentationViolation,
    BadOrbitGenerator,
    DegeneratePath,
    DegreeMismatch,
    FiltrationViolation,
    InconsistentEvidence,
    InvalidComplex,
    MissingEvidence,
    OrbitDataError,
    UnknownMultiplicity,
)
from .filtration import FilteredComplex


class OrbitKind(enum.Enum):
    GOOD = "good"
    BAD = "bad"


class Side(enum.Enum):
    SYMPLECTIC = "symplectic"
    CONTACT_S1 = "contact_s1"


class Convention(enum.Enum):
    STANDARD = "standard"
    CIRCLE_REEB = "circle_reeb"


@dataclass(frozen=True)
class ReebOrbit:
    name: str
    action: Fraction
    mu: int
    multiplicity: int = 1
    class_label: str = ZERO_LABEL
    underlying_simple: tuple | None = None  # (simple orbit name, iterate count)
    parity_evidence: tuple | None = None  # (mu of simple orbit, mu of its square)
    neg_eigencount: int | None = None
    augmentation: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "action", Fraction(self.action))
        object.__setattr__(self, "augmentation", Fraction(self.augmentation))
        if self.action <= 0:
            raise OrbitDataError(f"orbit {self.name}: action must be positive")
        if self.multiplicity < 1:
            raise OrbitDataError(f"orbit {self.name}: multiplicity must be >= 1")
        if self.underlying_simple is not None:
            simple, k = self.underlying_simple
            if k < 1:
                raise OrbitDataError(f"orbit {self.name}: iterate count must be >= 1")
            object.__setattr__(self, "underlying_simple", (simple, int(k)))
        if self.parity_evidence is not None:
            object.__setattr__(self, "parity_evidence", tuple(int(x) for x in self.parity_evidence))

    @property
    def iterate(self):
        return self.underlying_simple[1] if self.underlying_simple else 1


@dataclass(frozen=True)
class OrbitSet:
    orbits: tuple
    n: int
    action_bound: Fraction | None = None
    classes: tuple = (ZERO_CLASS,)

    def __post_init__(self):
        object.__setattr__(self, "orbits", tuple(self.orbits))
        object.__setattr__(self, "classes", tuple(self.classes))
        if self.action_bound is not None:
            object.__setattr__(self, "action_bound", Fraction(self.action_bound))
        names = [o.name for o in self.orbits]
        if len(set(names)) != len(names):
            raise OrbitDataError("duplicate orbit names")
        labels = [c.label for c in self.classes]
        if len(set(labels)) != len(labels):
            raise OrbitDataError("duplicate homology class labels")
        if self.action_bound is not None:
            for o in self.orbits:
                if o.action > self.action_bound:
                    raise OrbitDataError(f"orbit {o.name}: action {o.action} exceeds the bound")
                if o.action == self.action_bound:
                    raise OrbitDataError(f"action bound {self.action_bound} is in the action spectrum")
        by_name = {o.name: o for o in self.orbits}
        for o in self.orbits:
            if o.underlying_simple is None:
                continue
            simple = by_name.get(o.underlying_simple[0])
            if simple is not None and o.multiplicity != simple.multiplicity * o.iterate:
                raise OrbitDataError(
                    f"orbit {o.name}: multiplicity {o.multiplicity} is not "
                    f"{simple.multiplicity} x {o.iterate}"
                )

    def orbit(self, name):
        for o in self.orbits:
            if o.name == name:
                return o
        raise KeyError(name)

    def class_(self, label):
        for c in self.classes:
            if c.label == label:
                return c
        raise KeyError(label)


def classify(orbit: ReebOrbit) -> OrbitKind:
    """Good or bad. Odd iterates are always good."""
    if orbit.iterate % 2:
        return OrbitKind.GOOD
    by_parity = by_eigen = None
    if orbit.parity_evidence is not None:
        s, sq = orbit.parity_evidence
        by_parity = (s - sq) % 2 != 0
    if orbit.neg_eigencount is not None:
        by_eigen = orbit.neg_eigencount % 2 == 1
    if by_parity is None and by_eigen is None:
        raise MissingEvidence(f"even iterate {orbit.name} has no parity evidence or eigenvalue count")
    if by_parity is not None and by_eigen is not None and by_parity != by_eigen:
        raise InconsistentEvidence(f"orbit {orbit.name}: parity evidence and eigenvalue count disagree")
    return OrbitKind.BAD if (by_parity or by_eigen) else OrbitKind.GOOD


def iterate_grading(base: ReebOrbit, k: int) -> int:
    """Parity of mu of the k-th iterate: odd iterates follow the simple orbit, even ones its square."""
    if base.parity_evidence is None:
        raise MissingEvidence(f"orbit {base.name} has no parity evidence")
    s, sq = base.parity_evidence
    return (s if k % 2 else sq) % 2


def cz_rotation_path(a, convention: Convention = Convention.STANDARD) -> int:
    """Index of the rotation path t -> exp(2 pi i a t), t in [0, 1].

    The standard index counts crossings: the start contributes 1 in the
    direction of rotation and each interior crossing 2, giving 2 floor(a) + 1.
    The circle-Reeb convention assigns 2b to the b-fold cover.
    """
    a = Fraction(a)
    if convention is Convention.CIRCLE_REEB:
        if a.denominator != 1 or a < 1:
            raise OrbitDataError(f"circle-Reeb convention needs a positive integer, got {a}")
        return 2 * int(a)
    if a.denominator == 1:
        raise DegeneratePath(f"rotation by {a} full turns ends at the identity")
    return 2 * math.floor(a) + 1


def generator_name(base: str, label: str = ZERO_LABEL) -> str:
    return base if label == ZERO_LABEL else f"e^{label}*{base}"


def contact_degree(orbit: ReebOrbit, n: int, cls: HomologyClass = ZERO_CLASS) -> int:
    return orbit.mu + n - 3 + cls.grading_shift


def _screen_entry(src_orbit, tgt_orbit, src_name, tgt_name, good):
    for o, nm in ((src_orbit, src_name), (tgt_orbit, tgt_name)):
        if good is not None and not good[o.name]:
            raise BadOrbitGenerator(f"differential entry references bad orbit {o.name} ({nm})")
    if src_orbit.name != tgt_orbit.name and src_orbit.action <= tgt_orbit.action:
        raise ActionIncrease(
            f"entry {src_name} -> {tgt_name} does not decrease action "
            f"({src_orbit.action} -> {tgt_orbit.action})"
        )


def _entries(data):
    for e in data or ():
        if isinstance(e, dict):
            yield e["from"], e["to"], parse_rational(e["coeff"])
        else:
            s, t, c = e
            yield s, t, Fraction(c)


def build_contact_complex(os: OrbitSet, class_filter=None, differential_data=()) -> ChainComplex:
    """Contact complex generated by the good orbits tensored with the declared classes.

    ``differential_data`` entries name generators of the result (the orbit
    name, prefixed ``e^A*`` for a nonzero class). ``class_filter`` keeps only
    orbits of one free homotopy class.
    """
    kinds = {o.name: classify(o) is OrbitKind.GOOD for o in os.orbits}
    gens, owner = [], {}
    for o in os.orbits:
        if class_filter is not None and o.class_label != class_filter:
            continue
        if not kinds[o.name]:
            continue
        for cls in os.classes:
            nm = generator_name(o.name, cls.label)
            gens.append(Generator(nm, contact_degree(o, os.n, cls), 0, o.class_label, cls))
            owner[nm] = o
    by_name = {o.name: o for o in os.orbits}
    bad_names = {generator_name(o.name, c.label): o for o in os.orbits if not kinds[o.name] for c in os.classes}
    diff = []
    for s, t, c in _entries(differential_data):
        for nm in (s, t):
            if nm in bad_names:
                raise BadOrbitGenerator(f"differential entry references bad orbit {bad_names[nm].name}")
            if nm not in owner and _orbit_of_name(nm, by_name) is None:
                raise OrbitDataError(f"differential entry references unknown generator {nm!r}")
        if s not in owner and t not in owner:
            continue  # both ends outside class_filter
        if s not in owner or t not in owner:
            raise OrbitDataError(f"entry {s} -> {t} crosses free homotopy classes")
        _screen_entry(owner[s], owner[t], s, t, None)
        diff.append((s, t, c))
    cx = ChainComplex(gens, diff)
    for s, t, _ in cx.entries:
        if cx.generator(t).degree != cx.generator(s).degree - 1:
            raise DegreeMismatch(f"entry {s} -> {t} does not lower the degree by one")
    report = validate(cx)
    if not report.valid:
        raise InvalidComplex(report)
    check_augmentation(os, cx, owner)
    return cx


def _orbit_of_name(nm, by_name):
    base = nm.split("*", 1)[1] if nm.startswith("e^") and "*" in nm else nm
    return by_name.get(base)


def check_augmentation(os: OrbitSet, cx: ChainComplex, owner):
    """Degree admissibility of nonzero augmentation values and e o d = 0.

    e o d is evaluated on zero-class generators and grouped by the Novikov
    class of the target, the finite fragment this engine represents.
    """
    for o in os.orbits:
        if not o.augmentation:
            continue
        deg = o.mu + os.n - 3
        if not any(c.grading_shift == deg for c in os.classes):
            raise AugmentationViolation(
                f"orbit {o.name} has augmentation {o.augmentation} but no declared class has degree {deg}"
            )
    for g in cx.generators:
        totals = {}
        for t, c in cx.d_of(g.name).items():
            e = owner[t].augmentation
            if e:
                lbl = cx.generator(t).novikov.label
                totals[lbl] = totals.get(lbl, 0) + c * e
        bad = {k: v for k, v in totals.items() if v}
        if bad:
            raise AugmentationViolation(f"e(d({g.name})) = {bad} is nonzero")


@dataclass(frozen=True)
class OrbitGenerator:
    orbit: str
    kind: str  # "M" or "m"
    class_label: str
    multiplicity: int


class MorseBottComplex(FilteredComplex):
    """Filtered complex with two generators per orbit and declared class.

    ``info`` maps each generator name to its :class:`OrbitGenerator`.
    """

    def __init__(self, complex_, info, orbit_set, side, excluded_from=None, degree_offset=0):
        super().__init__(complex_, 2, excluded_from, degree_offset)
        self.info = dict(info)
        self.orbit_set = orbit_set
        self.side = side

    def multiplicity(self, name):
        try:
            return self.info[name].multiplicity
        except KeyError:
            raise UnknownMultiplicity(f"no multiplicity for generator {name!r}") from None

    def theta_factor(self, name):
        """Theta scales gamma (x) m by 1/kappa and fixes gamma (x) M."""
        k = self.multiplicity(name)
        return Fraction(1, k) if self.info[name].kind == "m" else Fraction(1)


def mb_names(orbit_name, label=ZERO_LABEL):
    return generator_name(f"{orbit_name}.M", label), generator_name(f"{orbit_name}.m", label)


def morse_bott_chain_complex(os: OrbitSet, side: Side = Side.SYMPLECTIC, differential_data=(), contact_differential=()):
    """Unvalidated Morse-Bott chain complex, its generator info and the degree offset."""
    offset = 0 if side is Side.SYMPLECTIC else os.n - 3
    kinds = {o.name: classify(o) is OrbitKind.GOOD for o in os.orbits}
    by_name = {o.name: o for o in os.orbits}
    gens, info, owner = [], {}, {}
    diff = []
    for o in os.orbits:
        for cls in os.classes:
            level = o.mu + cls.grading_shift
            base = level + offset
            big, small = mb_names(o.name, cls.label)
            gens.append(Generator(big, base, level, o.class_label, cls))
            gens.append(Generator(small, base + 1, level, o.class_label, cls))
            info[big] = OrbitGenerator(o.name, "M", cls.label, o.multiplicity)
            info[small] = OrbitGenerator(o.name, "m", cls.label, o.multiplicity)
            owner[big] = owner[small] = o
            if not kinds[o.name]:
                diff.append((small, big, Fraction(2)))
    for s, t, c in _entries(contact_differential):
        so, to = by_name.get(s), by_name.get(t)
        if so is None or to is None:
            raise OrbitDataError(f"contact differential references unknown orbit in {s} -> {t}")
        _screen_entry(so, to, s, t, kinds)
        for cls in os.classes:
            sM, sm = mb_names(s, cls.label)
            tM, tm = mb_names(t, cls.label)
            diff.append((sM, tM, c))
            diff.append((sm, tm, c * to.multiplicity / so.multiplicity))
    gen_by_name = {g.name: g for g in gens}
    for s, t, c in _entries(differential_data):
        for nm in (s, t):
            if nm not in gen_by_name:
                raise OrbitDataError(f"differential entry references unknown generator {nm!r}")
        gs, gt = gen_by_name[s], gen_by_name[t]
        if gt.degree != gs.degree - 1:
            raise DegreeMismatch(f"entry {s} -> {t} does not lower the degree by one")
        shift = gs.filtration - gt.filtration
        if not 0 <= shift <= 2:
            raise FiltrationViolation((s, t), shift)
        _screen_entry(owner[s], owner[t], s, t, None)
        diff.append((s, t, c))
    cx = ChainComplex(gens, diff)
    for nm, g in gen_by_name.items():
        if info[nm].kind == "m":
            partner = gen_by_name[nm[: -len(".m")] + ".M"]
            assert g.degree == partner.degree + 1 and g.filtration == partner.filtration
    return cx, info, offset


def build_morse_bott_complex(
    os: OrbitSet,
    side: Side = Side.SYMPLECTIC,
    differential_data=(),
    contact_differential=(),
    excluded_from=None,
) -> MorseBottComplex:
    """Morse-Bott complex: generators gamma.M (degree base) and gamma.m (base + 1).

    The base degree is mu - 2<c1, A> on the symplectic side and
    mu + n - 3 - 2<c1, A> on the S^1-parametrised contact side; both sides use
    the filtration level mu - 2<c1, A>. The canonical d^0 sends gamma.m to
    2 gamma.M for bad orbits and vanishes otherwise. ``contact_differential``
    is a contact differential on orbit names, installed as
    d^1(gamma.M) = sum c gamma'.M and d^1(gamma.m) = sum c k'/k gamma'.m.
    ``differential_data`` entries name Morse-Bott generators directly.
    """
    cx, info, offset = morse_bott_chain_complex(os, side, differential_data, contact_differential)
    return MorseBottComplex(cx, info, os, side, excluded_from, offset)


def theta(chain, mb: MorseBottComplex):
    """Apply Theta to a chain {generator name: coefficient}."""
    return {nm: c * mb.theta_factor(nm) for nm, c in chain.items()}


def theta_inv(chain, mb: MorseBottComplex):
    return {nm: c / mb.theta_factor(nm) for nm, c in chain.items()}
