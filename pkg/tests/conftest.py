import random
from fractions import Fraction
from pathlib import Path

import pytest

from gysinkit.algebra import _backend
from gysinkit.algebra.complex import ChainComplex, Generator
from gysinkit.orbits import OrbitSet, ReebOrbit

BACKENDS = ["python"] + (["cython"] if _backend.compiled_kernel is not None else [])

# Filled by tests/test_acceptance.py, printed at the end of the run.
ACCEPTANCE = {}


@pytest.fixture(params=BACKENDS)
def backend(request, monkeypatch):
    kern = _backend.python_kernel if request.param == "python" else _backend.compiled_kernel
    monkeypatch.setattr(_backend, "kernel", kern)
    return request.param


def random_complex(rng, max_gens=8, max_coeff=3, degrees=(0, 4)):
    """A random valid complex with homology dims known without any elimination.

    It is a direct sum of acyclic pairs a -> b and free cycles, conjugated
    degree by degree with random elementary changes of basis, so the
    expected homology is the count of free cycles per degree.
    """
    lo, hi = degrees
    ngen = rng.randint(1, max_gens)
    gens, base_d, expected = [], {}, {}
    i = 0
    while len(gens) < ngen:
        deg = rng.randint(lo, hi)
        if rng.random() < 0.5 and len(gens) + 2 <= ngen:
            a, b = f"a{i}", f"b{i}"
            gens += [(a, deg + 1), (b, deg)]
            base_d[a] = {b: 1}
        else:
            gens.append((f"f{i}", deg))
            expected[deg] = expected.get(deg, 0) + 1
        i += 1
    return _assemble(gens, base_d, rng, max_coeff), expected


def _assemble(gens, base_d, rng, max_coeff):
    by_deg = {}
    for nm, deg in gens:
        by_deg.setdefault(deg, []).append(nm)
    # elementary operations per degree: e_{x,y}(c): x -> x + c y
    ops = {deg: [] for deg in by_deg}
    for deg, names in by_deg.items():
        if len(names) >= 2:
            for _ in range(len(names)):
                x, y = rng.sample(names, 2)
                ops[deg].append((x, y, rng.randint(-max_coeff, max_coeff)))

    def apply_T(vec, deg, inverse=False):
        # T acts on coordinate vectors: (T v)_y += c v_x for op (x, y, c)
        seq = ops.get(deg, [])
        if inverse:
            seq = [(x, y, -c) for x, y, c in reversed(seq)]
        v = dict(vec)
        for x, y, c in seq:
            if v.get(x):
                v[y] = v.get(y, 0) + c * v[x]
        return {k: c for k, c in v.items() if c}

    deg_of = dict(gens)
    entries = []
    for nm, deg in gens:
        # d'(e_nm) = T_{deg-1} d T_deg^{-1} e_nm
        pre = apply_T({nm: 1}, deg, inverse=True)
        img = {}
        for src, c in pre.items():
            for tgt, v in base_d.get(src, {}).items():
                img[tgt] = img.get(tgt, 0) + c * v
        img = apply_T(img, deg - 1)
        for tgt, c in img.items():
            if c:
                entries.append((nm, tgt, c))
    rng.shuffle(gens)
    return ChainComplex([Generator(nm, deg_of[nm]) for nm, _ in gens], entries)


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture
def fixtures():
    return Path(__file__).parent / "fixtures"


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        ok, line = ACCEPTANCE[key]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {key}: {line}")


def random_two_line(rng, max_blocks=5, levels=(0, 6)):
    """A random filtered complex with E^0 in rows q = 0, 1 and shifts 0..2.

    Blocks are free cycles and acyclic pairs a -> b placed on slots with an
    allowed shift; the whole thing is then conjugated by elementary changes
    of basis x -> x + c y with y in the same degree and filtration at most
    that of x. Candidates whose shifts leave 0..2 are redrawn.
    """
    from gysinkit.errors import FiltrationViolation
    from gysinkit.filtration import FilteredComplex

    lo, hi = levels
    while True:
        gens, base_d = [], {}
        for i in range(rng.randint(1, max_blocks)):
            p, q = rng.randint(lo, hi), rng.randint(0, 1)
            if rng.random() < 0.4:
                gens.append((f"f{i}", p + q, p))
                continue
            shift = rng.choice([s for s in (0, 1, 2) if (s, q) != (0, 0) and (s, q) != (2, 1)])
            tq = {0: 0, 1: q, 2: 1}[shift] if shift else 0
            a, b = f"a{i}", f"b{i}"
            gens += [(a, p + q, p), (b, p - shift + tq, p - shift)]
            base_d[a] = {b: rng.choice([1, 2, -1, Fraction(1, 2)])}
        ops = []
        for _ in range(len(gens)):
            x = rng.choice(gens)
            ys = [g for g in gens if g[1] == x[1] and g[2] <= x[2] and g[0] != x[0]]
            if ys:
                ops.append((x[0], rng.choice(ys)[0], rng.randint(-2, 2)))
        cx = _conjugate(gens, base_d, ops)
        try:
            return FilteredComplex(cx, 2)
        except FiltrationViolation:
            continue


def _conjugate(gens, base_d, ops):
    deg = {nm: d for nm, d, _ in gens}

    def T(vec, inverse=False):
        seq = [(x, y, -c) for x, y, c in reversed(ops)] if inverse else ops
        v = dict(vec)
        for x, y, c in seq:
            if v.get(x):
                v[y] = v.get(y, 0) + c * v[x]
        return {k: c for k, c in v.items() if c}

    entries = []
    for nm, _, _ in gens:
        img = {}
        for src, c in T({nm: 1}, inverse=True).items():
            for tgt, v in base_d.get(src, {}).items():
                img[tgt] = img.get(tgt, 0) + c * v
        for tgt, c in T(img).items():
            entries.append((nm, tgt, c))
    assert all(deg[t] == deg[s] - 1 for s, t, _ in entries)
    return ChainComplex([Generator(nm, d, p) for nm, d, p in gens], entries)


def orbit(name, action, mu, k=1, simple=None, parity=None, neg=None, cls="0", aug=0):
    return ReebOrbit(name, Fraction(action), mu, k, cls, simple, parity, neg, Fraction(aug))


def random_orbit_set(rng):
    """Simple orbits with random iterates up to 4; parity evidence makes some even iterates bad."""
    orbits = []
    for i in range(rng.randint(1, 3)):
        mu1 = rng.randint(-2, 3)
        mu2 = mu1 + rng.choice([1, 2])
        action = Fraction(rng.randint(1, 5), rng.randint(2, 7))
        orbits.append(orbit(f"s{i}", action, mu1, 1, None, (mu1, mu2)))
        for k in range(2, rng.randint(2, 5)):
            mu = mu1 * k + rng.randint(-1, 1) if k % 2 else mu2 * (k // 2)
            orbits.append(orbit(f"s{i}^{k}", action * k, mu, k, (f"s{i}", k), (mu1, mu2)))
    return OrbitSet(orbits, rng.randint(1, 4))
