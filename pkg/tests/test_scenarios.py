import random

import pytest

from gysinkit.algebra.complex import GradedDims
from gysinkit.errors import DimensionSupportViolation, InvalidMorseData
from gysinkit.scenarios import (
    BaseMorse,
    cotangent_gysin,
    disc_bundle,
    riemann_surface,
    run_scenario,
    sphere_base,
    subcritical_model,
    subcritical_stein,
    torus_base,
)


def ints(d):
    return {int(k): v for k, v in d.items()}


def shifted_sum(dims, k, start=0):
    """Independent oracle for sum_{m >= start} dims[k - 2m]."""
    return sum(dims.get(k - 2 * m, 0) for m in range(start, 200))


# -- Riemann surfaces --------------------------------------------------------


def test_disc(backend):
    rep = run_scenario(riemann_surface(0, 5))
    assert rep["ok"], [c for c in rep["checks"] if not c["ok"]]
    c = rep["classes"]["0"]
    assert ints(c["SH"]) == {2: 1}
    assert ints(c["HC"]) == {0: 1, 2: 1, 4: 1, 6: 1, 8: 1}
    # D is an isomorphism HC_{2b-2} -> HC_{2b-4} for every b >= 2 in the window
    assert {k for k, r in ints(c["D_ranks"]).items() if r} == {2, 4, 6, 8}
    assert not any(c["connecting_ranks"].values())
    assert c["exact"] and c["window"] == [0, 8]


def test_disc_larger_truncation_agrees(backend):
    small = run_scenario(riemann_surface(0, 3))["classes"]["0"]
    big = run_scenario(riemann_surface(0, 8))["classes"]["0"]
    for k in small["HC_clean_degrees"]:
        assert small["HC"].get(str(k), 0) == big["HC"].get(str(k), 0)


@pytest.mark.parametrize("g", [1, 2])
def test_higher_genus(g, backend):
    rep = run_scenario(riemann_surface(g, 4))
    assert rep["ok"]
    for b in range(1, 5):
        c = rep["classes"][str(b)]
        assert ints(c["SH"]) == {2 * b: 1, 2 * b + 1: 1}
        assert ints(c["HC"]) == {2 * b - 2: 1}
        assert not any(c["D_ranks"].values())
    assert rep["classes"]["0"]["empty"] and rep["classes"]["-1"]["empty"]


def test_every_class_certified(backend):
    for sc in (riemann_surface(0, 4), riemann_surface(1, 3)):
        rep = run_scenario(sc)
        names = [ch["name"] for ch in rep["checks"]]
        assert any("sequence exact" in n for n in names)
        assert all(ch["ok"] for ch in rep["checks"])


# -- subcritical Stein domains -----------------------------------------------


def test_subcritical_ball(backend):
    rep = subcritical_stein({4: 1}, 2, (2, 10))
    assert rep.ok
    assert rep.hc == GradedDims({2: 1, 4: 1, 6: 1, 8: 1, 10: 1})
    assert rep.sh == GradedDims({3: 1})
    assert rep.engine["ok"] and rep.engine["HC_matches"]
    assert not any(rep.connecting_ranks.values())


def test_subcritical_zero_input():
    rep = subcritical_stein({}, 3, (0, 6))
    assert rep.ok
    assert rep.hc == GradedDims() and rep.sh == GradedDims()


@pytest.mark.parametrize("betti, n", [({3: 1, 4: 1}, 2), ({4: 2, 5: 1, 6: 3}, 3)])
def test_subcritical_formulas(betti, n, backend):
    rep = subcritical_stein(betti, n, (0, 10))
    assert rep.ok
    for k in range(0, 11):
        assert rep.hc[k] == shifted_sum(betti, k + 2)
        assert rep.sh[k - (n - 3)] == betti.get(k + 2, 0)


def test_subcritical_random(backend):
    rng = random.Random(5)
    for _ in range(25):
        n = rng.randint(2, 4)
        betti = {j: rng.randint(0, 2) for j in range(n + 1, 2 * n + 1)}
        betti = {j: v for j, v in betti.items() if v}
        rep = subcritical_stein(betti, n, (0, 8))
        assert rep.ok, (betti, n)
        assert all(rep.hc[k] == shifted_sum(betti, k + 2) for k in range(0, 9))


def test_subcritical_support_violation():
    with pytest.raises(DimensionSupportViolation):
        subcritical_stein({2: 1}, 2, (0, 4))
    with pytest.raises(DimensionSupportViolation):
        subcritical_model({5: 1}, 2, 3)
    with pytest.raises(DimensionSupportViolation):
        subcritical_stein({2: 1}, 1, (0, 4))


# -- negative disc bundles -----------------------------------------------------


def test_disc_bundle_torus(backend):
    rep = run_scenario(disc_bundle(torus_base(), 4))
    assert rep["ok"]
    c = rep["classes"]["0"]
    assert ints(c["SH"]) == {1: 1, 2: 2, 3: 1}
    assert ints(c["HC"]) == {0: 1, 1: 2, 2: 2, 3: 2, 4: 2, 5: 2, 6: 2}
    assert not any(c["connecting_ranks"].values())


def test_disc_bundle_sphere(backend):
    rep = run_scenario(disc_bundle(sphere_base(), 4))
    assert rep["ok"]
    c = rep["classes"]["0"]
    # multiplicity one contributes the two critical points in degrees 0 and 2
    assert ints(c["HC"]) == {0: 1, 2: 2, 4: 2, 6: 2}
    assert ints(c["SH"]) == {1: 1, 3: 1}


def test_disc_bundle_nonzero_morse_differential(backend):
    # RP^2-like base: d(e2) = 2 e1, rationally a point plus nothing
    base = BaseMorse(2, (("e0", 0), ("e1", 1), ("e2", 2)), (("e2", "e1", 2),))
    assert base.homology() == GradedDims({0: 1})
    rep = run_scenario(disc_bundle(base, 3))
    assert rep["ok"], [c for c in rep["checks"] if not c["ok"]]
    c = rep["classes"]["0"]
    assert ints(c["HC"]) == {0: 1, 2: 1, 4: 1}


def test_disc_bundle_random_bases(backend):
    rng = random.Random(99)
    for trial in range(100):
        dim = rng.choice([2, 4])
        hb = {i: rng.randint(0, 2) for i in range(dim + 1)}
        hb[0] = max(hb[0], 1)
        pts = tuple((f"p{i}_{j}", i) for i, m in hb.items() for j in range(m))
        rep = run_scenario(disc_bundle(BaseMorse(dim, pts), 3))
        assert rep["ok"], (trial, hb)
        c = rep["classes"]["0"]
        for k in c["HC_clean_degrees"]:
            assert c["HC"].get(str(k), 0) == shifted_sum(hb, k), (hb, k)


def test_invalid_morse_data():
    with pytest.raises(InvalidMorseData):
        BaseMorse(2, (("a", 3),)).complex()
    with pytest.raises(InvalidMorseData):
        BaseMorse(2, (("a", 0), ("a", 1))).complex()
    with pytest.raises(InvalidMorseData):
        BaseMorse(2, (("a", 0), ("b", 2)), (("b", "a", 1),)).complex()
    with pytest.raises(InvalidMorseData):
        disc_bundle(BaseMorse(3, (("a", 0),)), 2)


# -- cotangent bundles ---------------------------------------------------------


def convolve_11(s):
    return {k: s.get(k, 0) + s.get(k - 1, 0) for k in range(min(s, default=0), max(s, default=0) + 2)}


def test_cotangent_circle_class():
    # free S^1 action on a nonzero winding component: equivariant part is a point
    rep = cotangent_gysin({0: 1, 1: 1}, {0: 1}, {}, 1)
    assert rep.exact and rep.inconsistent == ()
    assert rep.certificate.exact


def test_cotangent_reversed_relation_refuted():
    # reading the relation the other way round cannot be completed to an exact sequence
    rep = cotangent_gysin({0: 1, 1: 1}, {0: 1, 1: 2, 2: 1}, {}, 1)
    assert rep.inconsistent


def test_cotangent_off_by_one_refuted():
    rep = cotangent_gysin({1: 1, 2: 1}, {0: 1}, {}, 1)
    assert "H_2(L)" in rep.inconsistent


def test_cotangent_zero_and_relative():
    assert cotangent_gysin({}, {}, {}, 2).exact
    rel = cotangent_gysin({0: 1, 1: 1}, {0: 1}, {}, 2, relative=True)
    assert rel.exact
    assert any("(L0, L)" in n["label"] for n in rel.to_json()["les"]["nodes"])


def test_cotangent_random_d_zero():
    rng = random.Random(3)
    for _ in range(100):
        s = {k: rng.randint(0, 3) for k in range(rng.randint(1, 6))}
        rep = cotangent_gysin(convolve_11(s), s, {}, rng.randint(1, 4))
        assert rep.exact and rep.inconsistent == ()
