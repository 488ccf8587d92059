import random
from fractions import Fraction

import pytest

from conftest import random_two_line
from gysinkit.algebra.complex import ChainComplex, Generator, homology
from gysinkit.algebra.matrix import QMatrix
from gysinkit.errors import ComplexError, ConvergenceMismatch, NotTwoLine
from gysinkit.filtration import FilteredComplex, page
from gysinkit.gysin import (
    LongExactSequence,
    Node,
    assemble_split_les,
    degree_bookkeeping,
    extract_les,
    gysin_sequence,
    pair_les,
    verify_exactness,
)
from gysinkit.scenarios import riemann_surface


def node(label, dim):
    return Node(label, "X", 0, dim)


@pytest.mark.parametrize("n, k, want", [(2, 4, (5, 4, 2, 4)), (3, 0, (0, 0, -2, -1)), (1, 2, (4, 2, 0, 3))])
def test_degree_bookkeeping(n, k, want):
    assert degree_bookkeeping(n, k) == want


def test_sequence_shape_checked():
    with pytest.raises(ValueError):
        LongExactSequence((node("a", 1), node("b", 1)), ())
    with pytest.raises(ValueError):
        LongExactSequence((node("a", 1), node("b", 1)), (QMatrix.zeros(2, 1),))


def test_verify_exactness_short_exact():
    # 0 -> Q -> Q^2 -> Q -> 0
    seq = LongExactSequence(
        (node("0", 0), node("A", 1), node("B", 2), node("C", 1), node("0'", 0)),
        (QMatrix.zeros(1, 0), QMatrix([[1], [0]]), QMatrix([[0, 1]]), QMatrix.zeros(0, 1)),
    )
    cert = verify_exactness(seq)
    assert cert.exact and cert.failing() == ()
    assert cert.alternating_lhs == cert.alternating_rhs == 0


def test_verify_exactness_detects_failures():
    # composite nonzero although the ranks add up
    seq = LongExactSequence(
        (node("0", 0), node("A", 1), node("B", 2), node("C", 1), node("0'", 0)),
        (QMatrix.zeros(1, 0), QMatrix([[1], [0]]), QMatrix([[1, 0]]), QMatrix.zeros(0, 1)),
    )
    cert = verify_exactness(seq)
    assert not cert.exact
    assert "B" in cert.failing()
    assert not [c for c in cert.checks if c.label == "B"][0].composite_zero
    # ranks do not add up
    seq = LongExactSequence(
        (node("0", 0), node("A", 1), node("B", 2), node("0'", 0)),
        (QMatrix.zeros(1, 0), QMatrix([[1], [0]]), QMatrix.zeros(0, 2)),
    )
    assert verify_exactness(seq).failing() == ("A", "B") or verify_exactness(seq).failing() == ("B",)
    assert not verify_exactness(seq).exact


def test_disc_sequence(backend):
    fc = riemann_surface(0, 5).filtered()
    seq, pgs = gysin_sequence(fc, n=1)
    assert seq.window == (2, 10)
    assert seq.certificate().exact
    dims = {nd.label: nd.dim for nd in seq.nodes}
    assert dims["SH_2"] == 1
    assert all(v == 0 for k, v in dims.items() if k.startswith("SH_") and k != "SH_2")
    assert [dims[f"HC_{2 * b - 2}[0]"] for b in range(1, 6)] == [1] * 5
    Ds = {k: (D, d2) for k, D, d2 in seq.d_maps}
    for b in range(2, 6):
        D, d2 = Ds[2 * b - 2]
        # d2(gamma_b.M) = (b - 1) gamma_{b-1}.m; Theta turns it into D(gamma_b) = gamma_{b-1}
        assert d2.rows == ((b - 1,),) and D.rows == ((1,),)
    assert Ds[0][0].shape == (0, 1)
    assert seq.to_json()["certificate"]["exact"]


def test_disc_sequence_window_clipped():
    fc = riemann_surface(0, 5).filtered()
    seq, _ = gysin_sequence(fc, window=(4, 40), n=1)
    assert seq.window == (4, 10)
    assert seq.notes and "clipped" in seq.notes[0]
    seq, _ = gysin_sequence(fc, window=(30, 40), n=1)
    assert seq.nodes == ()


def test_extract_les_maps_are_computed(backend):
    fc = riemann_surface(0, 4).filtered()
    seq, _ = gysin_sequence(fc, n=1)
    i = seq.node_index("SH_2")
    assert seq.maps[i].rows == ((1,),)  # SH_2 -> HC_0 is an isomorphism
    assert seq.map_from("HC_0[0]").shape == (0, 1)


def test_convergence_mismatch_raised():
    fc = riemann_surface(0, 3).filtered()
    e2 = page(fc, 2)
    extra = ChainComplex(list(fc.complex.generators) + [Generator("ghost", 2, 2)], fc.complex.entries)
    with pytest.raises(ConvergenceMismatch):
        extract_les(e2, homology(extra), n=1)


def test_not_two_line_e0():
    fc = FilteredComplex(ChainComplex([Generator("a", 3, 0)], []))
    with pytest.raises(NotTwoLine):
        gysin_sequence(fc)
    with pytest.raises(NotTwoLine):
        extract_les(page(fc, 2), homology(fc.complex))


def test_random_two_line_sequences_exact(backend):
    rng = random.Random(21)
    for _ in range(200):
        fc = random_two_line(rng)
        seq, _ = gysin_sequence(fc)
        assert verify_exactness(seq).exact


def test_pair_les_interval():
    cx = ChainComplex(
        [Generator("v0", 0), Generator("v1", 0), Generator("e", 1)],
        [("e", "v1", 1), ("e", "v0", -1)],
    )
    seq = pair_les(cx, {"v0", "v1"})
    assert seq.certificate().exact
    dims = {nd.label: nd.dim for nd in seq.nodes}
    assert dims == {"H_1(A)": 0, "H_1(C)": 0, "H_1(C,A)": 1, "H_0(A)": 2, "H_0(C)": 1, "H_0(C,A)": 0}
    assert seq.maps[2].rank() == 1  # connecting map H_1(C,A) -> H_0(A)
    with pytest.raises(ComplexError):
        pair_les(cx, {"e"})


def test_split_sequence():
    seq = assemble_split_les({2: 1}, 2, (2, 8))
    assert seq.certificate().exact
    dims = {nd.label: nd.dim for nd in seq.nodes}
    assert dims["HC_8[0]"] == 1 and dims["HC_6[1]"] == 1 and dims["SH_3"] == 1
    conn = [m.rank() for i, m in enumerate(seq.maps) if seq.nodes[i].label.endswith("[1]")]
    assert conn and not any(conn)
    two = assemble_split_les({3: 1, 4: 2}, 3, (2, 9))
    assert two.certificate().exact
    assert {nd.label: nd.dim for nd in two.nodes}["HC_8[0]"] == 2


def test_split_sequence_zero_input():
    seq = assemble_split_les({}, 2, (0, 5))
    assert seq.certificate().exact
    assert all(nd.dim == 0 for nd in seq.nodes)


def test_sequence_json_is_deterministic():
    fc = riemann_surface(0, 3).filtered()
    a, _ = gysin_sequence(fc, n=1)
    b, _ = gysin_sequence(riemann_surface(0, 3).filtered(), n=1)
    assert a.to_json() == b.to_json()
    assert a.to_json()["D"][0]["D"] == [[str(Fraction(1))]]
