import json
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gysinkit.algebra.complex import GradedDims
from gysinkit.errors import ParseError
from gysinkit.io import complex_file_from_dict, complex_file_to_dict, dumps, load_path, loads, read_complex_file
from gysinkit.scenarios import disc_bundle, riemann_surface, subcritical_model, torus_base

MINIMAL = {"n": 1, "generators": [{"name": "a", "degree": 0}], "differential": []}


def test_minimal_file_parses():
    cf = complex_file_from_dict(loads(json.dumps(MINIMAL)))
    assert cf.n == 1 and cf.orbit_set is None
    assert [g.name for g in cf.complex().generators] == ["a"]


@pytest.mark.parametrize(
    "text",
    [
        '{"n": 1, "differential": [{"from": "a", "to": "b", "coeff": 0.5}]}',
        '{"n": 1, "differential": [{"from": "a", "to": "b", "coeff": "0.5"}]}',
        '{"n": 1, "differential": [{"from": "a", "to": "b", "coeff": 1e3}]}',
        '{"n": 1, "generators": [{"name": "a", "degree": NaN}]}',
    ],
)
def test_floats_rejected(text):
    with pytest.raises(ParseError):
        loads(text)


@pytest.mark.parametrize(
    "data",
    [
        {},
        {"n": 1, "extra": 1},
        {"n": 1, "generators": [{"name": "a"}]},
        {"n": 1, "orbits": [{"name": "g", "action": "1", "mu": 1, "kappa": 0}]},
        {"n": 1, "side": "sideways"},
        {"n": "1"},
    ],
)
def test_schema_is_strict(data):
    with pytest.raises(ParseError):
        loads(json.dumps(data))


def test_malformed_and_missing(tmp_path):
    with pytest.raises(ParseError):
        loads("{not json")
    with pytest.raises(ParseError):
        load_path(tmp_path / "absent.json")


def test_undeclared_novikov_class():
    data = {"n": 1, "generators": [{"name": "a", "degree": 0, "novikov": "A"}]}
    with pytest.raises(ParseError):
        complex_file_from_dict(loads(json.dumps(data)))


@pytest.mark.parametrize(
    "make",
    [
        lambda: riemann_surface(0, 4),
        lambda: riemann_surface(1, 3),
        lambda: subcritical_model({3: 1, 4: 2}, 2, 3),
        lambda: disc_bundle(torus_base(), 2),
    ],
)
def test_complex_file_roundtrip(make):
    cf = make()
    text = dumps(complex_file_to_dict(cf))
    back = complex_file_from_dict(loads(text))
    assert dumps(complex_file_to_dict(back)) == text
    assert back.complex().entries == cf.complex().entries


def test_fixtures_load(fixtures):
    for name in ("circle-morse.json", "bad-orbit-pair.json"):
        read_complex_file(fixtures / name)


def test_dumps_is_canonical():
    assert dumps({"b": 1, "a": [1, 2]}) == dumps({"a": [1, 2], "b": 1})
    assert dumps({}).endswith("\n")


@given(st.dictionaries(st.integers(-50, 50), st.integers(0, 9)))
def test_dims_json_roundtrip_bit_exact(d):
    dims = GradedDims(d)
    text = dumps(dims.to_json())
    again = GradedDims.from_json(json.loads(text))
    assert again == dims
    assert dumps(again.to_json()) == text


def test_random_dims_roundtrip():
    rng = random.Random(2)
    for _ in range(200):
        dims = GradedDims({rng.randint(-10, 10): rng.randint(0, 5) for _ in range(rng.randint(0, 6))})
        assert GradedDims.from_json(json.loads(dumps(dims.to_json()))) == dims
