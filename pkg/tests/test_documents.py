import json
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from latticefix.correspondence import Correspondence
from latticefix.documents import (
    correspondence_from_doc,
    correspondence_to_doc,
    dumps,
    format_rational,
    lattice_from_doc,
    lattice_to_doc,
    load_path,
    loads,
    parse_rational,
)
from latticefix.errors import DocumentError, NotALattice
from latticefix.game import build_game, game_to_doc
from latticefix.lab import GeneratorConfig, gen_correspondence, gen_game, gen_lattice
from latticefix.rng import XorShift64Star


def test_rational_literals():
    assert parse_rational("3/2") == Fraction(3, 2)
    assert parse_rational("-4") == Fraction(-4)
    assert parse_rational(7) == Fraction(7)
    assert format_rational(Fraction(6, 4)) == "3/2"
    assert format_rational(Fraction(5)) == "5/1"


@pytest.mark.parametrize("bad", ["1/0", "x", "1.5", "", "2/-3", True, 1.5, None])
def test_bad_rationals(bad):
    with pytest.raises(DocumentError):
        parse_rational(bad)


@given(st.fractions())
def test_rational_round_trip(q):
    assert parse_rational(format_rational(q)) == q


def test_json_error_has_position():
    with pytest.raises(DocumentError) as exc:
        loads('{"elements": [\n  "a",\n  ]}')
    assert exc.value.line == 3 and exc.value.column is not None
    assert "line 3" in str(exc.value)


def test_schema_error_has_path():
    with pytest.raises(DocumentError) as exc:
        lattice_from_doc({"elements": ["a", "b"], "le": [["a", "b"], ["b"]]})
    assert exc.value.path == "$.le[1]"
    with pytest.raises(DocumentError) as exc:
        lattice_from_doc({"elements": ["a", 3]})
    assert exc.value.path == "$.elements[1]"
    with pytest.raises(DocumentError):
        lattice_from_doc([])


def test_not_a_lattice_document():
    with pytest.raises(NotALattice):
        lattice_from_doc({"elements": ["x", "y"], "le": []})


def test_missing_file():
    with pytest.raises(DocumentError, match="cannot read"):
        load_path("/nonexistent/lattice.json")


def test_lattice_path_reference(data_dir):
    F = correspondence_from_doc(load_path(data_dir / "diamond.json"), base_dir=data_dir)
    assert F.lattice.join("a", "b") == "1"


def test_correspondence_map_errors():
    L = {"elements": ["0", "1"], "le": [["0", "1"]]}
    with pytest.raises(DocumentError) as exc:
        correspondence_from_doc({"lattice": L, "map": {"0": ["0"], "1": []}})
    assert exc.value.path == "$.map.1"
    with pytest.raises(DocumentError):
        correspondence_from_doc({"lattice": L, "map": {"0": ["0"]}})
    with pytest.raises(DocumentError):
        correspondence_from_doc({"lattice": L, "map": {"0": "0", "1": ["1"]}})


def test_canonical_lattice_doc():
    L = lattice_from_doc({"elements": ["b", "a", "c"], "le": [["a", "c"], ["a", "b"], ["b", "c"]]})
    assert lattice_to_doc(L) == {"elements": ["a", "b", "c"], "le": [["a", "b"], ["b", "c"]]}


def test_dumps_is_stable():
    assert dumps({"b": 1, "a": [2]}) == '{\n  "a": [\n    2\n  ],\n  "b": 1\n}\n'


@given(st.integers(0, 2**40))
def test_lattice_and_correspondence_round_trip(seed):
    cfg = GeneratorConfig(seed=seed, max_lattice_size=7, target_class="unconstrained")
    L = gen_lattice(cfg)
    F = gen_correspondence(cfg, L)
    doc = correspondence_to_doc(F)
    again = correspondence_from_doc(json.loads(dumps(doc)))
    assert again == F
    assert lattice_from_doc(lattice_to_doc(L)) == L
    assert correspondence_to_doc(again) == doc


@given(st.integers(0, 2**40))
def test_game_round_trip(seed):
    g, _ = gen_game(XorShift64Star(seed))
    doc = game_to_doc(g)
    h = build_game(json.loads(dumps(doc)))
    assert game_to_doc(h) == doc
    assert h.payoffs == g.payoffs


def test_allow_empty_round_trip():
    F = Correspondence(lattice_from_doc({"elements": ["0"]}), {"0": []}, allow_empty=True)
    doc = correspondence_to_doc(F)
    assert correspondence_from_doc(doc, allow_empty=True) == F
