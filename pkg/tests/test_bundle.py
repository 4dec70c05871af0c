"""Tests for the bundle codec: field paths in schema errors, defaults and families."""

import json
from fractions import Fraction

import pytest

from movstab.bundle import COMMANDS, FIELD_KINDS, load_bundle, parse_bundle, parse_query
from movstab.errors import LatticeError, SchemaError


def _document(**overrides):
    data = {
        "schema": 1,
        "name": "mini",
        "lattice": {"rank": 2, "gram": [[0, 1], [1, 0]]},
        "eff_cone": {"generators": [[1, 0], [0, 1]]},
        "sheaf": {"rank": 2, "c1": [1, 1], "c2": 1},
        "family": {
            "members": [{"rank": 1, "c1": [1, 0]}, {"rank": 1, "c1": [0, 1]}],
            "contains": [[0, "top"], [1, "top"]],
        },
        "queries": [],
    }
    data.update(overrides)
    return data


def _schema_error(data):
    with pytest.raises(SchemaError) as info:
        parse_bundle(data)
    return info.value


def test_every_command_field_has_a_kind():
    for required, optional in COMMANDS.values():
        for key in required + optional:
            assert key in FIELD_KINDS


def test_parse_minimal_bundle():
    bundle = parse_bundle(_document(queries=[{"cmd": "slope", "alpha": ["1", "1/2"]}]))
    assert bundle.name == "mini"
    assert bundle.lattice.rank == 2
    assert bundle.sheaf.c2 == 1
    assert bundle.family.contains == ((0, 2), (1, 2))
    assert bundle.queries[0].args["alpha"].coords == (1, Fraction(1, 2))
    assert bundle.queries[0].path == "$.queries[0]"


def test_missing_cones_default_to_duals():
    bundle = parse_bundle(_document())
    assert {g.coords for g in bundle.mov.generators} == {(1, 0), (0, 1)}
    assert bundle.nef is bundle.mov
    assert bundle.cone("eff") is bundle.eff


def test_facet_cones_are_accepted():
    bundle = parse_bundle(_document(nef_cone={"facets": [[1, 0], [0, 1]]}))
    assert {g.coords for g in bundle.nef.generators} == {(1, 0), (0, 1)}


def test_zero_denominator_names_its_path():
    error = _schema_error(_document(queries=[{"cmd": "slope", "alpha": ["1", "1/0"]}]))
    assert error.path == "$.queries[0].alpha[1]"
    assert "zero denominator" in error.message


def test_float_is_refused():
    error = _schema_error(_document(queries=[{"cmd": "slope", "alpha": [1, 0.5]}]))
    assert error.path == "$.queries[0].alpha[1]"


def test_wrong_length_class():
    error = _schema_error(_document(queries=[{"cmd": "slope", "alpha": [1, 0, 0]}]))
    assert error.path == "$.queries[0].alpha"


def test_schema_version_is_checked():
    assert _schema_error(_document(schema=2)).path == "$.schema"
    missing = _document()
    del missing["schema"]
    assert _schema_error(missing).path == "$"


def test_unknown_command_and_missing_field():
    assert _schema_error(_document(queries=[{"cmd": "frobnicate"}])).path == "$.queries[0].cmd"
    error = _schema_error(_document(queries=[{"cmd": "pairing", "x": [1, 0]}]))
    assert error.path == "$.queries[0]"
    assert "'y'" in error.message


def test_enumerated_fields_are_checked():
    error = _schema_error(_document(queries=[{"cmd": "cone", "which": "ample"}]))
    assert error.path == "$.queries[0].which"
    error = _schema_error(_document(queries=[{"cmd": "cone", "which": "eff", "mode": "open"}]))
    assert error.path == "$.queries[0].mode"


def test_gram_shape_errors():
    error = _schema_error(_document(lattice={"rank": 2, "gram": [[0, 1]]}))
    assert error.path == "$.lattice.gram"
    error = _schema_error(_document(lattice={"rank": "2", "gram": [[0, 1], [1, 0]]}))
    assert error.path == "$.lattice.rank"


def test_degenerate_gram_is_a_lattice_error():
    with pytest.raises(LatticeError):
        parse_bundle(_document(lattice={"rank": 2, "gram": [[1, 1], [1, 1]]}))


def test_family_edge_errors():
    family = {"members": [{"rank": 1, "c1": [1, 0]}], "contains": [[0]]}
    assert _schema_error(_document(family=family)).path == "$.family.contains[0]"
    family = {"members": [{"rank": 1, "c1": [1, 0]}], "contains": [[0, "up"]]}
    assert _schema_error(_document(family=family)).path == "$.family.contains[0][1]"


def test_family_without_sheaf_is_rejected():
    data = _document()
    del data["sheaf"]
    assert _schema_error(data).path == "$.family"


def test_split_sheaf_and_family():
    bundle = parse_bundle(
        _document(
            lattice={"rank": 2, "gram": [[1, 0], [0, -1]]},
            eff_cone={"generators": [[0, 1], [1, -1]]},
            sheaf={"split": [[1, 0], [1, -1]]},
            family="split",
        )
    )
    assert bundle.split is not None
    assert bundle.sheaf.c1.coords == (2, -1)
    assert bundle.sheaf.c2 == 1
    assert len(bundle.family.members) == 2


def test_split_family_needs_split_sheaf():
    assert _schema_error(_document(family="split")).path == "$.family"


def test_family_query_field():
    query = parse_query(
        {"cmd": "hom", "alpha": [1, 1], "source": {"top": {"rank": 1, "c1": [1, 0]}}},
        0,
        parse_bundle(_document()).lattice,
    )
    assert query.args["source"].top.rank == 1
    assert query.args["source"].members == ()


def test_standalone_query_without_lattice():
    query = parse_query({"cmd": "torus_gate", "n": 3, "c2H": "0", "kx_trivial": True}, 0, None)
    assert query.args == {"n": 3, "c2H": 0, "kx_trivial": True}
    with pytest.raises(SchemaError, match="needs a lattice"):
        parse_query({"cmd": "slope", "alpha": [1]}, 0, None)


def test_replacement_queries(tmp_path):
    path = tmp_path / "bundle.json"
    path.write_text(json.dumps(_document(queries=[{"cmd": "signature"}])), encoding="utf-8")
    assert [q.cmd for q in load_bundle(str(path)).queries] == ["signature"]
    replaced = load_bundle(str(path), queries=[{"cmd": "walls"}, {"cmd": "dual"}])
    assert [q.cmd for q in replaced.queries] == ["walls", "dual"]


def test_unreadable_and_malformed_files(tmp_path):
    with pytest.raises(SchemaError, match="cannot read"):
        load_bundle(str(tmp_path / "missing.json"))
    broken = tmp_path / "broken.json"
    broken.write_text("{", encoding="utf-8")
    with pytest.raises(SchemaError, match="invalid JSON"):
        load_bundle(str(broken))


def test_corpus_bundles_parse(corpus_paths):
    for path in corpus_paths:
        bundle = load_bundle(str(path))
        assert bundle.queries
        assert bundle.lattice.is_hyperbolic()
