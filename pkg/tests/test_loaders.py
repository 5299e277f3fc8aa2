"""Tests for the JSON readers and writers in opmodel.loaders."""

import json

import pytest

from opmodel.bialgebras import builtin_law, check_bialgebra, lift_free_to_bialgebra
from opmodel.coalgebras import PCoalgebra, check_coalgebra, cofree
from opmodel.core.complexes import ChainMap, disk, homology, sphere
from opmodel.core.errors import InputError
from opmodel.loaders.complexes import chain_map_to_dict, complex_to_dict, load_chain_map, load_complex
from opmodel.loaders.laws import bialgebra_to_dict, law_to_dict, load_bialgebra, load_law, parse_law
from opmodel.loaders.operads import load_operad, operad_to_dict, parse_operad
from opmodel.loaders.reader import Node
from opmodel.loaders.structures import coalgebra_to_dict, load_coalgebra
from opmodel.operads import builtin_operad

DISK_DOC = {
    "name": "D2",
    "max_degree": 3,
    "labels": {"1": ["x"], "2": ["y"]},
    "d": {"2": [["1"]]},
}


def _write(tmp_path, name: str, document) -> str:
    path = tmp_path / name
    path.write_text(json.dumps(document), encoding="utf-8")
    return str(path)


def test_load_complex(tmp_path):
    c = load_complex(_write(tmp_path, "disk.json", DISK_DOC))
    assert c.name == "D2"
    assert c.dims == (1, 1, 0)
    assert c.space.labels[0] == ("x",)
    assert homology(c).is_acyclic()


def test_max_degree_override(tmp_path):
    c = load_complex(_write(tmp_path, "disk.json", DISK_DOC), max_degree=2)
    assert c.dims == (1, 1)


def test_complex_written_and_read_back(tmp_path):
    original = disk(2, 3)
    c = load_complex(_write(tmp_path, "c.json", complex_to_dict(original)))
    assert c.dims == original.dims
    assert c.d(2) == original.d(2)


def test_bad_scalar_reports_json_path(tmp_path):
    doc = dict(DISK_DOC, d={"2": [["x"]]})
    with pytest.raises(InputError, match=r"\$\.d\.2\[0\]\[0\]: expected a scalar"):
        load_complex(_write(tmp_path, "bad.json", doc))


def test_non_complex_is_refused(tmp_path):
    doc = {"max_degree": 3, "dims": {"1": 1, "2": 1, "3": 1}, "d": {"2": [["1"]], "3": [["1"]]}}
    path = _write(tmp_path, "dd.json", doc)
    with pytest.raises(InputError, match="not zero at degree 3") as info:
        load_complex(path)
    assert info.value.file == path


def test_generators_above_truncation(tmp_path):
    doc = {"max_degree": 2, "dims": {"3": 1}}
    with pytest.raises(InputError, match="above the truncation degree 2"):
        load_complex(_write(tmp_path, "high.json", doc))


def test_wrong_matrix_shape(tmp_path):
    doc = dict(DISK_DOC, d={"2": [["1", "0"]]})
    with pytest.raises(InputError, match="expected a 1x1 matrix, got 1x2"):
        load_complex(_write(tmp_path, "shape.json", doc))


def test_missing_and_malformed_files(tmp_path):
    with pytest.raises(InputError, match="file not found"):
        load_complex(tmp_path / "nope.json")
    path = tmp_path / "broken.json"
    path.write_text("{", encoding="utf-8")
    with pytest.raises(InputError, match="invalid JSON"):
        load_complex(path)


def test_chain_map_with_file_references(tmp_path):
    _write(tmp_path, "disk.json", DISK_DOC)
    doc = {"source": "disk.json", "target": "disk.json", "components": {"1": [["2"]], "2": [["2"]]}}
    f = load_chain_map(_write(tmp_path, "double.json", doc))
    assert f.is_chain_map()
    assert f.is_iso()


def test_chain_map_must_commute_with_d(tmp_path):
    doc = {"source": DISK_DOC, "target": DISK_DOC, "components": {"1": [["1"]], "2": [["0"]]}}
    with pytest.raises(InputError, match="not a chain map at degree 2"):
        load_chain_map(_write(tmp_path, "bad_map.json", doc))


def test_builtin_operad_references():
    assert parse_operad(Node("Com", "<test>")).module.dims == (1, 1, 1)
    operad = parse_operad(Node({"builtin": "As", "max_arity": 4}, "<test>"))
    assert operad.module.dims == (1, 2, 6, 24)
    with pytest.raises(InputError, match=r"\$\.builtin: unknown built-in operad"):
        parse_operad(Node({"builtin": "Pois"}, "<test>"))


def test_operad_document_is_validated(tmp_path):
    doc = operad_to_dict(builtin_operad("Com", 3))
    assert load_operad(_write(tmp_path, "com.json", doc)).module.dims == (1, 1, 1)
    doc["compositions"]["2,1,2"] = [["0"]]
    path = _write(tmp_path, "broken.json", doc)
    with pytest.raises(InputError, match="operad axiom 'right-unit' fails"):
        load_operad(path)
    assert load_operad(path, validate=False).name == "Com"


def test_cofree_coalgebra_document(tmp_path):
    doc = {"operad": "As", "cofree_on": complex_to_dict(sphere(1, 3))}
    c = load_coalgebra(_write(tmp_path, "cofree.json", doc))
    assert c.complex.dims == (1, 1, 1)
    assert c.cofree_of is not None


def test_coalgebra_written_and_read_back(tmp_path):
    original, _ = cofree(builtin_operad("As", 3), sphere(1, 2))
    c = load_coalgebra(_write(tmp_path, "c.json", coalgebra_to_dict(original)))
    assert check_coalgebra(c).ok
    assert c.cooperation(2, 0, 2) == original.cooperation(2, 0, 2)
    assert c.cooperation(2, 1, 2) == original.cooperation(2, 1, 2)


def test_cooperation_slot_out_of_range(tmp_path):
    doc = {"operad": "As", "complex": complex_to_dict(sphere(1, 2)), "cooperations": {"2:7": {}}}
    with pytest.raises(InputError, match="no basis element 7 in arity 2"):
        load_coalgebra(_write(tmp_path, "slot.json", doc))


def test_law_by_name_and_document(tmp_path):
    assert parse_law(Node("biassociative", "<test>")).name == "biassociative"
    original = builtin_law("commutative")
    law = load_law(_write(tmp_path, "law.json", law_to_dict(original)))
    assert law.P.name == "Com"
    assert set(law.rules) == set(original.rules)


def test_law_rule_key_is_checked(tmp_path):
    doc = {"P": "Com", "Q": "Com", "rules": {"2:0": []}}
    with pytest.raises(InputError, match="not of the form 'n:p,m:q'"):
        load_law(_write(tmp_path, "law.json", doc))


def test_free_bialgebra_document(tmp_path):
    doc = {"law": "biassociative", "free_on": {"complex": complex_to_dict(sphere(1, 2))}}
    b = load_bialgebra(_write(tmp_path, "free.json", doc))
    assert b.complex.dims == (1, 1)
    assert check_bialgebra(b).ok


def test_chain_map_written_and_read_back(tmp_path):
    original = ChainMap.identity(disk(2, 3))
    f = load_chain_map(_write(tmp_path, "id.json", chain_map_to_dict(original)))
    assert f.is_iso()
    assert f.component(2) == original.component(2)


def test_bialgebra_written_and_read_back(tmp_path):
    law = builtin_law("biassociative")
    original = lift_free_to_bialgebra(PCoalgebra.trivial(law.Q, sphere(1, 2)), law)
    b = load_bialgebra(_write(tmp_path, "b.json", bialgebra_to_dict(original)))
    assert b.complex.dims == original.complex.dims
    assert check_bialgebra(b).ok
