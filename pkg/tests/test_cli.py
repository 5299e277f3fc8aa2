"""Tests for the opmodel command-line front end."""

import json

import pandas as pd
import pytest

from opmodel.bialgebras import PAlgebra
from opmodel.cli import EXIT_FAILED, EXIT_OK, EXIT_USAGE, main
from opmodel.coalgebras import CoalgebraMorphism, PCoalgebra, cofree
from opmodel.coalgebras.cofree import zero_coalgebra
from opmodel.core.complexes import ChainMap, cone_of_identity, sphere
from opmodel.loaders.complexes import chain_map_to_dict, complex_to_dict, components_to_dict
from opmodel.loaders.structures import algebra_to_dict, coalgebra_morphism_to_dict, coalgebra_to_dict
from opmodel.operads import builtin_operad

AS = builtin_operad("As", 3)


def _write(tmp_path, name: str, document) -> str:
    path = tmp_path / name
    path.write_text(json.dumps(document), encoding="utf-8")
    return str(path)


def _run(argv, capsys) -> tuple[int, dict]:
    code = main(argv)
    out = capsys.readouterr().out
    return code, json.loads(out) if out.strip() else {}


def test_homology_of_cone(tmp_path, capsys):
    cone, _ = cone_of_identity(sphere(1, 3))
    path = _write(tmp_path, "cone.json", complex_to_dict(cone))
    code, report = _run(["homology", path], capsys)
    assert code == EXIT_OK
    assert report["ok"]
    assert report["result"]["acyclic"]
    assert report["result"]["betti"] == [0, 0, 0]
    assert len(report["inputs"][0]["sha256"]) == 64


def test_check_reports_equivariance_fault(tmp_path, capsys):
    c, _ = cofree(AS, sphere(1, 2))
    broken = c.with_cooperation(2, 0, 2, c.cooperation(2, 0, 2).scale(2))
    path = _write(tmp_path, "broken.json", coalgebra_to_dict(broken))
    code, report = _run(["check", "coalgebra", path], capsys)
    assert code == EXIT_FAILED
    assert not report["ok"]
    assert report["result"]["violations"][0]["rule"] == "equivariance"


def test_check_builtin_operad(tmp_path, capsys):
    path = _write(tmp_path, "com.json", {"builtin": "Com", "max_arity": 3})
    code, report = _run(["check", "operad", path], capsys)
    assert code == EXIT_OK
    assert report["result"]["ok"]


def test_bad_input_is_a_usage_error(tmp_path, capsys):
    path = _write(tmp_path, "bad.json", {"max_degree": 2, "d": {"2": [["1"]]}})
    code, report = _run(["homology", path], capsys)
    assert code == EXIT_USAGE
    assert report == {}
    assert main(["homology", str(tmp_path / "missing.json")]) == EXIT_USAGE


def test_cofree_verb_writes_csv(tmp_path, capsys):
    path = _write(tmp_path, "s1.json", complex_to_dict(sphere(1, 3)))
    csv_path = tmp_path / "dims.csv"
    code, report = _run(["cofree", path, "--operad", "Com", "--csv", str(csv_path)], capsys)
    assert code == EXIT_OK
    assert report["result"]["dims"] == [1, 0, 0]
    table = pd.read_csv(csv_path)
    assert list(table["degree"]) == [1, 2, 3]


def test_unliftable_square_exits_with_witness(tmp_path, capsys):
    zero = zero_coalgebra(AS, 2)
    cell = PCoalgebra.trivial(AS, sphere(1, 2))
    j = coalgebra_morphism_to_dict(CoalgebraMorphism.zero(zero, cell))
    problem = {
        "i": j,
        "p": j,
        "a": coalgebra_morphism_to_dict(CoalgebraMorphism.identity(zero)),
        "b": coalgebra_morphism_to_dict(CoalgebraMorphism.identity(cell)),
    }
    code, report = _run(["lift", _write(tmp_path, "square.json", problem)], capsys)
    assert code == EXIT_FAILED
    assert report["result"]["error"] == "NoLiftFound"
    assert report["result"]["degree"] == 1


def test_sampled_family_reports_are_identical(tmp_path, capsys):
    argv = ["sample-family", "--operad", "As", "--max-degree", "2", "--family-size", "3", "--seed", "7"]
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    assert main(argv + ["--out", str(first)]) == EXIT_OK
    assert main(argv + ["--out", str(second)]) == EXIT_OK
    assert first.read_bytes() == second.read_bytes()
    assert len(json.loads(first.read_text())["result"]["members"]) <= 3


def _envelope_inputs(tmp_path) -> tuple[str, str, str]:
    a = _write(tmp_path, "A.json", coalgebra_to_dict(PCoalgebra.trivial(AS, sphere(1, 2))))
    s1 = _write(tmp_path, "s1.json", complex_to_dict(sphere(1, 2)))
    cone = _write(tmp_path, "cone.json", complex_to_dict(cone_of_identity(sphere(1, 2))[0]))
    return a, s1, cone


@pytest.mark.parametrize("short, long", [("prop28", "compare"), ("cor210", "acyclic-projection")])
def test_short_verb_names_run_the_same_command(tmp_path, capsys, short, long):
    a, s1, cone = _envelope_inputs(tmp_path)
    c = s1 if short == "prop28" else cone
    code, report = _run([short, a, c], capsys)
    assert code == EXIT_OK
    assert report["command"] == short
    _, other = _run([long, a, c], capsys)
    assert report["result"] == other["result"]


def test_projection_refuses_a_complex_with_homology(tmp_path, capsys):
    a, s1, _ = _envelope_inputs(tmp_path)
    code, report = _run(["cor210", a, s1], capsys)
    assert code == EXIT_USAGE
    assert report == {}


def _verb_arguments(tmp_path) -> dict[str, list[str]]:
    a, s1, cone = _envelope_inputs(tmp_path)
    triv = PCoalgebra.trivial(AS, sphere(1, 2))
    ident = coalgebra_morphism_to_dict(CoalgebraMorphism.identity(triv))
    f = _write(tmp_path, "id.json", ident)
    section = _write(tmp_path, "section.json", chain_map_to_dict(ChainMap.identity(triv.complex)))
    alg = algebra_to_dict(PAlgebra.trivial(AS, sphere(1, 2)))
    alg_id = _write(
        tmp_path,
        "alg_id.json",
        {"source": alg, "target": alg, "components": components_to_dict(ChainMap.identity(sphere(1, 2)))},
    )
    zero = zero_coalgebra(AS, 2)
    j = coalgebra_morphism_to_dict(CoalgebraMorphism.zero(zero, triv))
    square = {
        "i": j,
        "p": j,
        "a": coalgebra_morphism_to_dict(CoalgebraMorphism.identity(zero)),
        "b": coalgebra_morphism_to_dict(CoalgebraMorphism.identity(triv)),
    }
    cofree_a = _write(tmp_path, "cofree.json", coalgebra_to_dict(cofree(AS, sphere(1, 2))[0]))
    return {
        "homology": ["homology", cone],
        "classify-chain": ["classify", "chain", section],
        "classify-coalgebra": ["classify", "coalgebra", f],
        "classify-algebra": ["classify", "algebra", alg_id],
        "check": ["check", "coalgebra", cofree_a],
        "cofree": ["cofree", s1],
        "free": ["free", s1],
        "product": ["product", a, cofree_a],
        "equalizer": ["equalizer", f, f, section],
        "pushout": ["pushout", f, f],
        "subcoalgebra": ["subcoalgebra", cofree_a, "--degree", "1", "--vector", '["1"]'],
        "envelope": ["envelope", a, s1],
        "prop28": ["prop28", a, s1],
        "cor210": ["cor210", a, cone],
        "lift": ["lift", _write(tmp_path, "square.json", square)],
        "factorize": ["factorize", "cof-trivfib", f],
        "sample-family": ["sample-family", "--family-size", "3"],
    }


@pytest.mark.parametrize(
    "case",
    [
        "homology",
        "classify-chain",
        "classify-coalgebra",
        "classify-algebra",
        "check",
        "cofree",
        "free",
        "product",
        "equalizer",
        "pushout",
        "subcoalgebra",
        "envelope",
        "prop28",
        "cor210",
        "lift",
        "factorize",
        "sample-family",
    ],
)
def test_every_verb_writes_identical_reports(tmp_path, case):
    argv = _verb_arguments(tmp_path)[case] + ["--max-degree", "2", "--seed", "5"]
    first, second = tmp_path / "first.json", tmp_path / "second.json"
    codes = {main(argv + ["--out", str(first)]), main(argv + ["--out", str(second)])}
    assert len(codes) == 1 and codes <= {EXIT_OK, EXIT_FAILED}
    assert first.read_bytes() == second.read_bytes()
