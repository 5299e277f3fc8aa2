import numpy as np
import pytest

from opmodel.coalgebras import CoalgebraMorphism, PCoalgebra, check_morphism, cofree
from opmodel.core.complexes import (
    ChainComplex,
    GradedSpace,
    cone_of_identity,
    direct_sum,
    disk,
    random_complex,
    sphere,
)
from opmodel.core.errors import HypothesisFailed
from opmodel.envelope.bracket import bracket_evaluate
from opmodel.envelope.enveloping import check_structure_maps, enveloping_evaluate, structure_maps
from opmodel.envelope.homotopy import (
    check_acyclic_invariance,
    check_acyclic_projection,
    compare_with_product,
)
from opmodel.operads import builtin_operad

AS = builtin_operad("As", 3)
COM = builtin_operad("Com", 4)


def _primitive(operad, dims: dict, D: int, name: str = "A") -> PCoalgebra:
    return PCoalgebra.trivial(operad, ChainComplex(GradedSpace.from_dims(D, dims, prefix="a"), {}, name))


def test_structure_maps_are_coreflexive():
    a = _primitive(AS, {1: 1}, 2)
    maps = structure_maps(a, sphere(1, 2))
    assert check_structure_maps(maps) == {"coreflexive": True, "d0_morphism": True, "d1_morphism": True}


def test_envelope_at_zero_is_the_base():
    a, _ = cofree(AS, sphere(1, 2))
    assert enveloping_evaluate(a, ChainComplex.zero(2)).dims == a.complex.dims


def test_envelope_of_zero_is_cofree():
    c = sphere(1, 2)
    a = PCoalgebra.trivial(AS, ChainComplex.zero(2))
    assert enveloping_evaluate(a, c).dims == cofree(AS, c)[0].complex.dims


def test_comparison_with_product():
    """U(A)(S^1) ≅ A × P*(S^1) for a two-dimensional primitive A."""
    a = _primitive(AS, {1: 2}, 3)
    cert = compare_with_product(a, sphere(1, 3))
    assert cert.dims == cert.product.coalgebra.complex.dims
    assert cert.to_dict()["dims"] == list(cert.dims)


def test_enveloping_evaluate_with_comparison():
    a = _primitive(AS, {1: 1}, 2)
    ev = enveloping_evaluate(a, sphere(2, 2), compare=True)
    assert ev.comparison is not None
    assert ev.comparison.phi.map.is_iso()


def test_bracket_regrouping_is_consistent():
    a = _primitive(COM, {2: 1}, 4)
    result = bracket_evaluate(a, sphere(2, 4))
    assert result.consistent()
    assert set(result.table.columns) == {"n", "r", "degree", "dim", "regrouped_dim"}


def test_bracket_with_zero_argument():
    a, _ = cofree(AS, sphere(1, 2))
    result = bracket_evaluate(a, ChainComplex.zero(2))
    assert result.consistent()
    assert (result.table["n"] == 0).all()


@pytest.mark.parametrize(
    "operad, argument",
    [
        (AS, cone_of_identity(sphere(1, 3))[0]),
        (COM, disk(2, 3)),
        (AS, ChainComplex.zero(3)),
    ],
)
def test_acyclic_invariance(operad, argument):
    verdict = check_acyclic_invariance(operad.module, argument)
    assert verdict.holds
    assert verdict.to_dict()["window"] == [1, 2]


def test_acyclic_invariance_needs_acyclic_input():
    with pytest.raises(HypothesisFailed, match="not acyclic"):
        check_acyclic_invariance(AS.module, sphere(1, 3))


def test_projection_from_product_is_weak_equivalence():
    a = _primitive(AS, {1: 1}, 3)
    cone, _ = cone_of_identity(sphere(1, 3))
    verdict = check_acyclic_projection(a, cone)
    assert verdict.weak_equivalence
    assert verdict.to_dict()["flags"]["fibration"]


def test_projection_at_zero_argument_is_iso():
    a, _ = cofree(AS, sphere(1, 2))
    verdict = check_acyclic_projection(a, ChainComplex.zero(2))
    assert verdict.product.projections[0].map.is_iso()


def _acyclic_complex(seed: int) -> ChainComplex:
    rng = np.random.default_rng(seed)
    if seed % 4 == 3:
        return direct_sum(disk(2, 3), disk(int(rng.integers(2, 4)), 3, label="c"))
    x = random_complex({1: int(rng.integers(1, 3)), 2: int(rng.integers(0, 2))}, 3, rng)
    return cone_of_identity(x)[0]


@pytest.mark.parametrize("seed", range(20))
def test_acyclic_invariance_corpus(seed):
    operad = (AS, COM)[seed % 2]
    verdict = check_acyclic_invariance(operad.module, _acyclic_complex(seed))
    assert verdict.holds
    assert set(verdict.betti[:-1]) <= {0}


@pytest.mark.parametrize("seed", range(26))
def test_comparison_corpus(seed):
    rng = np.random.default_rng(seed)
    operad = (AS, COM)[seed % 2]
    D = 3 if seed % 3 == 2 else 2
    if seed % 5 == 0:
        a, _ = cofree(operad, sphere(1, D))
    else:
        a = _primitive(operad, {1: int(rng.integers(1, 3)), 2: int(rng.integers(0, 2))}, D)
    c = random_complex({1: int(rng.integers(0, 2)), 2: int(rng.integers(0, 2))}, D, rng)
    cert = compare_with_product(a, c)
    assert cert.dims == cert.product.coalgebra.complex.dims
    assert check_morphism(cert.phi).ok
    assert cert.psi.compose(cert.phi) == CoalgebraMorphism.identity(cert.evaluation.coalgebra)
