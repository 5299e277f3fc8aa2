from fractions import Fraction

import numpy as np
import pytest

from opmodel.bialgebras import AlgebraMorphism, PAlgebra, algebra_pushout, cell_attachment, check_algebra, free_algebra
from opmodel.bialgebras.algebras import check_algebra_morphism, free_extension, free_map, free_unit
from opmodel.bialgebras.classify import classify_algebra_morphism, indecomposables, sample_acyclic_fibrations
from opmodel.bialgebras.pushouts import check_cell_attachment
from opmodel.core.complexes import (
    ChainComplex,
    ChainMap,
    direct_sum,
    disk,
    is_weak_equivalence,
    random_chain_map,
    random_complex,
    sphere,
    sum_inclusion,
)
from opmodel.core.errors import IllFormed
from opmodel.core.linalg import LinearMap, solve_affine
from opmodel.core.tensors import TensorBasis, apply_factorwise
from opmodel.operads import builtin_operad

AS = builtin_operad("As", 3)
COM = builtin_operad("Com", 3)
D = 2


@pytest.mark.parametrize(
    "operad, argument, dims",
    [
        (AS, sphere(1, 3), (1, 1, 1)),
        (COM, sphere(1, 3), (1, 0, 0)),
        (COM, sphere(2, 4), (0, 1, 0, 1)),
    ],
)
def test_free_algebra_dims(operad, argument, dims):
    assert free_algebra(operad, argument).complex.dims == dims


@pytest.mark.parametrize("operad", [AS, COM], ids=lambda o: o.name)
def test_free_algebras_satisfy_axioms(operad):
    assert check_algebra(free_algebra(operad, disk(2, 3))).ok
    assert check_algebra(free_algebra(operad, sphere(1, 3))).ok


def test_trivial_algebra_satisfies_axioms():
    a = PAlgebra.trivial(AS, sphere(1, D))
    assert a.is_trivial()
    assert check_algebra(a).ok


def test_equivariance_fault_is_reported():
    """Doubling one product of As(S^1) breaks compatibility with the Σ_2 action."""
    a = free_algebra(AS, sphere(1, D))
    broken = a.with_operation(2, 0, 2, a.operation(2, 0, 2).scale(2))
    rules = {v.rule for v in check_algebra(broken).violations}
    assert "equivariance" in rules


def test_free_extension_restricts_to_generators():
    v = sphere(1, D)
    f = free_algebra(AS, v)
    ext = free_extension(f, f, free_unit(f))
    assert ext == AlgebraMorphism.identity(f)
    assert check_algebra_morphism(ext).ok


def test_free_map_is_a_morphism():
    v = sphere(1, 3)
    f = free_algebra(AS, v)
    doubled = free_map(ChainMap(v, v, {1: LinearMap.from_rows([[2]])}), f, f)
    assert check_algebra_morphism(doubled).ok
    assert doubled.component(2) == LinearMap.from_rows([[4]])


def test_pushout_of_trivial_algebras_over_zero():
    zero = PAlgebra.trivial(AS, ChainComplex.zero(D))
    b = PAlgebra.trivial(AS, sphere(1, D))
    c = PAlgebra.trivial(AS, sphere(1, D, label="t"))
    result = algebra_pushout(AlgebraMorphism.zero(zero, b), AlgebraMorphism.zero(zero, c))
    # only the squares of each summand vanish
    assert result.algebra.complex.dims == (2, 2)
    assert check_algebra(result.algebra).ok


def test_pushout_of_free_algebras_over_zero_is_free():
    zero = PAlgebra.trivial(AS, ChainComplex.zero(D))
    b = free_algebra(AS, sphere(1, D))
    c = free_algebra(AS, sphere(1, D, label="t"))
    result = algebra_pushout(AlgebraMorphism.zero(zero, b), AlgebraMorphism.zero(zero, c))
    both = free_algebra(AS, direct_sum(sphere(1, D), sphere(1, D, label="t")))
    assert result.algebra.complex.dims == both.complex.dims
    assert check_algebra(result.algebra).ok
    assert check_algebra_morphism(result.from_left).ok
    assert check_algebra_morphism(result.from_right).ok


def _sphere_into_disk() -> ChainMap:
    return ChainMap(sphere(1, D), disk(2, D), {1: LinearMap.identity(1)})


def test_cell_attachment_bounds_a_cycle():
    """Gluing D^2 along S^1 -> S^1 kills the degree-one class."""
    g = PAlgebra.trivial(AS, sphere(1, D))
    attach = ChainMap.identity(g.complex)
    result = cell_attachment(g, _sphere_into_disk(), attach)
    assert result.algebra.complex.dims == (1, 1)
    assert check_algebra(result.algebra).ok
    assert result.from_right.map.is_injective()
    assert check_cell_attachment(g, _sphere_into_disk(), attach).ok


def test_cell_attachment_needs_injective_generator():
    g = PAlgebra.trivial(AS, sphere(1, D))
    j = ChainMap.zero(sphere(1, D), disk(2, D))
    report = check_cell_attachment(g, j, ChainMap.identity(g.complex))
    assert report.first().rule == "hypothesis"


def test_classify_cell_attachment():
    g = PAlgebra.trivial(AS, sphere(1, D))
    result = cell_attachment(g, _sphere_into_disk(), ChainMap.identity(g.complex))
    flags = classify_algebra_morphism(result.from_right)
    assert flags.cell
    assert flags.cofibration_wrt is not None
    assert not flags.weak_equivalence


def test_classify_identity_algebra_map():
    a = free_algebra(AS, sphere(1, D))
    flags = classify_algebra_morphism(AlgebraMorphism.identity(a))
    assert flags.weak_equivalence
    assert flags.fibration
    assert flags.cofibration_wrt is True
    assert not flags.cell


def test_free_map_on_an_injection_is_a_cell():
    source, target = free_algebra(AS, sphere(1, D)), free_algebra(AS, disk(2, D))
    flags = classify_algebra_morphism(free_map(_sphere_into_disk(), source, target))
    assert flags.cell
    assert flags.cofibration_wrt is True
    assert not flags.weak_equivalence


def test_untagged_map_lifts_through_indecomposables():
    source, target = free_algebra(AS, sphere(1, D)), free_algebra(AS, disk(2, D))
    tagged = free_map(_sphere_into_disk(), source, target)
    bare = AlgebraMorphism(source, target, tagged.map)
    flags = classify_algebra_morphism(bare)
    assert flags.cofibration_wrt is True
    assert not flags.cell
    assert flags.failures == []


def test_indecomposables_of_a_free_algebra_are_its_generators():
    q = indecomposables(free_algebra(AS, disk(2, D)))
    assert q.complex.dims == (1, 1)
    assert q.complex.d(2).rank() == 1


def test_map_killing_generators_is_not_a_cofibration():
    a = free_algebra(AS, sphere(1, D))
    zero = PAlgebra.trivial(AS, ChainComplex.zero(D))
    flags = classify_algebra_morphism(AlgebraMorphism.zero(a, zero))
    assert flags.cofibration_wrt is False
    assert flags.fibration


def test_classify_in_degree_one():
    s = sphere(1, 1)
    total = direct_sum(s, sphere(1, 1, label="t"))
    f = AlgebraMorphism(PAlgebra.trivial(AS, s), PAlgebra.trivial(AS, total), sum_inclusion([s, s], total, 0))
    flags = classify_algebra_morphism(f)
    assert flags.weak_equivalence
    assert not flags.fibration
    assert flags.cofibration_wrt is True


@pytest.mark.parametrize("seed", range(6))
def test_sampled_fibrations_in_degree_one_are_surjective(seed):
    for p in sample_acyclic_fibrations(AS, 1, seed=seed, count=4):
        assert p.map.is_surjective()
        assert is_weak_equivalence(p.map)



def test_classify_rejects_non_morphism():
    a = free_algebra(AS, sphere(1, D))
    flat = PAlgebra.trivial(AS, a.complex)
    with pytest.raises(IllFormed, match="not an algebra morphism"):
        classify_algebra_morphism(AlgebraMorphism(a, flat, ChainMap.identity(a.complex)))


def _products_of_generators(a: PAlgebra, v: ChainComplex, column) -> list[dict]:
    """``column`` on each generator, then every operation applied to words of generators."""
    out = [column(x) for x in range(v.space.total_dim)]
    words = TensorBasis(v.space)
    for n in a.arities():
        for d in range(n, a.max_degree + 1):
            for word in words.words(n, d):
                pushed = apply_factorwise({word: Fraction(1)}, column)
                out += [a.op_tensor(n, {b: Fraction(1)}, pushed) for b in range(a.operad.dim(n))]
    return out


@pytest.mark.parametrize("seed", range(50))
def test_free_extension_is_the_unique_morphism(seed):
    """An algebra map out of P(V) is fixed on products of generators, which span P(V)."""
    rng = np.random.default_rng(seed)
    operad = (AS, COM)[seed % 2]
    v = random_complex({1: int(rng.integers(1, 3)), 2: int(rng.integers(0, 2))}, D, rng, name="V")
    w = random_complex({1: int(rng.integers(1, 3)), 2: int(rng.integers(0, 2))}, D, rng, name="W")
    target = free_algebra(operad, w) if seed % 3 == 0 else PAlgebra.trivial(operad, w)
    free = free_algebra(operad, v)
    g = random_chain_map(v, target.complex, rng)
    ext = free_extension(free, target, g)
    assert check_algebra_morphism(ext).ok
    assert ext.map.compose(free_unit(free)) == g

    unit = free_unit(free)
    spans = LinearMap.from_columns(_products_of_generators(free, v, unit.global_column), free.space.total_dim)
    images = LinearMap.from_columns(_products_of_generators(target, v, g.global_column), target.space.total_dim)
    for j in range(target.space.total_dim):
        row, free_part = solve_affine(spans.transpose(), images.transpose().column(j))
        assert free_part.cols == 0
        expected = {x: ext.map.global_column(x).get(j) for x in range(free.space.total_dim)}
        assert {x: c for x, c in row.items() if c} == {x: c for x, c in expected.items() if c}
