from fractions import Fraction

import numpy as np
import pytest

from opmodel.coalgebras import (
    CoalgebraMorphism,
    PCoalgebra,
    check_coalgebra,
    check_morphism,
    cofree,
    cofree_lift,
    cofree_map,
    comonad_coproduct,
    finite_subcoalgebra,
)
from opmodel.coalgebras.cofree import zero_coalgebra
from opmodel.coalgebras.structure import primitives, quotient_coalgebra, subcoalgebra
from opmodel.core.complexes import ChainComplex, ChainMap, GradedSpace, random_chain_map, random_complex, sphere
from opmodel.core.errors import BadOperad, IllFormed
from opmodel.core.linalg import LinearMap, solve_affine
from opmodel.core.tensors import apply_factorwise
from opmodel.operads import Operad, SigmaModule, builtin_operad, dualize

AS = builtin_operad("As", 3)
COM = builtin_operad("Com", 3)


def test_cofree_dims():
    assert cofree(AS, sphere(1, 3))[0].complex.dims == (1, 1, 1)
    assert cofree(COM, sphere(1, 3))[0].complex.dims == (1, 0, 0)
    assert cofree(AS, ChainComplex.zero(3))[0].complex.dims == (0, 0, 0)


@pytest.mark.parametrize("operad", [AS, COM, builtin_operad("Lie3", 3)], ids=lambda o: o.name)
def test_cofree_is_a_coalgebra(operad):
    v = ChainComplex(GradedSpace.from_dims(3, {1: 1, 2: 1}), {2: LinearMap.from_rows([[1]])}, "V")
    c, pi = cofree(operad, v)
    assert check_coalgebra(c).ok
    assert pi.is_chain_map()


def test_cofree_needs_connected_operad():
    bad = Operad("two", SigmaModule.trivial((2,), "two"), (Fraction(1), Fraction(0)), {})
    with pytest.raises(BadOperad):
        cofree(bad, sphere(1, 2))


def test_zero_complex_is_a_coalgebra():
    assert check_coalgebra(zero_coalgebra(AS, 3)).ok


def test_deconcatenation_on_tensor_coalgebra():
    """The degree-2 class of As*(S^1) splits as s ⊗ s, up to the class normalisation."""
    c, _ = cofree(AS, sphere(1, 2))
    table = c.cooperation(2, 0, 2)
    assert table.shape == (1, 1)
    assert not table.is_zero()


def test_equivariance_fault_is_reported():
    c, _ = cofree(AS, sphere(1, 2))
    broken = c.with_cooperation(2, 0, 2, c.cooperation(2, 0, 2).scale(2))
    report = check_coalgebra(broken)
    assert not report.ok
    assert report.first().rule == "equivariance"
    assert report.first().witness["arity"] == 2


def test_cofree_lift_of_projection_is_identity():
    c, pi = cofree(AS, sphere(1, 3))
    lift = cofree_lift(c, pi, c)
    assert check_morphism(lift).ok
    assert pi @ lift.map == pi
    assert lift.map == ChainMap.identity(c.complex)


def test_cofree_lift_of_primitive_coalgebra():
    """A coalgebra with zero cooperations lifts into the arity-one part only."""
    v = sphere(1, 3)
    c = PCoalgebra.trivial(AS, v)
    target, pi = cofree(AS, v)
    lift = cofree_lift(c, ChainMap.identity(v), target)
    assert check_morphism(lift).ok
    assert pi @ lift.map == ChainMap.identity(v)


def test_morphism_fault_is_reported():
    c, _ = cofree(AS, sphere(1, 2))
    flat = PCoalgebra.trivial(AS, c.complex)
    f = CoalgebraMorphism(c, flat, ChainMap.identity(c.complex))
    report = check_morphism(f)
    assert report.first().rule == "cooperation"


def test_cofree_map_is_a_morphism():
    v = sphere(1, 3)
    source, _ = cofree(AS, v)
    doubled = ChainMap(v, v, {1: LinearMap.from_rows([[2]])})
    f = cofree_map(doubled, source, source)
    assert check_morphism(f).ok


def test_comonad_coproduct_is_counital():
    v = sphere(1, 2)
    delta = comonad_coproduct(dualize(AS), v)
    assert check_morphism(delta).ok
    _, outer_pi = cofree(AS, delta.target.cofree_of.argument)
    assert outer_pi @ delta.map == ChainMap.identity(delta.source.complex)


def test_primitives_of_tensor_coalgebra():
    c, _ = cofree(AS, sphere(1, 2))
    prims = primitives(c)
    assert prims[1].cols == 1
    assert prims[2].cols == 0


def test_subcoalgebra_closure():
    c, _ = cofree(AS, sphere(1, 2))
    sub = subcoalgebra(c, {1: LinearMap.identity(1)})
    assert sub.source.complex.dims == (1, 0)
    assert check_morphism(sub).ok
    with pytest.raises(IllFormed):
        subcoalgebra(c, {2: LinearMap.identity(1)})


def test_quotient_descends_only_by_coideals():
    c, _ = cofree(AS, sphere(1, 2))
    q, sections = quotient_coalgebra(c, {1: LinearMap.identity(1)})
    assert q.target.complex.dims == (0, 1)
    assert check_coalgebra(q.target).ok
    assert check_morphism(q).ok
    with pytest.raises(IllFormed):
        quotient_coalgebra(c, {2: LinearMap.identity(1)})


def test_finite_subcoalgebra_of_top_class():
    """The degree-3 class of As*(S^1) generates everything below it."""
    c, _ = cofree(AS, sphere(1, 3))
    inclusion = finite_subcoalgebra(c, 3, {0: Fraction(1)})
    assert inclusion.source.complex.dims == (1, 1, 1)
    assert check_morphism(inclusion).ok


def test_finite_subcoalgebra_vanishes_above_degree():
    c, _ = cofree(AS, sphere(1, 3))
    inclusion = finite_subcoalgebra(c, 2, {0: Fraction(1)})
    assert inclusion.source.complex.dims == (1, 1, 0)


def test_finite_subcoalgebra_of_primitive():
    c = PCoalgebra.trivial(AS, ChainComplex(GradedSpace.from_dims(2, {1: 2}), {}, "A"))
    inclusion = finite_subcoalgebra(c, 1, {1: Fraction(3)})
    assert inclusion.source.complex.dims == (1, 0)


def _keyed(columns: list[dict], rhs: list[dict]) -> tuple[LinearMap, list[dict]]:
    keys = sorted({k for col in columns + rhs for k in col}, key=repr)
    index = {k: i for i, k in enumerate(keys)}
    matrix = LinearMap.from_columns([{index[k]: v for k, v in col.items()} for col in columns], len(keys))
    return matrix, [{index[k]: v for k, v in r.items()} for r in rhs]


def _over(c: PCoalgebra, x: int, project) -> dict:
    """``x`` seen through the counit and every cooperation followed by ``project`` on each factor."""
    out = {("counit", y): v for y, v in project(x).items()}
    for n in range(2, c.max_arity + 1):
        for b in range(c.operad.dim(n)):
            for word, v in apply_factorwise(c.coop_global(n, b, x), project).items():
                out[(n, b, word)] = v
    return out


@pytest.mark.parametrize("seed", range(50))
def test_cofree_lift_is_the_unique_morphism(seed):
    """The lift solves the linear system every morphism over ``g`` satisfies, and nothing else does."""
    rng = np.random.default_rng(seed)
    operad = (AS, COM)[seed % 2]
    D = 3 if seed % 4 == 3 else 2
    base = random_complex({1: int(rng.integers(1, 3)), 2: int(rng.integers(0, 2))}, D, rng)
    c = cofree(operad, base)[0] if seed % 3 == 0 else PCoalgebra.trivial(operad, base)
    v = random_complex({1: int(rng.integers(1, 3)), 2: int(rng.integers(0, 2))}, D, rng, name="V")
    g = random_chain_map(c.complex, v, rng)
    target, pi = cofree(operad, v)
    lift = cofree_lift(c, g, target)
    assert check_morphism(lift).ok
    assert pi @ lift.map == g

    columns = [_over(target, y, pi.global_column) for y in range(target.space.total_dim)]
    rhs = [_over(c, x, g.global_column) for x in range(c.space.total_dim)]
    matrix, targets = _keyed(columns, rhs)
    for x, t in enumerate(targets):
        solution, free = solve_affine(matrix, t)
        assert free.cols == 0
        expected = {k: w for k, w in lift.map.global_column(x).items() if w}
        assert {k: w for k, w in solution.items() if w} == expected
