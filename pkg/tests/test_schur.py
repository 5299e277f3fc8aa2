import numpy as np
import pytest

from opmodel.core.complexes import (
    ChainComplex,
    ChainMap,
    GradedSpace,
    cone_of_identity,
    disk,
    homology,
    random_complex,
    sphere,
)
from opmodel.core.linalg import LinearMap
from opmodel.operads import builtin_operad, schur_evaluate, schur_map
from opmodel.operads.schur import norm_map

AS = builtin_operad("As", 4)
COM = builtin_operad("Com", 4)


@pytest.mark.parametrize(
    "module, argument, dims",
    [
        (COM.module, sphere(2, 4), (0, 1, 0, 1)),
        (COM.module, sphere(1, 3), (1, 0, 0)),
        (AS.module, sphere(1, 3), (1, 1, 1)),
        (AS.module, ChainComplex.zero(3), (0, 0, 0)),
    ],
)
def test_schur_dims(module, argument, dims):
    assert schur_evaluate(module, argument).dims == dims


def test_odd_square_survives_in_lie():
    """[s, s] ≠ 0 for an odd generator s."""
    lie = builtin_operad("Lie3", 3)
    assert schur_evaluate(lie.module, sphere(1, 2)).dims == (1, 1)


def test_projection_after_norm_is_identity():
    value = schur_evaluate(COM.module, sphere(2, 4))
    for g in range(value.space.total_dim):
        assert value.project_full(value.norm(g)) == {g: 1}


@pytest.mark.parametrize("n", [1, 2, 3])
def test_norm_map_splits(n):
    c = ChainComplex(GradedSpace.from_dims(3, {1: 2}), {}, "V")
    pairs = norm_map(AS.module, c, n)
    for d, pair in pairs.items():
        size = pair.norm.cols
        assert pair.projection @ pair.norm == LinearMap.identity(size)


def test_norm_map_in_arity_one_is_identity():
    pairs = norm_map(AS.module, sphere(2, 3), 1)
    assert pairs[2].norm == LinearMap.identity(1)
    assert pairs[2].projection == LinearMap.identity(1)
    assert pairs[1].norm.shape == (0, 0)


def test_evaluated_complex_of_acyclic_is_acyclic():
    cone, _ = cone_of_identity(sphere(1, 3))
    value = schur_evaluate(AS.module, cone)
    assert homology(value.complex).is_acyclic()
    assert homology(schur_evaluate(COM.module, disk(2, 3)).complex).is_acyclic()


def test_schur_map_of_identity():
    c = disk(2, 3)
    value = schur_evaluate(AS.module, c)
    m = schur_map(value, value, ChainMap.identity(c))
    assert m == ChainMap.identity(value.complex)
    assert m.is_chain_map()


@pytest.mark.parametrize("seed", range(100))
def test_norm_retraction_on_random_complexes(seed):
    """p ∘ N = id on random complexes with odd and even generators."""
    rng = np.random.default_rng(seed)
    module = (AS, COM)[seed % 2].module
    dims = {1: int(rng.integers(1, 3)), 2: int(rng.integers(0, 2)), 3: int(rng.integers(0, 2))}
    c = random_complex(dims, 3, rng)
    n = int(rng.integers(1, 4))
    for pair in norm_map(module, c, n).values():
        assert pair.projection @ pair.norm == LinearMap.identity(pair.norm.cols)
