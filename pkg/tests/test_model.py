"""Tests for classification, lifting and factorization of coalgebra morphisms."""

import numpy as np
import pytest

from opmodel.coalgebras import CoalgebraMorphism, PCoalgebra, check_morphism, cofree, cofree_lift
from opmodel.coalgebras.cofree import zero_coalgebra
from opmodel.coalgebras.structure import subcoalgebra
from opmodel.core.complexes import ChainMap, is_weak_equivalence, random_complex, sphere
from opmodel.core.config import FamilyBounds
from opmodel.core.errors import IllFormed, NoLiftFound, StageBudgetExhausted
from opmodel.core.linalg import LinearMap
from opmodel.model import (
    LiftingProblem,
    classify_coalgebra_morphism,
    factorize_cof_trivfib,
    factorize_smallobject,
    sample_generating_family,
    solve_lifting,
)
from opmodel.model.families import FamilyMember, GeneratingFamily
from opmodel.operads import builtin_operad

AS = builtin_operad("As", 3)
D = 2


def _cell_family() -> GeneratingFamily:
    """The single generator ``0 -> S^1`` with zero cooperations."""
    zero = zero_coalgebra(AS, D)
    cell = PCoalgebra.trivial(AS, sphere(1, D))
    j = CoalgebraMorphism(zero, cell, ChainMap.zero(zero.complex, cell.complex))
    return GeneratingFamily((FamilyMember(j, "0->cell", False),))


def test_identity_is_weak_equivalence_and_cofibration():
    c, _ = cofree(AS, sphere(1, D))
    flags = classify_coalgebra_morphism(CoalgebraMorphism.identity(c))
    assert flags.weak_equivalence
    assert flags.cofibration
    assert flags.fibration_wrt is None
    assert "rlp" not in flags.to_dict()


def test_identity_is_fibration_relative_to_family():
    cell = PCoalgebra.trivial(AS, sphere(1, D))
    flags = classify_coalgebra_morphism(CoalgebraMorphism.identity(cell), _cell_family())
    assert flags.fibration_wrt is True
    assert flags.rlp.tested >= 1


def test_subcoalgebra_inclusion_is_cofibration():
    c, _ = cofree(AS, sphere(1, D))
    inclusion = subcoalgebra(c, {1: LinearMap.identity(1)})
    flags = classify_coalgebra_morphism(inclusion)
    assert flags.cofibration
    assert not flags.weak_equivalence


def test_classify_rejects_non_morphism():
    c, _ = cofree(AS, sphere(1, D))
    flat = PCoalgebra.trivial(AS, c.complex)
    with pytest.raises(IllFormed, match="not a coalgebra morphism"):
        classify_coalgebra_morphism(CoalgebraMorphism(c, flat, ChainMap.identity(c.complex)))


def test_sampled_family_is_deterministic():
    bounds = FamilyBounds(max_dim=3, max_degree=2, size=3)
    first = sample_generating_family(AS, bounds, seed=5, max_degree=D)
    second = sample_generating_family(AS, bounds, seed=5, max_degree=D)
    assert first.to_dict() == second.to_dict()
    assert len(first) <= 3
    for member in first.members:
        assert member.map.map.is_injective()
        assert member.map.target.space.total_dim <= 3
        assert check_morphism(member.map).ok


def test_one_dimensional_bounds_give_cells():
    family = sample_generating_family(AS, FamilyBounds(max_dim=1, max_degree=2, size=3), max_degree=D)
    assert len(family) == 3
    assert {m.shape for m in family.members} == {"0->cell"}


def test_acyclic_family_members_are_weak_equivalences():
    family = sample_generating_family(
        AS, FamilyBounds(max_dim=4, max_degree=2, size=3), acyclic=True, seed=1, max_degree=3
    )
    assert family.acyclic
    assert all(m.acyclic for m in family.members)


def test_lift_through_isomorphism():
    c, _ = cofree(AS, sphere(1, D))
    ident = CoalgebraMorphism.identity(c)
    cert = solve_lifting(LiftingProblem(ident, ident, ident, ident))
    assert cert.strategy == "inverse"
    assert cert.lift == ident
    assert cert.to_dict()["verified"]


def test_missing_lift_is_reported_with_degree():
    """``0 -> S^1`` does not lift against ``0 -> S^1`` when ``b`` is the identity."""
    zero = zero_coalgebra(AS, D)
    cell = PCoalgebra.trivial(AS, sphere(1, D))
    j = CoalgebraMorphism.zero(zero, cell)
    problem = LiftingProblem(j, j, CoalgebraMorphism.identity(zero), CoalgebraMorphism.identity(cell))
    assert problem.commutes()
    with pytest.raises(NoLiftFound) as info:
        solve_lifting(problem)
    assert info.value.degree == 1


def test_greedy_lift_into_cofree():
    zero = zero_coalgebra(AS, D)
    c, _ = cofree(AS, sphere(1, D))
    problem = LiftingProblem(
        CoalgebraMorphism.zero(zero, c),
        CoalgebraMorphism.zero(c, zero),
        CoalgebraMorphism.zero(zero, c),
        CoalgebraMorphism.zero(c, zero),
    )
    cert = solve_lifting(problem)
    assert cert.strategy == "greedy"
    assert cert.lift == CoalgebraMorphism.zero(c, c)


def test_cone_factorization():
    """S^1 -> 0 factors through As*(cone S^1)."""
    cell = PCoalgebra.trivial(AS, sphere(1, 3))
    f = CoalgebraMorphism.zero(cell, zero_coalgebra(AS, 3))
    family = sample_generating_family(AS, FamilyBounds(max_dim=2, max_degree=2, size=2), max_degree=3)
    result = factorize_cof_trivfib(f, family, probes=2)
    assert result.method == "cone"
    assert result.middle.complex.dims == (1, 2, 3)
    assert result.composite_ok()
    assert result.certificates["left_injective"]
    assert result.certificates["right_weak_equivalence"]
    assert result.certificates["right_rlp"]["holds"]
    assert check_morphism(result.left).ok


def test_small_object_with_empty_family():
    c, _ = cofree(AS, sphere(1, D))
    f = CoalgebraMorphism.identity(c)
    result = factorize_smallobject(f, GeneratingFamily())
    assert result.certificates["stages"] == 0
    assert result.stages.empty
    assert result.composite_ok()


def test_small_object_attaches_one_cell():
    family = _cell_family()
    f = family.members[0].map
    result = factorize_smallobject(f, family, probes=2)
    assert result.certificates["stages"] == 1
    assert result.middle.complex.dims == (1, 0)
    assert result.composite_ok()
    assert result.certificates["stage_maps_injective"]
    assert result.certificates["right_rlp"]["holds"]
    assert list(result.stages.columns) == ["stage", "squares", "dims", "injective", "weak_equivalence"]


def test_small_object_stage_budget():
    family = _cell_family()
    with pytest.raises(StageBudgetExhausted, match="after 0 stages"):
        factorize_smallobject(family.members[0].map, family, max_stages=0)


@pytest.fixture(scope="module")
def wide_family() -> GeneratingFamily:
    return sample_generating_family(AS, FamilyBounds(max_dim=2, max_degree=2, size=50), seed=11, max_degree=3)


def test_wide_family_is_full(wide_family):
    assert len(wide_family) == 50
    assert all(m.map.map.is_injective() for m in wide_family.members)


def _corpus_morphism(seed: int) -> CoalgebraMorphism:
    rng = np.random.default_rng(seed)
    x = PCoalgebra.trivial(AS, random_complex({1: 1, 2: int(rng.integers(0, 2))}, 3, rng))
    kind = seed % 3
    if kind == 0:
        return CoalgebraMorphism.identity(x)
    if kind == 1:
        return CoalgebraMorphism.zero(x, zero_coalgebra(AS, 3))
    return cofree_lift(x, ChainMap.identity(x.complex))


@pytest.mark.parametrize("seed", range(25))
def test_cone_factorization_corpus(wide_family, seed):
    f = _corpus_morphism(seed)
    result = factorize_cof_trivfib(f, wide_family, probes=1, seed=seed)
    assert result.composite_ok()
    assert result.left.map.is_injective()
    assert is_weak_equivalence(result.right.map)
    rlp = result.certificates["right_rlp"]
    assert rlp["holds"]
    assert rlp["failures"] == []
