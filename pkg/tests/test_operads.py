from fractions import Fraction

import pytest

from opmodel.core.errors import BadOperad, InputError
from opmodel.core.linalg import LinearMap
from opmodel.core.tensors import (
    TensorBasis,
    all_permutations,
    compose_permutations,
    compositions,
    identity_permutation,
    koszul_sign,
    reduced_word,
    transposition,
)
from opmodel.core.complexes import GradedSpace
from opmodel.operads import SigmaModule, builtin_operad, check_operad_axioms, check_sigma_module, dualize
from opmodel.operads.operad import Operad, require_connected

AS = builtin_operad("As", 4)
COM = builtin_operad("Com", 4)
LIE = builtin_operad("Lie3", 3)


def test_builtin_dims():
    assert AS.module.dims == (1, 2, 6, 24)
    assert COM.module.dims == (1, 1, 1, 1)
    assert LIE.module.dims == (1, 1, 2)


def test_lie_alias_and_unknown_name():
    assert builtin_operad("Lie", 3).module.dims == (1, 1, 2)
    with pytest.raises(InputError, match="unknown built-in operad"):
        builtin_operad("Pois")


@pytest.mark.parametrize("operad", [AS, COM, LIE], ids=lambda o: o.name)
def test_builtins_satisfy_axioms(operad):
    report = check_operad_axioms(operad)
    assert report.ok, report.to_dict()
    assert report.checked > 0


def test_corrupted_unit_composition_is_reported():
    """Zeroing ∘_1 : P(2) ⊗ P(1) -> P(2) breaks the right unit law."""
    broken = COM.with_composition((2, 1, 0), LinearMap.zero(1, 1))
    report = check_operad_axioms(broken)
    assert not report.ok
    first = report.first()
    assert first.rule == "right-unit"
    assert first.witness == {"arity": 2, "basis": 0, "position": 1}


def test_corrupted_associativity_is_reported():
    """Scaling one ∘_1 table of Com breaks sequential associativity in arity 4."""
    broken = COM.with_composition((3, 2, 0), LinearMap.from_rows([[2]]))
    rules = {v.rule for v in check_operad_axioms(broken).violations}
    assert "sequential-associativity" in rules


def test_sigma_module_rejects_non_involution():
    module = SigmaModule((1, 2), {1: (), 2: (LinearMap.from_rows([[1, 1], [0, 1]]),)}, "bad")
    report = check_sigma_module(module)
    assert report.first().rule == "involution"


def test_dualize_is_an_involution():
    back = dualize(dualize(AS))
    assert back.name == "As"
    for key, table in AS.compositions.items():
        assert back.compositions[key] == table


def test_dual_com_tables_are_identities():
    co = dualize(COM)
    assert co.name == "Com*"
    assert all(t == LinearMap.identity(1) for t in co.decompositions.values())


def test_lie_decomposition_rank():
    """Both ways of nesting two brackets span Lie(3)."""
    stacked = LinearMap.hstack([LIE.composition(2, 2, 0), LIE.composition(2, 2, 1)])
    assert stacked.rank() == 2
    assert LIE.compose_basis(2, 0, 2, 0, 0) == {0: Fraction(1)}


def test_total_composition_of_identities():
    """γ(x1x2; x1x2, x1) = x1x2x3 in As."""
    assert AS.total(2, 0, ((2, 0), (1, 0))) == {0: Fraction(1)}


def test_require_connected():
    require_connected(AS)
    module = SigmaModule.trivial((2,), "two")
    operad = Operad("two", module, (Fraction(1), Fraction(0)), {})
    with pytest.raises(BadOperad):
        require_connected(operad)


@pytest.mark.parametrize("perm", all_permutations(4))
def test_reduced_word_rebuilds_permutation(perm):
    out = identity_permutation(4)
    for i in reduced_word(perm):
        out = compose_permutations(out, transposition(4, i))
    assert out == perm


def test_koszul_sign():
    assert koszul_sign((1, 0), [1, 1]) == -1
    assert koszul_sign((1, 0), [1, 2]) == 1
    assert koszul_sign((2, 0, 1), [1, 1, 1]) == 1


def test_tensor_basis_order():
    words = TensorBasis(GradedSpace.from_dims(2, {1: 2}))
    assert words.words(2, 2) == ((0, 0), (0, 1), (1, 0), (1, 1))
    assert words.index((1, 0)) == 2
    assert words.dim(3, 2) == 0


def test_compositions():
    assert list(compositions(4, 2)) == [(1, 3), (2, 2), (3, 1)]
    assert list(compositions(2, 3)) == []
