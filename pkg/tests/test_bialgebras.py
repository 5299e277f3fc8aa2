import itertools
from fractions import Fraction

import pytest

from opmodel.bialgebras import (
    BialgebraMorphism,
    MixedDistributiveLaw,
    builtin_law,
    check_bialgebra,
    check_mixed_law,
    classify_bialgebra_morphism,
    factorize_bialgebra,
    lift_free_to_bialgebra,
)
from opmodel.bialgebras.algebras import free_unit
from opmodel.bialgebras.bialgebra import bialgebra_extension, check_bialgebra_morphism, free_bialgebra_map
from opmodel.bialgebras.laws import LAW_NAMES, parse_rule_label, rule_label, validate_law
from opmodel.coalgebras import CoalgebraMorphism, PCoalgebra, cofree
from opmodel.coalgebras.cofree import zero_coalgebra
from opmodel.core.complexes import ChainMap, direct_sum, sphere
from opmodel.core.config import FamilyBounds
from opmodel.core.errors import DegreeMismatch, InputError, LawInconsistent
from opmodel.core.linalg import LinearMap, add_into
from opmodel.core.tensors import tensor_product
from opmodel.model import sample_generating_family

BIASSOCIATIVE = builtin_law("biassociative")
D = 2


def _doubled_first_ladder(law: MixedDistributiveLaw) -> MixedDistributiveLaw:
    rules = {key: (ladders[0].scaled(2),) + ladders[1:] for key, ladders in law.rules.items() if ladders}
    return MixedDistributiveLaw(f"{law.name}-doubled", law.P, law.Q, rules)


def _two_odd_generators():
    return direct_sum(sphere(1, D), sphere(1, D, label="t"))


@pytest.mark.parametrize("name", LAW_NAMES)
def test_builtin_laws_are_well_shaped(name):
    assert validate_law(builtin_law(name)).ok


@pytest.mark.parametrize("name", LAW_NAMES)
def test_builtin_laws_pass_compatibility_squares(name):
    law = builtin_law(name)
    report = check_mixed_law(law, probes=[sphere(1, D)])
    assert report.ok, report.to_dict()


def test_unknown_law():
    with pytest.raises(InputError, match="unknown law"):
        builtin_law("hopf")


def test_rule_labels():
    assert rule_label((2, 0, 2, 1)) == "2:0,2:1"
    assert parse_rule_label("3:1,2:0") == (3, 1, 2, 0)
    with pytest.raises(InputError, match="not of the form"):
        parse_rule_label("2:0")


def test_biassociative_rules_are_completed():
    """Rules for x1x2 propagate to x2x1 and to the opposite coproduct."""
    assert set(BIASSOCIATIVE.rules) == {(2, p, 2, q) for p in range(2) for q in range(2)}


@pytest.mark.parametrize(
    "coalgebra",
    [
        cofree(BIASSOCIATIVE.Q, sphere(1, D))[0],
        PCoalgebra.trivial(BIASSOCIATIVE.Q, sphere(1, 3)),
        PCoalgebra.trivial(BIASSOCIATIVE.Q, _two_odd_generators()),
    ],
    ids=["cofree", "primitive", "two-primitives"],
)
def test_lifted_free_algebra_is_a_bialgebra(coalgebra):
    b = lift_free_to_bialgebra(coalgebra, BIASSOCIATIVE)
    report = check_bialgebra(b)
    assert report.ok, report.to_dict()


def test_lift_needs_matching_coalgebra_operad():
    law = builtin_law("commutative")
    c = PCoalgebra.trivial(BIASSOCIATIVE.Q, sphere(1, D))
    with pytest.raises(DegreeMismatch):
        lift_free_to_bialgebra(c, law)


def test_conflicting_law_is_reported():
    """Doubling one ladder of the commutative law makes x·t overdetermined."""
    broken = _doubled_first_ladder(builtin_law("commutative"))
    c, _ = cofree(broken.Q, _two_odd_generators())
    with pytest.raises(LawInconsistent):
        lift_free_to_bialgebra(c, broken)
    report = check_mixed_law(broken, probes=[_two_odd_generators()])
    assert report.first().rule == "axiom-i"


def _free_cell_map():
    """``0 -> T(x)`` with ``x`` primitive in degree one."""
    law = BIASSOCIATIVE
    source = lift_free_to_bialgebra(zero_coalgebra(law.Q, D), law)
    target = lift_free_to_bialgebra(PCoalgebra.trivial(law.Q, sphere(1, D)), law)
    return BialgebraMorphism(source, target, ChainMap.zero(source.complex, target.complex))


def test_classify_identity_bialgebra_map():
    f = _free_cell_map()
    flags = classify_bialgebra_morphism(BialgebraMorphism.identity(f.target))
    assert flags.weak_equivalence
    assert flags.cofibration


def test_bialgebra_factorization_attaches_cells():
    f = _free_cell_map()
    family = sample_generating_family(
        BIASSOCIATIVE.Q, FamilyBounds(max_dim=1, max_degree=2, size=2), seed=0, max_degree=D
    )
    result = factorize_bialgebra(f, family, probes=2)
    assert result.method == "bialgebra-small-object"
    assert result.certificates["stages"] == 1
    assert result.certificates["stage_maps_injective"]
    assert result.composite_ok()


def test_bialgebra_factorization_degree_limit():
    law = BIASSOCIATIVE
    source = lift_free_to_bialgebra(zero_coalgebra(law.Q, 3), law)
    f = BialgebraMorphism.identity(source)
    with pytest.raises(DegreeMismatch, match="up to degree 2"):
        factorize_bialgebra(f)


def test_free_bialgebra_map_doubles_words():
    law = BIASSOCIATIVE
    c = PCoalgebra.trivial(law.Q, sphere(1, D))
    b = lift_free_to_bialgebra(c, law)
    doubled = CoalgebraMorphism(c, c, ChainMap(c.complex, c.complex, {1: LinearMap.from_rows([[2]])}))
    f = free_bialgebra_map(doubled, b, b)
    assert check_bialgebra_morphism(f).ok
    assert f.component(2) == LinearMap.from_rows([[4]])


def test_extension_of_the_unit_is_the_identity():
    """A coalgebra map ``C -> X`` extends uniquely to ``P(C) -> X``."""
    law = BIASSOCIATIVE
    c = PCoalgebra.trivial(law.Q, sphere(1, D))
    b = lift_free_to_bialgebra(c, law)
    unit = CoalgebraMorphism(c, b.coalgebra, free_unit(b.algebra))
    assert bialgebra_extension(b, b, unit) == BialgebraMorphism.identity(b)


def _word(algebra, unit, letters) -> dict:
    """The product ``l1 l2 ... lk`` of generators, read left to right."""
    out = unit(letters[0])
    for g in letters[1:]:
        out = algebra.op_tensor(2, {0: Fraction(1)}, tensor_product([out, unit(g)]))
    return out


def _unshuffle(algebra, unit, letters, degree_of) -> dict:
    """Reduced unshuffle coproduct of a word of primitive letters, with Koszul signs."""
    out: dict = {}
    n = len(letters)
    for size in range(1, n):
        for picked in itertools.combinations(range(n), size):
            rest = [i for i in range(n) if i not in picked]
            crossings = sum(degree_of(letters[i]) * degree_of(letters[j]) for j in picked for i in rest if i < j)
            left = _word(algebra, unit, [letters[i] for i in picked])
            right = _word(algebra, unit, [letters[i] for i in rest])
            add_into(out, tensor_product([left, right]), Fraction((-1) ** crossings))
    return out


@pytest.mark.parametrize(
    "generators",
    [
        sphere(1, 3),
        direct_sum(sphere(1, 3), sphere(1, 3, label="t")),
        direct_sum(sphere(1, 3), sphere(2, 3, label="y")),
    ],
    ids=["one-odd", "two-odd", "odd-even"],
)
def test_lifted_coproduct_is_the_unshuffle_coproduct(generators):
    """On primitive generators the lifted biassociative structure is the tensor bialgebra."""
    b = lift_free_to_bialgebra(PCoalgebra.trivial(BIASSOCIATIVE.Q, generators), BIASSOCIATIVE)
    unit = free_unit(b.algebra).global_column
    degree_of = generators.space.degree_of
    letters = range(generators.space.total_dim)
    checked = 0
    for k in (2, 3):
        for word in itertools.product(letters, repeat=k):
            if sum(degree_of(g) for g in word) > 3:
                continue
            element = _word(b.algebra, unit, list(word))
            lifted: dict = {}
            for g, c in element.items():
                add_into(lifted, b.coalgebra.coop_global(2, 0, g), c)
            assert lifted == _unshuffle(b.algebra, unit, list(word), degree_of), word
            checked += 1
    assert checked >= 2


def test_square_of_an_odd_primitive_is_primitive():
    b = lift_free_to_bialgebra(PCoalgebra.trivial(BIASSOCIATIVE.Q, sphere(1, 3)), BIASSOCIATIVE)
    unit = free_unit(b.algebra).global_column
    square = _word(b.algebra, unit, [0, 0])
    assert square
    for g in square:
        assert b.coalgebra.coop_global(2, 0, g) == {}
