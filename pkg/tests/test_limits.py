import pytest

from opmodel.coalgebras import (
    CoalgebraMorphism,
    PCoalgebra,
    check_coalgebra,
    check_morphism,
    cofree,
    equalizer,
    iterated_product,
    product,
    pushout,
)
from opmodel.coalgebras.cofree import zero_coalgebra
from opmodel.core.complexes import ChainComplex, ChainMap, direct_sum, sphere
from opmodel.core.errors import NotCoreflexive
from opmodel.operads import builtin_operad

AS = builtin_operad("As", 3)
D = 2


def _primitive(n: int) -> PCoalgebra:
    return PCoalgebra.trivial(AS, sphere(n, D))


def test_equalizer_of_equal_maps_is_everything():
    c, _ = cofree(AS, sphere(1, D))
    ident = CoalgebraMorphism.identity(c)
    inclusion = equalizer(ident, ident, ChainMap.identity(c.complex))
    assert inclusion.source.complex.dims == c.complex.dims
    assert check_morphism(inclusion).ok


def test_equalizer_requires_common_section():
    c, _ = cofree(AS, sphere(1, D))
    ident = CoalgebraMorphism.identity(c)
    with pytest.raises(NotCoreflexive):
        equalizer(ident, ident, ChainMap.zero(c.complex, c.complex))


def test_product_with_final_object():
    """A × P*(0) ≅ A."""
    a, _ = cofree(AS, sphere(1, D))
    final, _ = cofree(AS, ChainComplex.zero(D))
    result = product(a, final)
    assert result.coalgebra.complex.dims == a.complex.dims
    assert result.projections[0].map.is_iso()


def test_product_of_cofree_is_cofree_of_sum():
    v, w = sphere(1, D), sphere(1, D)
    left, _ = cofree(AS, v)
    right, _ = cofree(AS, w)
    both, _ = cofree(AS, direct_sum(v, w))
    result = product(left, right)
    assert result.coalgebra.complex.dims == both.complex.dims
    assert check_coalgebra(result.coalgebra).ok


def test_product_projections_and_pairing():
    result = product(_primitive(1), _primitive(1))
    first, second = result.projections
    assert check_morphism(first).ok
    assert check_morphism(second).ok
    paired = result.pair(first, second)
    assert paired.map == ChainMap.identity(result.coalgebra.complex)


def test_iterated_product_projections():
    total, projections = iterated_product([_primitive(1), _primitive(2), _primitive(1)])
    assert len(projections) == 3
    for p in projections:
        assert p.source is total
        assert check_morphism(p).ok


def test_pushout_over_zero_is_direct_sum():
    zero = zero_coalgebra(AS, D)
    b, _ = cofree(AS, sphere(1, D))
    c = _primitive(2)
    result = pushout(CoalgebraMorphism.zero(zero, b), CoalgebraMorphism.zero(zero, c))
    assert result.coalgebra.complex.dims == (1, 2)
    assert check_coalgebra(result.coalgebra).ok
    assert check_morphism(result.from_left).ok


def test_pushout_along_identity():
    b, _ = cofree(AS, sphere(1, D))
    ident = CoalgebraMorphism.identity(b)
    result = pushout(ident, ident)
    assert result.coalgebra.complex.dims == b.complex.dims
    assert result.cobase_injective
    back = result.induced(ident, ident)
    assert back.compose(result.from_left) == ident
