# Coalgebras, the cofree construction, limits and colimits
from opmodel.coalgebras.closure import finite_subcoalgebra
from opmodel.coalgebras.cofree import cofree, cofree_lift, cofree_map, comonad_coproduct
from opmodel.coalgebras.colimits import pushout
from opmodel.coalgebras.limits import equalizer, iterated_product, product
from opmodel.coalgebras.structure import (
    CoalgebraMorphism,
    PCoalgebra,
    check_coalgebra,
    check_morphism,
)

__all__ = [
    "finite_subcoalgebra",
    "cofree",
    "cofree_lift",
    "cofree_map",
    "comonad_coproduct",
    "pushout",
    "equalizer",
    "iterated_product",
    "product",
    "CoalgebraMorphism",
    "PCoalgebra",
    "check_coalgebra",
    "check_morphism",
]
