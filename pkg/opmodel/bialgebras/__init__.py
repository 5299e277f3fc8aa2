# Algebras, mixed distributive laws and bialgebras
from opmodel.bialgebras.algebras import AlgebraMorphism, PAlgebra, check_algebra, free_algebra
from opmodel.bialgebras.bialgebra import (
    BialgebraMorphism,
    PQBialgebra,
    check_bialgebra,
    check_mixed_law,
    lift_free_to_bialgebra,
)
from opmodel.bialgebras.laws import MixedDistributiveLaw, builtin_law
from opmodel.bialgebras.model import classify_bialgebra_morphism, factorize_bialgebra
from opmodel.bialgebras.pushouts import algebra_pushout, cell_attachment

__all__ = [
    "AlgebraMorphism",
    "PAlgebra",
    "check_algebra",
    "free_algebra",
    "BialgebraMorphism",
    "PQBialgebra",
    "check_bialgebra",
    "check_mixed_law",
    "lift_free_to_bialgebra",
    "MixedDistributiveLaw",
    "builtin_law",
    "classify_bialgebra_morphism",
    "factorize_bialgebra",
    "algebra_pushout",
    "cell_attachment",
]
