# Model structure on coalgebras: classification, lifting, factorization
from opmodel.model.classify import classify_coalgebra_morphism
from opmodel.model.factorization import factorize_cof_trivfib, factorize_smallobject
from opmodel.model.families import sample_generating_family
from opmodel.model.lifting import LiftingProblem, solve_lifting

__all__ = [
    "classify_coalgebra_morphism",
    "factorize_cof_trivfib",
    "factorize_smallobject",
    "sample_generating_family",
    "LiftingProblem",
    "solve_lifting",
]
