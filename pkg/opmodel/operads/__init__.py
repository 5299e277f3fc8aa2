# Σ-modules, operads and Schur functors
from opmodel.operads.builtins import builtin_operad
from opmodel.operads.operad import Cooperad, Operad, check_operad_axioms, dualize
from opmodel.operads.schur import SchurValue, schur_evaluate, schur_map
from opmodel.operads.sigma import SigmaModule, check_sigma_module

__all__ = [
    "builtin_operad",
    "Cooperad",
    "Operad",
    "check_operad_axioms",
    "dualize",
    "SchurValue",
    "schur_evaluate",
    "schur_map",
    "SigmaModule",
    "check_sigma_module",
]
