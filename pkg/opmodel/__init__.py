from opmodel.core.complexes import ChainComplex, ChainMap, homology
from opmodel.operads.builtins import builtin_operad
from opmodel.coalgebras.cofree import cofree

__version__ = "0.1.0"

__all__ = [
    "ChainComplex",
    "ChainMap",
    "homology",
    "builtin_operad",
    "cofree",
]
