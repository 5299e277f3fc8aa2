# JSON readers and writers for every engine object
from opmodel.loaders.complexes import load_chain_map, load_complex
from opmodel.loaders.laws import load_bialgebra, load_bialgebra_morphism, load_law
from opmodel.loaders.operads import load_operad
from opmodel.loaders.structures import (
    load_algebra,
    load_algebra_morphism,
    load_coalgebra,
    load_coalgebra_morphism,
)

__all__ = [
    "load_chain_map",
    "load_complex",
    "load_bialgebra",
    "load_bialgebra_morphism",
    "load_law",
    "load_operad",
    "load_algebra",
    "load_algebra_morphism",
    "load_coalgebra",
    "load_coalgebra_morphism",
]
