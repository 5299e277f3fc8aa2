"""Read and write coalgebras, algebras and their morphisms.

Coalgebra documents::

    {"name": "A", "operad": "As", "complex": {...} | "complex.json",
     "cooperations": {"2:0": {"2": [[...], ...]}}}

``cooperations."n:b"."d"`` is the matrix of ``ρ_b : A_d -> (A^{⊗n})_d`` for
the basis element ``b`` (0-based) of ``P(n)``; rows follow the lexicographic
order of basis words. ``{"operad": ..., "cofree_on": complex}`` describes
the cofree coalgebra instead. Algebra documents use ``operations`` with the
transposed shape ``A_d <- (A^{⊗n})_d``. Morphism documents hold ``source``,
``target`` and ``components``.

The loaders only check shapes; structure axioms are left to the checkers so
that faulty inputs can be diagnosed.
"""

from __future__ import annotations

from pathlib import Path

from opmodel.bialgebras.algebras import AlgebraMorphism, PAlgebra
from opmodel.coalgebras.cofree import cofree
from opmodel.coalgebras.structure import CoalgebraMorphism, PCoalgebra
from opmodel.core.complexes import ChainComplex, ChainMap
from opmodel.core.linalg import LinearMap
from opmodel.core.logging import get_logger
from opmodel.core.tensors import TensorBasis
from opmodel.loaders.complexes import complex_to_dict, components_to_dict, parse_complex, parse_components
from opmodel.loaders.operads import parse_operad
from opmodel.loaders.reader import Node, matrix_to_rows, read_document, reference
from opmodel.operads.operad import Operad


def _slot(node: Node, key: str, operad: Operad) -> tuple[int, int]:
    try:
        n, b = (int(x) for x in key.split(":"))
    except ValueError:
        raise node.fail(f"key {key!r} is not of the form 'n:b'") from None
    if n < 2 or not (0 <= b < operad.dim(n)):
        raise node.fail(f"{operad.name} has no basis element {b} in arity {n}")
    return n, b


def parse_tables(node: Node, operad: Operad, c: ChainComplex, transposed: bool) -> dict:
    words = TensorBasis(c.space)
    tables: dict[tuple[int, int], dict[int, LinearMap]] = {}
    for key, per_degree in node.items():
        n, b = _slot(per_degree, key, operad)
        for dkey, entry in per_degree.items():
            d = per_degree.as_int_key(dkey)
            if d > c.max_degree:
                continue
            shape = (c.dim(d), words.dim(n, d)) if transposed else (words.dim(n, d), c.dim(d))
            tables.setdefault((n, b), {})[d] = entry.as_matrix(*shape)
    return tables


def tables_to_dict(tables: dict) -> dict:
    return {
        f"{n}:{b}": {str(d): matrix_to_rows(t) for d, t in sorted(per.items()) if not t.is_zero()}
        for (n, b), per in sorted(tables.items())
        if any(not t.is_zero() for t in per.values())
    }


def parse_coalgebra(node: Node, max_degree: int | None = None, operad: Operad | None = None) -> PCoalgebra:
    node = reference(node)
    operad = operad or parse_operad(node.get("operad"))
    if node.has("cofree_on"):
        v = parse_complex(reference(node.get("cofree_on")), max_degree)
        c, _ = cofree(operad, v, node.get("name", f"{operad.name}*({v.name})").as_str())
        return c
    complex = parse_complex(reference(node.get("complex")), max_degree)
    tables = parse_tables(node.get("cooperations", {}), operad, complex, transposed=False)
    return PCoalgebra.from_tables(operad, complex, tables, node.get("name", complex.name).as_str())


def coalgebra_to_dict(c: PCoalgebra, operad_ref: str | dict | None = None) -> dict:
    return {
        "name": c.name,
        "operad": operad_ref or c.operad.name,
        "complex": complex_to_dict(c.complex),
        "cooperations": tables_to_dict(c.tables()),
    }


def parse_algebra(node: Node, max_degree: int | None = None, operad: Operad | None = None) -> PAlgebra:
    node = reference(node)
    operad = operad or parse_operad(node.get("operad"))
    complex = parse_complex(reference(node.get("complex")), max_degree)
    tables = parse_tables(node.get("operations", {}), operad, complex, transposed=True)
    return PAlgebra.from_tables(operad, complex, tables, node.get("name", complex.name).as_str())


def algebra_to_dict(a: PAlgebra, operad_ref: str | dict | None = None) -> dict:
    return {
        "name": a.name,
        "operad": operad_ref or a.operad.name,
        "complex": complex_to_dict(a.complex),
        "operations": tables_to_dict(a.tables()),
    }


def parse_coalgebra_morphism(node: Node, max_degree: int | None = None) -> CoalgebraMorphism:
    source = parse_coalgebra(node.get("source"), max_degree)
    target = parse_coalgebra(node.get("target"), max_degree, source.operad)
    comps = parse_components(node.get("components", {}), source.complex, target.complex)
    return CoalgebraMorphism(source, target, ChainMap(source.complex, target.complex, comps))


def coalgebra_morphism_to_dict(f: CoalgebraMorphism) -> dict:
    return {
        "source": coalgebra_to_dict(f.source),
        "target": coalgebra_to_dict(f.target),
        "components": components_to_dict(f.map),
    }


def parse_algebra_morphism(node: Node, max_degree: int | None = None) -> AlgebraMorphism:
    source = parse_algebra(node.get("source"), max_degree)
    target = parse_algebra(node.get("target"), max_degree, source.operad)
    comps = parse_components(node.get("components", {}), source.complex, target.complex)
    return AlgebraMorphism(source, target, ChainMap(source.complex, target.complex, comps))


def load_coalgebra(path: Path | str, max_degree: int | None = None) -> PCoalgebra:
    logger = get_logger("opmodel.loaders.structures")
    logger.info(f"Loading coalgebra from {path}")
    c = parse_coalgebra(read_document(path), max_degree)
    logger.info(f"  {c.operad.name}-coalgebra {c.name}: dims {list(c.complex.dims)}")
    return c


def load_algebra(path: Path | str, max_degree: int | None = None) -> PAlgebra:
    logger = get_logger("opmodel.loaders.structures")
    logger.info(f"Loading algebra from {path}")
    a = parse_algebra(read_document(path), max_degree)
    logger.info(f"  {a.operad.name}-algebra {a.name}: dims {list(a.complex.dims)}")
    return a


def load_coalgebra_morphism(path: Path | str, max_degree: int | None = None) -> CoalgebraMorphism:
    get_logger("opmodel.loaders.structures").info(f"Loading coalgebra morphism from {path}")
    return parse_coalgebra_morphism(read_document(path), max_degree)


def load_algebra_morphism(path: Path | str, max_degree: int | None = None) -> AlgebraMorphism:
    get_logger("opmodel.loaders.structures").info(f"Loading algebra morphism from {path}")
    return parse_algebra_morphism(read_document(path), max_degree)
