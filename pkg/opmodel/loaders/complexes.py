"""Read and write chain complexes and chain maps.

Complex documents::

    {"name": "C", "max_degree": 3,
     "dims": {"1": 1, "2": 1},
     "labels": {"1": ["x"], "2": ["y"]},
     "d": {"2": [["1"]]}}

``d.n`` is the row-major matrix of ``d_n : C_n -> C_{n-1}``. Scalars are
strings ``"p/q"``; integers are accepted. Chain map documents hold
``source``, ``target`` (inline or file references) and ``components``.
"""

from __future__ import annotations

from pathlib import Path

from opmodel.core.complexes import ChainComplex, ChainMap, GradedSpace
from opmodel.core.errors import DegreeMismatch, NotAComplex
from opmodel.core.logging import get_logger
from opmodel.loaders.reader import Node, matrix_to_rows, read_document, reference


def parse_complex(node: Node, max_degree: int | None = None) -> ChainComplex:
    """``max_degree`` overrides the document's truncation when given."""
    D = max_degree if max_degree is not None else node.get("max_degree").as_int(minimum=1)
    dims: dict[int, int] = {}
    if node.has("dims"):
        for key, entry in node.get("dims").items():
            dims[node.get("dims").as_int_key(key)] = entry.as_int(minimum=0)
    labels: dict[int, tuple[str, ...]] = {}
    if node.has("labels"):
        for key, entry in node.get("labels").items():
            d = node.get("labels").as_int_key(key)
            labels[d] = tuple(e.as_str() for e in entry.elements())
            if d in dims and dims[d] != len(labels[d]):
                raise entry.fail(f"{len(labels[d])} labels for a space of dimension {dims[d]}")
            dims[d] = len(labels[d])
    above = sorted(d for d, n in dims.items() if d > D and n)
    if above:
        raise node.fail(f"generators in degree {above[0]} above the truncation degree {D}")
    space = GradedSpace(
        D,
        tuple(labels.get(d, tuple(f"e{d}_{i}" for i in range(dims.get(d, 0)))) for d in range(1, D + 1)),
    )
    diffs = {}
    if node.has("d"):
        block = node.get("d")
        for key, entry in block.items():
            n = block.as_int_key(key, minimum=2)
            if n > D:
                continue
            diffs[n] = entry.as_matrix(space.dim(n - 1), space.dim(n))
    name = node.get("name", "C").as_str()
    try:
        return ChainComplex(space, diffs, name).validate()
    except NotAComplex as exc:
        raise node.fail(f"d∘d is not zero at degree {exc.degree}") from None
    except DegreeMismatch as exc:
        raise node.fail(str(exc)) from None


def complex_to_dict(c: ChainComplex) -> dict:
    return {
        "name": c.name,
        "max_degree": c.max_degree,
        "dims": {str(d): c.dim(d) for d in c.space.degrees if c.dim(d)},
        "labels": {str(d): list(c.space.labels[d - 1]) for d in c.space.degrees if c.dim(d)},
        "d": {
            str(n): matrix_to_rows(c.d(n))
            for n in range(2, c.max_degree + 1)
            if n in c.differentials
        },
    }


def parse_chain_map(node: Node, max_degree: int | None = None) -> ChainMap:
    source = parse_complex(reference(node.get("source")), max_degree)
    target = parse_complex(reference(node.get("target")), max_degree)
    comps = parse_components(node.get("components", {}), source, target)
    f = ChainMap(source, target, comps)
    if not f.is_chain_map():
        raise node.fail(f"not a chain map at degree {f.failing_degree()}")
    return f


def parse_components(node: Node, source: ChainComplex, target: ChainComplex) -> dict:
    comps = {}
    for key, entry in node.items():
        d = node.as_int_key(key)
        if d <= source.max_degree:
            comps[d] = entry.as_matrix(target.dim(d), source.dim(d))
    return comps


def components_to_dict(f: ChainMap) -> dict:
    return {
        str(d): matrix_to_rows(f.component(d))
        for d in f.source.space.degrees
        if f.source.dim(d) and f.target.dim(d)
    }


def chain_map_to_dict(f: ChainMap) -> dict:
    return {
        "source": complex_to_dict(f.source),
        "target": complex_to_dict(f.target),
        "components": components_to_dict(f),
    }


def load_complex(path: Path | str, max_degree: int | None = None) -> ChainComplex:
    logger = get_logger("opmodel.loaders.complexes")
    logger.info(f"Loading complex from {path}")
    c = parse_complex(read_document(path), max_degree)
    logger.info(f"  dims: {list(c.dims)}")
    return c


def load_chain_map(path: Path | str, max_degree: int | None = None) -> ChainMap:
    logger = get_logger("opmodel.loaders.complexes")
    logger.info(f"Loading chain map from {path}")
    return parse_chain_map(read_document(path), max_degree)
