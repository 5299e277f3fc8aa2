"""Read and write mixed distributive laws and bialgebras.

Law documents::

    {"name": "L", "P": "As", "Q": "As",
     "rules": {"2:0,2:0": [{"coeff": "1", "coops": ["1:0", "2:0"],
                            "sigma": [0, 1, 2], "ops": ["2:0", "1:0"]}, ...]},
     "complete": true}

A rule key ``"n:p,m:q"`` names the basis element ``p`` of ``P(n)`` and ``q``
of ``Q(m)``. With ``complete`` (the default) the rules forced by
equivariance are added. ``{"builtin": "biassociative"}`` or a bare string
names a built-in law.

Bialgebra documents either carry ``operations`` and ``cooperations`` on one
``complex`` next to a ``law``, or ``free_on`` a Q-coalgebra, in which case
the compatible structure on the free algebra is computed.
"""

from __future__ import annotations

from pathlib import Path

from opmodel.bialgebras.algebras import PAlgebra
from opmodel.bialgebras.bialgebra import BialgebraMorphism, PQBialgebra, lift_free_to_bialgebra
from opmodel.bialgebras.laws import (
    LAW_NAMES,
    Ladder,
    MixedDistributiveLaw,
    builtin_law,
    complete_rules,
    parse_rule_label,
    validate_law,
)
from opmodel.coalgebras.structure import PCoalgebra
from opmodel.core.complexes import ChainMap
from opmodel.core.errors import InputError
from opmodel.core.logging import get_logger
from opmodel.loaders.complexes import complex_to_dict, parse_complex, parse_components
from opmodel.loaders.operads import operad_to_dict, parse_operad
from opmodel.loaders.reader import Node, read_document, reference
from opmodel.loaders.structures import parse_coalgebra, parse_tables, tables_to_dict
from opmodel.operads.builtins import BUILTIN_NAMES
from opmodel.operads.operad import Operad

DEFAULT_LAW_ARITY = 3


def _slots(node: Node) -> tuple[tuple[int, int], ...]:
    out = []
    for entry in node.elements():
        try:
            r, k = (int(x) for x in entry.as_str().split(":"))
        except ValueError:
            raise entry.fail(f"expected 'arity:index', got {entry.value!r}") from None
        out.append((r, k))
    return tuple(out)


def parse_ladder(node: Node) -> Ladder:
    return Ladder(
        node.get("coeff", "1").as_scalar(),
        _slots(node.get("coops")),
        tuple(e.as_int(minimum=0) for e in node.get("sigma").elements()),
        _slots(node.get("ops")),
    )


def _builtin(node: Node, name: str, max_arity: int) -> MixedDistributiveLaw:
    try:
        return builtin_law(name, max_arity=max_arity)
    except InputError as exc:
        raise node.fail(exc.reason) from None


def parse_law(node: Node) -> MixedDistributiveLaw:
    if isinstance(node.value, str):
        if node.value in LAW_NAMES:
            return _builtin(node, node.value, DEFAULT_LAW_ARITY)
        node = read_document(node.resolve(node.value))
    if node.has("builtin"):
        N = node.get("max_arity", DEFAULT_LAW_ARITY).as_int(minimum=2)
        return _builtin(node.get("builtin"), node.get("builtin").as_str(), N)
    P = parse_operad(node.get("P"))
    Q = parse_operad(node.get("Q"))
    rules = {}
    block = node.get("rules")
    for key, entry in block.items():
        try:
            rule = parse_rule_label(key)
        except InputError as exc:
            raise entry.fail(exc.reason) from None
        rules[rule] = tuple(parse_ladder(e) for e in entry.elements())
    law = MixedDistributiveLaw(node.get("name", "L").as_str(), P, Q, rules)
    report = validate_law(law)
    if not report:
        v = report.first()
        raise block.fail(f"{v.rule} in {v.witness}")
    if node.get("complete", True).as_bool():
        law = MixedDistributiveLaw(law.name, P, Q, complete_rules(P, Q, rules))
    return law


def _operad_ref(operad: Operad) -> str | dict:
    return operad.name if operad.name in BUILTIN_NAMES else operad_to_dict(operad)


def law_to_dict(law: MixedDistributiveLaw) -> dict:
    out = law.to_dict()
    out["P"] = _operad_ref(law.P)
    out["Q"] = _operad_ref(law.Q)
    out["complete"] = False
    return out


def parse_bialgebra(node: Node, max_degree: int | None = None, law: MixedDistributiveLaw | None = None) -> PQBialgebra:
    node = reference(node)
    law = law or parse_law(node.get("law"))
    if node.has("free_on"):
        c = parse_coalgebra(node.get("free_on"), max_degree, law.Q)
        name = node.get("name", f"{law.P.name}({c.name})").as_str()
        return lift_free_to_bialgebra(c, law, name=name)
    complex = parse_complex(reference(node.get("complex")), max_degree)
    name = node.get("name", complex.name).as_str()
    algebra = PAlgebra.from_tables(law.P, complex, parse_tables(node.get("operations", {}), law.P, complex, True), name)
    coalgebra = PCoalgebra.from_tables(
        law.Q, complex, parse_tables(node.get("cooperations", {}), law.Q, complex, False), name
    )
    return PQBialgebra(algebra, coalgebra, law)


def bialgebra_to_dict(b: PQBialgebra) -> dict:
    return {
        "name": b.name,
        "law": law_to_dict(b.law),
        "complex": complex_to_dict(b.complex),
        "operations": tables_to_dict(b.algebra.tables()),
        "cooperations": tables_to_dict(b.coalgebra.tables()),
    }


def parse_bialgebra_morphism(node: Node, max_degree: int | None = None) -> BialgebraMorphism:
    source = parse_bialgebra(node.get("source"), max_degree)
    target = parse_bialgebra(node.get("target"), max_degree, source.law)
    comps = parse_components(node.get("components", {}), source.complex, target.complex)
    return BialgebraMorphism(source, target, ChainMap(source.complex, target.complex, comps))


def load_law(path: Path | str) -> MixedDistributiveLaw:
    logger = get_logger("opmodel.loaders.laws")
    logger.info(f"Loading mixed distributive law from {path}")
    law = parse_law(read_document(path))
    logger.info(f"  {law.name}: {len(law.rules)} rules between {law.P.name} and {law.Q.name}")
    return law


def load_bialgebra(path: Path | str, max_degree: int | None = None) -> PQBialgebra:
    logger = get_logger("opmodel.loaders.laws")
    logger.info(f"Loading bialgebra from {path}")
    b = parse_bialgebra(read_document(path), max_degree)
    logger.info(f"  {b.name}: dims {list(b.complex.dims)}")
    return b


def load_bialgebra_morphism(path: Path | str, max_degree: int | None = None) -> BialgebraMorphism:
    get_logger("opmodel.loaders.laws").info(f"Loading bialgebra morphism from {path}")
    return parse_bialgebra_morphism(read_document(path), max_degree)
