"""Read and write operads given by partial composition tables.

Operad documents::

    {"name": "P", "max_arity": 3, "dims": [1, 2, 6],
     "transpositions": {"2": [[["0", "1"], ["1", "0"]]], ...},
     "unit": ["1"],
     "compositions": {"2,2,1": [[...], ...], ...}}

``transpositions.n`` lists the matrices of the adjacent transpositions of
``Σ_n``; ``compositions."m,n,i"`` is the row-major table of ``∘_i`` (``i``
1-based) with column ``a * dim P(n) + b`` holding ``e_a ∘_i e_b``. A
document ``{"builtin": "As", "max_arity": 3}`` names a built-in operad, and
so does a bare string reference such as ``"Com"``.
"""

from __future__ import annotations

from pathlib import Path

from opmodel.core.errors import InputError
from opmodel.core.linalg import LinearMap, format_scalar
from opmodel.core.logging import get_logger
from opmodel.loaders.reader import Node, matrix_to_rows, read_document
from opmodel.operads.builtins import BUILTIN_NAMES, builtin_operad
from opmodel.operads.operad import Operad, check_operad_axioms
from opmodel.operads.sigma import SigmaModule

DEFAULT_MAX_ARITY = 3


def _builtin(node: Node, name: str, max_arity: int) -> Operad:
    try:
        return builtin_operad(name, max_arity)
    except InputError as exc:
        raise node.fail(exc.reason) from None


def parse_operad(node: Node, max_arity: int | None = None, validate: bool = True) -> Operad:
    """An operad from an inline document, a file reference or a built-in name.

    With ``validate`` documents with tables are checked against every operad
    axiom and refused when one fails.
    """
    if isinstance(node.value, str):
        if node.value in BUILTIN_NAMES or node.value == "Lie":
            return _builtin(node, node.value, max_arity or DEFAULT_MAX_ARITY)
        node = read_document(node.resolve(node.value))
    if node.has("builtin"):
        N = max_arity or node.get("max_arity", DEFAULT_MAX_ARITY).as_int(minimum=1)
        return _builtin(node.get("builtin"), node.get("builtin").as_str(), N)

    N = node.get("max_arity").as_int(minimum=1)
    dims_node = node.get("dims")
    dims = tuple(e.as_int(minimum=0) for e in dims_node.elements())
    if len(dims) != N:
        raise dims_node.fail(f"expected {N} dimensions, got {len(dims)}")
    name = node.get("name", "P").as_str()

    gens: dict[int, tuple[LinearMap, ...]] = {n: () for n in range(1, N + 1)}
    block = node.get("transpositions", {})
    for key, entry in block.items():
        n = block.as_int_key(key, minimum=2)
        if n > N:
            continue
        mats = tuple(m.as_matrix(dims[n - 1], dims[n - 1]) for m in entry.elements())
        if len(mats) != n - 1:
            raise entry.fail(f"expected {n - 1} transposition matrices, got {len(mats)}")
        gens[n] = mats
    missing = [n for n in range(2, N + 1) if not gens[n] and dims[n - 1]]
    if missing:
        raise block.fail(f"missing transpositions for arity {missing[0]}")
    for n in range(2, N + 1):
        if not gens[n]:
            gens[n] = tuple(LinearMap.zero(0, 0) for _ in range(n - 1))
    module = SigmaModule(dims, gens, name)

    unit = node.get("unit").as_vector(dims[0])

    comps = {}
    block = node.get("compositions", {})
    for key, entry in block.items():
        try:
            m, n, i = (int(x) for x in key.split(","))
        except ValueError:
            raise entry.fail(f"composition key {key!r} is not of the form 'm,n,i'") from None
        if not (1 <= i <= m) or m + n - 1 > N:
            raise entry.fail(f"composition ({m},{n},{i}) is out of range for arity {N}")
        comps[(m, n, i - 1)] = entry.as_matrix(module.dim(m + n - 1), module.dim(m) * module.dim(n))
    for m in range(1, N + 1):
        for n in range(1, N + 2 - m):
            for i in range(m):
                comps.setdefault((m, n, i), LinearMap.zero(module.dim(m + n - 1), module.dim(m) * module.dim(n)))

    operad = Operad(name, module, unit, comps)
    if not validate:
        return operad
    report = check_operad_axioms(operad)
    if not report:
        v = report.first()
        raise node.fail(f"operad axiom {v.rule!r} fails: {v.witness}")
    return operad


def operad_to_dict(operad: Operad) -> dict:
    N = operad.max_arity
    return {
        "name": operad.name,
        "max_arity": N,
        "dims": list(operad.module.dims),
        "transpositions": {
            str(n): [matrix_to_rows(g) for g in operad.module.transpositions[n]]
            for n in range(2, N + 1)
        },
        "unit": [format_scalar(v) for v in operad.unit],
        "compositions": {
            f"{m},{n},{i + 1}": matrix_to_rows(table)
            for (m, n, i), table in sorted(operad.compositions.items())
            if not table.is_zero()
        },
    }


def load_operad(path: Path | str, max_arity: int | None = None, validate: bool = True) -> Operad:
    logger = get_logger("opmodel.loaders.operads")
    logger.info(f"Loading operad from {path}")
    operad = parse_operad(read_document(path), max_arity, validate)
    logger.info(f"  {operad.name}: dims {list(operad.module.dims)}")
    return operad
