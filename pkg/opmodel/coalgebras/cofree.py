"""The cofree conilpotent coalgebra ``P*(V)`` and its universal property.

``P*(V)`` is the Schur functor of the dual Σ-module. A class ``x`` is
decomposed by pairing its invariant form ``N(x)`` with total
compositions::

    ρ_p(x) = Σ ⟨N(x), γ(p; q_1, …, q_n)⟩ [q_1* ⊗ block_1] ⊗ … ⊗ [q_n* ⊗ block_n]

The lift of a linear map ``g : C -> V`` is
``Σ_n Σ_b [p_b* ⊗ g^{⊗n} ρ_b(c)]``, whose arity-one part is ``g``.
"""

from __future__ import annotations

from fractions import Fraction

from opmodel.coalgebras.structure import CoalgebraMorphism, PCoalgebra, table_from_columns
from opmodel.core.complexes import ChainComplex, ChainMap
from opmodel.core.errors import DegreeMismatch
from opmodel.core.linalg import SparseVector, add_into
from opmodel.core.logging import get_logger
from opmodel.core.tensors import Tensor, apply_factorwise, compositions, tensor_product
from opmodel.operads.operad import Cooperad, Operad, dualize, require_connected
from opmodel.operads.schur import SchurValue, schur_map


def _cooperation_column(operad: Operad, value: SchurValue, n: int, b: int, g: int) -> Tensor:
    out: Tensor = {}
    for (a, word), c in value.norm(g).items():
        r = len(word)
        if r < n:
            continue
        for arities in compositions(r, n):
            pairs = operad.transposed_total(n, b, arities).get(a)
            if not pairs:
                continue
            starts = [0]
            for rk in arities:
                starts.append(starts[-1] + rk)
            blocks = [word[starts[k]:starts[k + 1]] for k in range(n)]
            for qs, v in pairs:
                factors = [value.project(qs[k], blocks[k]) for k in range(n)]
                if any(not f for f in factors):
                    continue
                add_into(out, tensor_product(factors), c * v)
    return out


def cofree(operad: Operad, v: ChainComplex, name: str | None = None) -> tuple[PCoalgebra, ChainMap]:
    """``P*(V)`` with its projection onto the arity-one part."""
    require_connected(operad)
    log = get_logger("opmodel.coalgebras.cofree")
    N = min(operad.max_arity, v.max_degree)
    module = operad.module.dual().truncated(N)
    value = SchurValue(module, v, name or f"{operad.name}*({v.name})")

    def provider(n, b, d):
        columns = [
            _cooperation_column(operad, value, n, b, value.space.global_index(d, i))
            for i in range(value.dim(d))
        ]
        return table_from_columns(coalgebra.words, n, d, columns)

    coalgebra = PCoalgebra(operad, value.complex, provider, value.name, cofree_of=value)
    log.debug(f"cofree {value.name}: dims {value.dims}")
    return coalgebra, cofree_projection(coalgebra)


def cofree_value(c: PCoalgebra) -> SchurValue:
    if not isinstance(c.cofree_of, SchurValue):
        raise DegreeMismatch(f"{c.name} is not a cofree coalgebra")
    return c.cofree_of


def cofree_projection(c: PCoalgebra) -> ChainMap:
    value = cofree_value(c)
    columns = []
    for g in range(value.space.total_dim):
        summand, j = value.owner(g)
        if summand.arity != 1:
            columns.append({})
            continue
        m = summand.basis.column(j)
        columns.append({summand.word[0]: m.get(0, Fraction(0))} if m.get(0) else {})
    return ChainMap.from_global_columns(c.complex, value.argument, columns)


def zero_coalgebra(operad: Operad, max_degree: int) -> PCoalgebra:
    return PCoalgebra.trivial(operad, ChainComplex.zero(max_degree), "0")


def cofree_lift(c: PCoalgebra, g: ChainMap, target: PCoalgebra | None = None) -> CoalgebraMorphism:
    """The unique coalgebra morphism ``C -> P*(V)`` over ``g : C -> V``."""
    if target is None:
        target, _ = cofree(c.operad, g.target)
    value = cofree_value(target)
    if g.source.space.total_dim != c.space.total_dim:
        raise DegreeMismatch("lift: linear map source is not the coalgebra")
    columns: list[SparseVector] = []
    top = min(c.max_arity, value.module.max_arity)
    for x in range(c.space.total_dim):
        col: SparseVector = {}
        for y, v in g.global_column(x).items():
            add_into(col, value.project(0, (y,)), v)
        for n in range(2, top + 1):
            for b in range(c.operad.dim(n)):
                pushed = apply_factorwise(c.coop_global(n, b, x), g.global_column)
                for word, v in pushed.items():
                    add_into(col, value.project(b, word), v)
        columns.append(col)
    lift = ChainMap.from_global_columns(c.complex, target.complex, columns)
    return CoalgebraMorphism(c, target, lift, provenance="cofree_lift")


def cofree_map(h: ChainMap, source: PCoalgebra, target: PCoalgebra) -> CoalgebraMorphism:
    """``P*(h) : P*(V) -> P*(W)``."""
    m = schur_map(cofree_value(source), cofree_value(target), h)
    return CoalgebraMorphism(source, target, ChainMap(source.complex, target.complex, m.components))


def comonad_coproduct(p: Operad | Cooperad, v: ChainComplex) -> CoalgebraMorphism:
    """``Δ : P*(V) -> P*(P*(V))``, the lift of the identity."""
    operad = dualize(p) if isinstance(p, Cooperad) else p
    inner, _ = cofree(operad, v)
    outer, _ = cofree(operad, inner.complex)
    return cofree_lift(inner, ChainMap.identity(inner.complex), outer)
