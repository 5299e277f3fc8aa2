"""Pushouts of P-algebras and cell attachments.

Both are built as quotients of the free algebra on a direct sum of
generators by the dg ideal of relations: the structure relations of every
non-free summand, and the gluing relations ``ι_B f(a) - ι_C g(a)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from opmodel.bialgebras.algebras import (
    AlgebraMorphism,
    PAlgebra,
    free_algebra,
    free_extension,
    free_unit,
    ideal_closure,
    quotient_algebra,
    words_upto,
)
from opmodel.core.checks import CheckReport
from opmodel.core.complexes import ChainComplex, ChainMap, copair, direct_sum, is_weak_equivalence, sum_inclusion
from opmodel.core.errors import DegreeMismatch, IllFormed
from opmodel.core.linalg import SparseVector, add_into
from opmodel.core.logging import get_logger
from opmodel.core.tensors import apply_factorwise

logger = get_logger("opmodel.bialgebras.pushouts")


@dataclass(frozen=True)
class CellTag:
    """A cobase change of ``P(j)`` for the chain map ``j``."""

    generators: ChainMap


@dataclass(frozen=True)
class AlgebraPushout:
    algebra: PAlgebra
    from_left: AlgebraMorphism
    from_right: AlgebraMorphism
    # quotient map from the free algebra on both generator complexes
    quotient: AlgebraMorphism
    sections: dict
    free: PAlgebra
    summands: tuple[ChainComplex, ChainComplex]
    # generators of the left summand inside ``from_left.source``; None means identity
    left_generators: ChainMap | None = None

    def induced(self, u: AlgebraMorphism, v: AlgebraMorphism) -> AlgebraMorphism:
        """The algebra map out of the pushout restricting to ``u`` and ``v``."""
        left = u.map if self.left_generators is None else u.map.compose(self.left_generators)
        ext = free_extension(self.free, u.target, copair([left, v.map], self.free.free_on.argument))
        comps = {d: ext.component(d) @ self.sections[d] for d in self.algebra.space.degrees}
        out = ChainMap(self.algebra.complex, u.target.complex, comps)
        if out.compose(self.quotient.map) != ext.map:
            raise IllFormed("maps do not agree on the glued part")
        return AlgebraMorphism(self.algebra, u.target, out)


def _structure_relations(a: PAlgebra, into: ChainMap, free: PAlgebra) -> list[SparseVector]:
    """``γ^F_b(η ι w) - η ι γ^A_b(w)`` for every operation and basis word of ``a``."""
    out = []
    for n in a.arities():
        for b in range(a.operad.dim(n)):
            for word in words_upto(a, n):
                rel = free.op_tensor(n, {b: Fraction(1)}, apply_factorwise({word: Fraction(1)}, into.global_column))
                add_into(rel, into.apply_global(a.op_word(n, b, word)), Fraction(-1))
                if rel:
                    out.append(rel)
    return out


def _glue(
    free: PAlgebra,
    relations: Sequence[SparseVector],
    name: str,
) -> tuple[AlgebraMorphism, dict]:
    gens: dict[int, list[SparseVector]] = {}
    for rel in relations:
        d, local = free.space.to_local(rel)
        if d is not None:
            gens.setdefault(d, []).append(local)
    ideal = ideal_closure(free, gens)
    logger.debug(f"{name}: ideal dims {[ideal[d].cols for d in sorted(ideal)]}")
    return quotient_algebra(free, ideal, name)


def _gluing(f: ChainMap, g: ChainMap, into_b: ChainMap, into_c: ChainMap) -> list[SparseVector]:
    out = []
    for x in range(f.source.space.total_dim):
        rel = into_b.apply_global(f.global_column(x))
        add_into(rel, into_c.apply_global(g.global_column(x)), Fraction(-1))
        if rel:
            out.append(rel)
    return out


def algebra_pushout(f: AlgebraMorphism, g: AlgebraMorphism, name: str | None = None) -> AlgebraPushout:
    """``B ⊔_A C`` for algebra maps ``f : A -> B`` and ``g : A -> C``."""
    if f.source is not g.source and f.source.space.dims != g.source.space.dims:
        raise DegreeMismatch("pushout legs have different sources")
    b, c = f.target, g.target
    name = name or f"{b.name}+_{f.source.name}{c.name}"
    summands = (b.complex, c.complex)
    total = direct_sum(*summands)
    free = free_algebra(b.operad, total)
    eta = free_unit(free)
    into_b = eta.compose(sum_inclusion(summands, total, 0))
    into_c = eta.compose(sum_inclusion(summands, total, 1))
    relations = (
        _structure_relations(b, into_b, free)
        + _structure_relations(c, into_c, free)
        + _gluing(f.map, g.map, into_b, into_c)
    )
    q, sections = _glue(free, relations, name)
    from_left = AlgebraMorphism(b, q.target, q.map.compose(into_b))
    from_right = AlgebraMorphism(c, q.target, q.map.compose(into_c))
    logger.info(f"pushout {name}: dims {q.target.complex.dims}")
    return AlgebraPushout(q.target, from_left, from_right, q, sections, free, summands)


def cell_attachment(g: PAlgebra, j: ChainMap, attach: ChainMap, name: str | None = None) -> AlgebraPushout:
    """The pushout of ``P(j) : P(A) -> P(B)`` along the extension of ``attach : A -> G``.

    ``from_left`` starts at the free algebra ``P(B)``; ``from_right`` is the
    comparison map ``G -> G'``.
    """
    if attach.target.space.dims != g.complex.dims:
        raise DegreeMismatch("attaching map does not land in the algebra")
    name = name or f"{g.name}+{j.target.name}"
    summands = (j.target, g.complex)
    total = direct_sum(*summands)
    free = free_algebra(g.operad, total)
    eta = free_unit(free)
    into_b = eta.compose(sum_inclusion(summands, total, 0))
    into_g = eta.compose(sum_inclusion(summands, total, 1))
    relations = _structure_relations(g, into_g, free) + _gluing(j, attach, into_b, into_g)
    q, sections = _glue(free, relations, name)
    cell = free_algebra(g.operad, j.target)
    from_left = free_extension(cell, q.target, q.map.compose(into_b))
    from_right = AlgebraMorphism(g, q.target, q.map.compose(into_g), CellTag(j))
    logger.info(f"cell attachment {name}: dims {g.complex.dims} -> {q.target.complex.dims}")
    return AlgebraPushout(q.target, from_left, from_right, q, sections, free, summands, free_unit(cell))


def check_cell_attachment(g: PAlgebra, j: ChainMap, attach: ChainMap) -> CheckReport:
    """For ``j`` injective the comparison map ``G -> G'`` is injective, and a
    weak equivalence when ``j`` is one."""
    report = CheckReport(f"cell attachment on {g.name}")
    if not j.is_injective():
        report.add("hypothesis", reason="generating map is not injective")
        return report
    result = cell_attachment(g, j, attach)
    comparison = result.from_right.map
    report.tick()
    if not comparison.is_injective():
        bad = next(d for d in comparison.source.space.degrees if not comparison.component(d).is_injective())
        report.add("injective", degree=bad)
    if is_weak_equivalence(j):
        report.tick()
        if not is_weak_equivalence(comparison):
            report.add("weak-equivalence", source=g.name, target=result.algebra.name)
    return report

