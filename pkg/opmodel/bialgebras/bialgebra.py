"""(P,Q)-bialgebras: a P-algebra and a Q-coalgebra on one complex, tied by
a mixed distributive law.

``lift_free_to_bialgebra`` puts the unique compatible Q-coalgebra structure
on the free P-algebra generated by a Q-coalgebra ``C``. Cooperations are
found arity by arity: on generators they are those of ``C``; an element of
arity ``r`` is a combination of products of elements of lower arity, whose
cooperations the law prescribes. Arities of ``Q`` without rules are filled
in from operadic coassociativity.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from opmodel.bialgebras.algebras import (
    AlgebraMorphism,
    PAlgebra,
    check_algebra,
    check_algebra_morphism,
    free_algebra,
    free_extension,
    free_map,
    free_unit,
    free_value,
    monad_multiplication,
    words_upto,
)
from opmodel.bialgebras.laws import MixedDistributiveLaw, expand_rule, rule_label, validate_law
from opmodel.coalgebras.cofree import cofree, cofree_lift, cofree_map, cofree_projection
from opmodel.coalgebras.structure import (
    CoalgebraMorphism,
    PCoalgebra,
    check_coalgebra,
    check_morphism,
    table_from_columns,
)
from opmodel.core.checks import CheckReport
from opmodel.core.complexes import ChainComplex, ChainMap, direct_sum, solve_degree, sphere
from opmodel.core.errors import DegreeMismatch, Inconsistent, LawInconsistent
from opmodel.core.linalg import LinearMap
from opmodel.core.logging import get_logger
from opmodel.core.tensors import Tensor, TensorBasis, apply_at, apply_factorwise

logger = get_logger("opmodel.bialgebras")


@dataclass(frozen=True, eq=False)
class PQBialgebra:
    algebra: PAlgebra
    coalgebra: PCoalgebra
    law: MixedDistributiveLaw

    def __post_init__(self):
        if self.algebra.complex.dims != self.coalgebra.complex.dims:
            raise DegreeMismatch("algebra and coalgebra live on different complexes")

    @property
    def name(self) -> str:
        return self.algebra.name

    @property
    def complex(self) -> ChainComplex:
        return self.algebra.complex

    @property
    def max_degree(self) -> int:
        return self.algebra.max_degree


@dataclass(frozen=True, eq=False)
class BialgebraMorphism:
    source: PQBialgebra
    target: PQBialgebra
    map: ChainMap
    provenance: object = None

    def component(self, d: int) -> LinearMap:
        return self.map.component(d)

    def compose(self, other: "BialgebraMorphism") -> "BialgebraMorphism":
        return BialgebraMorphism(other.source, self.target, self.map.compose(other.map))

    __matmul__ = compose

    def __eq__(self, other) -> bool:
        if not isinstance(other, BialgebraMorphism):
            return NotImplemented
        return self.map == other.map

    __hash__ = None

    @property
    def on_algebras(self) -> AlgebraMorphism:
        return AlgebraMorphism(self.source.algebra, self.target.algebra, self.map, self.provenance)

    @property
    def on_coalgebras(self) -> CoalgebraMorphism:
        return CoalgebraMorphism(self.source.coalgebra, self.target.coalgebra, self.map)

    @classmethod
    def identity(cls, b: PQBialgebra) -> "BialgebraMorphism":
        return cls(b, b, ChainMap.identity(b.complex))


def check_bialgebra(b: PQBialgebra) -> CheckReport:
    """Both structures, and every rule of the law on every basis word."""
    report = CheckReport(f"bialgebra {b.name}")
    report.extend(check_algebra(b.algebra))
    report.extend(check_coalgebra(b.coalgebra))
    A, C = b.algebra, b.coalgebra
    degree_of = A.space.degree_of
    for key, ladders in sorted(b.law.rules.items()):
        n, p, m, q = key
        if n > A.max_arity or m > C.max_arity:
            continue
        for word in words_upto(A, n):
            report.tick()
            lhs = C.coop_vector(m, {q: Fraction(1)}, A.op_word(n, p, word))
            rhs = expand_rule(ladders, word, C.coop_global, A.op_word, degree_of)
            if lhs != rhs:
                report.add("compatibility", rule=rule_label(key), inputs=[A.space.label(g) for g in word])
    return report


def check_bialgebra_morphism(f: BialgebraMorphism) -> CheckReport:
    report = CheckReport(f"bialgebra morphism {f.source.name} -> {f.target.name}")
    report.extend(check_algebra_morphism(f.on_algebras))
    report.extend(check_morphism(f.on_coalgebras))
    return report


# --- lifting the free algebra ---


def _solve_right(rows: int, columns: LinearMap, values: LinearMap, what: str) -> LinearMap:
    """``R`` with ``R · columns = values``; the columns must span."""
    if columns.rank() < columns.rows:
        raise LawInconsistent(f"{what}: lower arities do not generate")
    try:
        return solve_degree(rows, columns.rows, [], [(columns, values)]).particular
    except Inconsistent:
        raise LawInconsistent(f"{what}: conflicting values") from None


def lift_free_to_bialgebra(
    c: PCoalgebra, law: MixedDistributiveLaw, algebra: PAlgebra | None = None, name: str | None = None
) -> PQBialgebra:
    """The (P,Q)-bialgebra structure on ``P(C)`` for a Q-coalgebra ``C``.

    Raises ``LawInconsistent`` when the law prescribes conflicting values.
    """
    if c.operad is not law.Q and c.operad.name != law.Q.name:
        raise DegreeMismatch(f"{c.name} is a {c.operad.name}-coalgebra, the law expects {law.Q.name}")
    report = validate_law(law)
    if not report:
        raise LawInconsistent(f"law {law.name}: {report.first().rule} in {report.first().witness}")
    F = algebra or free_algebra(law.P, c.complex, name)
    value = free_value(F)
    space = F.space
    words = TensorBasis(space)
    Q = law.Q
    top = min(Q.max_arity, F.max_degree)
    ruled = [m for m in law.coop_arities() if m <= top]
    known: dict[tuple[int, int], dict[int, Tensor]] = {(m, q): {} for m in ruled for q in range(Q.dim(m))}

    def coop(r: int, k: int, g: int) -> Tensor:
        try:
            return known[(r, k)][g]
        except KeyError:
            raise LawInconsistent(f"law {law.name} uses a cooperation of arity {r} it does not determine") from None

    eta = free_unit(F)
    by_arity: dict[int, list[int]] = {}
    for g in range(space.total_dim):
        by_arity.setdefault(value.arity_of(g), []).append(g)

    for g in by_arity.get(1, []):
        m_vec, t0 = value.representative(g)
        scale = m_vec.get(0, Fraction(0))
        for m in ruled:
            for q in range(Q.dim(m)):
                pushed = apply_factorwise(c.coop_global(m, q, t0[0]), eta.global_column)
                known[(m, q)][g] = {w: scale * v for w, v in pushed.items()}

    arity_of = value.arity_of
    for r in sorted(a for a in by_arity if a > 1):
        for d in space.degrees:
            targets = [g for g in by_arity[r] if space.degree_of(g) == d]
            if not targets:
                continue
            row_of = {g: k for k, g in enumerate(targets)}
            for m in ruled:
                out_words = words.words(m, d)
                for q in range(Q.dim(m)):
                    products, values = [], []
                    for n, p in law.products_for(m, q):
                        ladders = law.rules[(n, p, m, q)]
                        for word in words.words(n, d):
                            arities = [arity_of(x) for x in word]
                            if max(arities) >= r or sum(arities) != r:
                                continue
                            prod = F.op_word(n, p, word)
                            products.append({row_of[g]: v for g, v in prod.items()})
                            values.append(expand_rule(ladders, word, coop, F.op_word, space.degree_of))
                    if not out_words:
                        for g in targets:
                            known[(m, q)][g] = {}
                        continue
                    G = LinearMap.from_columns(products, len(targets))
                    V = table_from_columns(words, m, d, values)
                    R = _solve_right(len(out_words), G, V, f"arity {r}, degree {d}, cooperation {m}:{q}")
                    for k, g in enumerate(targets):
                        known[(m, q)][g] = {out_words[i]: v for i, v in R.column(k).items()}

    for m in range(2, top + 1):
        if m in ruled or Q.dim(m) == 0:
            continue
        for q in range(Q.dim(m)):
            known[(m, q)] = {}
        pieces = [
            (a, b, m - a + 1, e, i)
            for a in range(2, m)
            for b in range(Q.dim(a))
            for e in range(Q.dim(m - a + 1))
            for i in range(a)
            if (a, b) in known and (m - a + 1, e) in known
        ]
        composites = LinearMap.from_columns([Q.compose_basis(a, b, k, e, i) for a, b, k, e, i in pieces], Q.dim(m))
        for g in range(space.total_dim):
            d = space.degree_of(g)
            out_words = words.words(m, d)
            if not out_words:
                continue
            values = [
                apply_at(known[(a, b)][g], i, lambda x, k=k, e=e: known[(k, e)][x])
                for a, b, k, e, i in pieces
            ]
            X = _solve_right(
                len(out_words), composites, table_from_columns(words, m, d, values), f"coassociativity, arity {m}"
            )
            for q in range(Q.dim(m)):
                known[(m, q)][g] = {out_words[i]: v for i, v in X.column(q).items()}

    tables = {}
    for (m, q), per in known.items():
        for d in space.degrees:
            cols = [per.get(space.global_index(d, i), {}) for i in range(space.dim(d))]
            tables.setdefault((m, q), {})[d] = table_from_columns(words, m, d, cols)
    coalgebra = PCoalgebra.from_tables(Q, F.complex, tables, F.name)
    logger.debug(f"lifted {law.name} structure on {F.name}: dims {F.complex.dims}")
    return PQBialgebra(F, coalgebra, law)


def free_bialgebra_map(j: CoalgebraMorphism, source: PQBialgebra, target: PQBialgebra) -> BialgebraMorphism:
    """``P(j)`` between lifted free bialgebras."""
    m = free_map(j.map, source.algebra, target.algebra)
    return BialgebraMorphism(source, target, m.map, m.provenance)


def bialgebra_extension(source: PQBialgebra, target: PQBialgebra, a: CoalgebraMorphism) -> BialgebraMorphism:
    """The bialgebra map ``P(C) -> X`` adjoint to a coalgebra map ``C -> X``."""
    ext = free_extension(source.algebra, target.algebra, a.map)
    return BialgebraMorphism(source, target, ext.map, "extension")


# --- checking a law ---


def default_law_probes(max_degree: int = 3) -> list[ChainComplex]:
    return [
        sphere(1, max_degree),
        direct_sum(sphere(1, 2), sphere(1, 2, label="t")),
        sphere(2, max_degree),
    ]


def _first_difference(f: ChainMap, g: ChainMap) -> int | None:
    for d in f.source.space.degrees:
        if f.component(d) != g.component(d):
            return d
    return None


def _lift_or_report(c: PCoalgebra, law: MixedDistributiveLaw, report: CheckReport, probe: str) -> PQBialgebra | None:
    try:
        b = lift_free_to_bialgebra(c, law)
    except LawInconsistent as exc:
        report.add("axiom-i", probe=probe, reason=str(exc))
        return None
    structure = check_coalgebra(b.coalgebra)
    if not structure:
        first = structure.first()
        report.add("axiom-i", probe=probe, reason=f"lifted cooperations fail {first.rule}", witness=first.witness)
        return None
    return b


def check_mixed_law(law: MixedDistributiveLaw, probes: Sequence[ChainComplex] | None = None) -> CheckReport:
    """The compatibility squares of ``Λ : P Q* -> Q* P`` on probe complexes.

    ``Λ_V`` is the coalgebra map out of the lifted bialgebra ``P(Q*V)`` over
    ``P(π_V)``. The squares checked are, in order: compatibility with the
    monad multiplication of ``P`` (i), with the comonad coproduct of ``Q*``
    (ii), with the unit of ``P`` (iii) and with the counit of ``Q*`` (iv).
    Any conflict met while lifting is reported under (i).
    """
    report = validate_law(law)
    if not report:
        return report
    P, Q = law.P, law.Q
    for v in probes if probes is not None else default_law_probes():
        probe = f"{v.name}@{v.max_degree}"
        qv, _ = cofree(Q, v)
        b1 = _lift_or_report(qv, law, report, probe)
        if b1 is None:
            continue
        pv = free_algebra(P, v)
        pi_v = cofree_projection(qv)
        p_pi = free_map(pi_v, b1.algebra, pv)
        qpv, _ = cofree(Q, pv.complex)
        lam_v = cofree_lift(b1.coalgebra, p_pi.map, qpv)

        report.tick()
        bad = _first_difference(cofree_projection(qpv).compose(lam_v.map), p_pi.map)
        if bad is not None:
            report.add("axiom-iv", probe=probe, degree=bad)

        report.tick()
        lhs = lam_v.map.compose(free_unit(b1.algebra))
        rhs = cofree_map(free_unit(pv), qv, qpv).map
        bad = _first_difference(lhs, rhs)
        if bad is not None:
            report.add("axiom-iii", probe=probe, degree=bad)

        qqv, _ = cofree(Q, qv.complex)
        b2 = _lift_or_report(qqv, law, report, probe)
        if b2 is None:
            continue
        delta_v = cofree_lift(qv, ChainMap.identity(qv.complex), qqv)
        qqpv, _ = cofree(Q, qpv.complex)
        delta_pv = cofree_lift(qpv, ChainMap.identity(qpv.complex), qqpv)
        qpqv, _ = cofree(Q, b1.algebra.complex)
        lam_qv = cofree_lift(b2.coalgebra, free_map(cofree_projection(qqv), b2.algebra, b1.algebra).map, qpqv)
        p_delta = free_map(delta_v.map, b1.algebra, b2.algebra)
        report.tick()
        lhs = delta_pv.map.compose(lam_v.map)
        rhs = cofree_map(lam_v.map, qpqv, qqpv).map.compose(lam_qv.map).compose(p_delta.map)
        bad = _first_difference(lhs, rhs)
        if bad is not None:
            report.add("axiom-ii", probe=probe, degree=bad)

        b3 = _lift_or_report(qpv, law, report, probe)
        if b3 is None:
            continue
        mu = monad_multiplication(P, qv.complex, inner=b1.algebra)
        gamma_v = monad_multiplication(P, v, inner=pv)
        qppv, _ = cofree(Q, gamma_v.source.complex)
        lam_pv = cofree_lift(b3.coalgebra, free_map(cofree_projection(qpv), b3.algebra, gamma_v.source).map, qppv)
        p_lam = free_map(lam_v.map, mu.source, b3.algebra)
        report.tick()
        lhs = lam_v.map.compose(mu.map)
        rhs = cofree_map(gamma_v.map, qppv, qpv).map.compose(lam_pv.map).compose(p_lam.map)
        bad = _first_difference(lhs, rhs)
        if bad is not None:
            report.add("axiom-i", probe=probe, degree=bad)
        logger.debug(f"law {law.name}: probe {probe} checked")
    return report
