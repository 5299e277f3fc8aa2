"""Lifting problems in P-coalgebras.

Given a commuting square::

    A --a--> X
    |i       |p
    v        v
    B --b--> Y

``solve_lifting`` looks for a coalgebra morphism ``h : B -> X`` with
``h∘i = a`` and ``p∘h = b``. Strategies, tried in order:

``inverse``
    ``i`` is an isomorphism.
``adjunction``
    ``p`` is the first projection of a product ``R × P*(V)``. A lift is a pair
    ``(b, k)``; ``k`` corresponds to a chain map ``B -> V``, found by
    ``chain_lift`` (complete).
``linear``
    ``B`` has zero cooperations, so ``h`` must land in the primitives of
    ``X``; every constraint is linear and all degrees are solved at once
    (complete).
``greedy``
    Degree by degree. With the lower components fixed, the cooperation
    constraints are affine in ``h_d``; the canonical solution is kept.
    A failure raises ``NoLiftFound``, which does not prove that no lift
    exists.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from opmodel.coalgebras.cofree import cofree_lift, cofree_projection
from opmodel.coalgebras.limits import ProjectionTag
from opmodel.coalgebras.structure import (
    CoalgebraMorphism,
    PCoalgebra,
    check_morphism,
    table_from_columns,
)
from opmodel.core.checks import CheckReport
from opmodel.core.complexes import ChainComplex, ChainMap, DegreeSolution, chain_lift, solve_degree
from opmodel.core.errors import Inconsistent, NoLift, NoLiftFound
from opmodel.core.linalg import LinearMap, LinearSystem, left_inverse
from opmodel.core.logging import get_logger
from opmodel.core.tensors import apply_factorwise

logger = get_logger("opmodel.model.lifting")

Constraints = list[tuple[LinearMap, LinearMap]]


@dataclass(frozen=True)
class LiftingProblem:
    i: CoalgebraMorphism
    p: CoalgebraMorphism
    a: CoalgebraMorphism
    b: CoalgebraMorphism

    def commutes(self) -> bool:
        return self.p.compose(self.a) == self.b.compose(self.i)

    def verify(self, h: CoalgebraMorphism) -> CheckReport:
        report = CheckReport("lift")
        report.tick(2)
        if h.compose(self.i) != self.a:
            report.add("upper-triangle", degree=_first_difference(h.compose(self.i), self.a))
        if self.p.compose(h) != self.b:
            report.add("lower-triangle", degree=_first_difference(self.p.compose(h), self.b))
        report.extend(check_morphism(h))
        return report


def _first_difference(f: CoalgebraMorphism, g: CoalgebraMorphism) -> int | None:
    for d in f.source.space.degrees:
        if f.component(d) != g.component(d):
            return d
    return None


@dataclass(frozen=True)
class LiftingCertificate:
    problem: LiftingProblem
    lift: CoalgebraMorphism
    strategy: str
    report: CheckReport

    def to_dict(self) -> dict:
        return {
            "strategy": self.strategy,
            "verified": self.report.ok,
            "lift": {
                str(d): [[str(v) for v in row] for row in self.lift.component(d).dense()]
                for d in self.lift.source.space.degrees
            },
        }


# --- degreewise solving ---


def _pushed_cooperation(
    source: PCoalgebra, target: PCoalgebra, comps: dict[int, LinearMap], n: int, b: int, d: int
) -> LinearMap:
    """``h^{⊗n} ∘ ρ_b`` on ``source_d`` from the components below ``d``."""

    def column(g: int):
        dd, k = source.space.local(g)
        return target.space.to_global(dd, comps[dd].column(k))

    tensors = [
        apply_factorwise(source.coop_global(n, b, source.space.global_index(d, k)), column)
        for k in range(source.complex.dim(d))
    ]
    return table_from_columns(target.words, n, d, tensors)


def degree_constraints(
    source: PCoalgebra, target: PCoalgebra, comps: dict[int, LinearMap], d: int
) -> Constraints:
    """Left constraints ``L h_d = R`` making ``h`` a morphism up to degree ``d``."""
    left: Constraints = []
    if d >= 2:
        left.append((target.complex.d(d), comps[d - 1] @ source.complex.d(d)))
    for n in target.arities():
        if n > d:
            break
        for b in range(target.operad.dim(n)):
            table = target.cooperation(n, b, d)
            if table.rows:
                left.append((table, _pushed_cooperation(source, target, comps, n, b, d)))
    return left


def solve_degreewise(
    source: PCoalgebra,
    target: PCoalgebra,
    left_extra: Callable[[int], Constraints] = lambda d: [],
    right_extra: Callable[[int], Constraints] = lambda d: [],
    choose: Callable[[DegreeSolution], LinearMap] | None = None,
) -> ChainMap:
    """A coalgebra morphism built one degree at a time.

    ``choose`` picks a solution in each degree; the default keeps the
    canonical one (free variables zero).
    """
    comps: dict[int, LinearMap] = {}
    for d in source.space.degrees:
        rows, cols = target.complex.dim(d), source.complex.dim(d)
        left = degree_constraints(source, target, comps, d) + left_extra(d)
        right = right_extra(d)
        if rows == 0 or cols == 0:
            if any(not r.is_zero() for _, r in left) or any(not k.is_zero() for _, k in right):
                raise NoLiftFound(d, "constraints are nonzero on a zero space")
            comps[d] = LinearMap.zero(rows, cols)
            continue
        try:
            solution = solve_degree(rows, cols, left, right)
        except Inconsistent as exc:
            raise NoLiftFound(d, str(exc)) from None
        comps[d] = choose(solution) if choose else solution.particular
    return ChainMap(source.complex, target.complex, comps)


# --- strategies ---


def _inverse(problem: LiftingProblem) -> CoalgebraMorphism | None:
    i = problem.i
    if not i.map.is_iso():
        return None
    inv = ChainMap(
        i.target.complex,
        i.source.complex,
        {d: left_inverse(i.component(d)) for d in i.target.space.degrees},
    )
    return CoalgebraMorphism(i.target, problem.a.target, problem.a.map.compose(inv))


def _adjunction(problem: LiftingProblem) -> CoalgebraMorphism | None:
    tag = problem.p.provenance
    if not isinstance(tag, ProjectionTag) or tag.index != 0:
        return None
    second = tag.product.factors[1]
    if second.cofree_of is None:
        return None
    _, second_proj = tag.product.projections
    pi_v = cofree_projection(second)
    v: ChainComplex = pi_v.target
    a_v = pi_v.compose(second_proj.map).compose(problem.a.map)
    to_zero = ChainMap.zero(v, ChainComplex.zero(v.max_degree))
    try:
        g = chain_lift(problem.i.map, to_zero, a_v, ChainMap.zero(problem.i.target.complex, to_zero.target))
    except NoLift as exc:
        logger.debug(f"adjunction reduction failed: {exc}")
        return None
    k = cofree_lift(problem.i.target, g, second)
    return tag.product.pair(problem.b, k)


def _linear(problem: LiftingProblem) -> CoalgebraMorphism:
    i, p, a, b = problem.i, problem.p, problem.a, problem.b
    B, X = i.target, p.source
    D = B.max_degree

    def system(upto: int) -> LinearSystem:
        s = LinearSystem()
        for d in range(1, upto + 1):
            s.add_unknown(d, X.complex.dim(d), B.complex.dim(d))
        for d in range(1, upto + 1):
            if d >= 2:
                s.add_block(
                    [(d, X.complex.d(d), None, 1), (d - 1, None, B.complex.d(d), -1)],
                    rhs=LinearMap.zero(X.complex.dim(d - 1), B.complex.dim(d)),
                )
            s.add_block([(d, None, i.component(d), 1)], rhs=a.component(d))
            s.add_block([(d, p.component(d), None, 1)], rhs=b.component(d))
            for n in X.arities():
                for q in range(X.operad.dim(n)):
                    table = X.cooperation(n, q, d)
                    if table.rows:
                        s.add_block(
                            [(d, table, None, 1)],
                            rhs=LinearMap.zero(table.rows, B.complex.dim(d)),
                        )
        return s

    try:
        solution = system(D).solve()
    except Inconsistent:
        for d in range(1, D + 1):
            if not system(d).is_consistent():
                raise NoLiftFound(d, "linear system is inconsistent") from None
        raise NoLiftFound(D, "linear system is inconsistent") from None
    h = ChainMap(B.complex, X.complex, {d: solution[d] for d in range(1, D + 1)})
    return CoalgebraMorphism(B, X, h)


def _greedy(problem: LiftingProblem) -> CoalgebraMorphism:
    i, p, a, b = problem.i, problem.p, problem.a, problem.b
    h = solve_degreewise(
        i.target,
        p.source,
        left_extra=lambda d: [(p.component(d), b.component(d))] if p.target.complex.dim(d) else [],
        right_extra=lambda d: [(i.component(d), a.component(d))] if i.source.complex.dim(d) else [],
    )
    return CoalgebraMorphism(i.target, p.source, h)


def solve_lifting(problem: LiftingProblem, strategies: Sequence[str] | None = None) -> LiftingCertificate:
    """Find and verify a lift; ``NoLiftFound`` if every strategy fails."""
    if not problem.commutes():
        raise NoLiftFound(
            _first_difference(problem.p.compose(problem.a), problem.b.compose(problem.i)) or 1,
            "square does not commute",
        )
    order = strategies or ("inverse", "adjunction", "linear", "greedy")
    failure: NoLiftFound | None = None
    for name in order:
        if name == "inverse":
            h = _inverse(problem)
        elif name == "adjunction":
            h = _adjunction(problem)
        elif name == "linear":
            if not problem.i.target.is_primitive():
                continue
            # complete for this shape, so a failure is final
            h = _linear(problem)
        else:
            try:
                h = _greedy(problem)
            except NoLiftFound as exc:
                failure = exc
                continue
        if h is None:
            continue
        report = problem.verify(h)
        if report:
            logger.debug(f"lift found by {name}")
            return LiftingCertificate(problem, CoalgebraMorphism(h.source, h.target, h.map, name), name, report)
        logger.warning(f"{name} produced a map that fails verification: {report.first().rule}")
    raise failure or NoLiftFound(1, "no strategy applies")
