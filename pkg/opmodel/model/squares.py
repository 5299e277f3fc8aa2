"""Commuting squares against a morphism, and lifting certificates."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from opmodel.coalgebras.structure import CoalgebraMorphism, PCoalgebra
from opmodel.core.complexes import ChainMap
from opmodel.core.errors import NoLiftFound
from opmodel.core.linalg import LinearMap, LinearSystem
from opmodel.core.logging import get_logger
from opmodel.model.lifting import LiftingProblem, solve_degreewise, solve_lifting

logger = get_logger("opmodel.model.squares")


@dataclass(frozen=True)
class Square:
    """``a : A -> X`` and ``b : B -> Y`` with ``f∘a = b∘j``."""

    member: int
    a: CoalgebraMorphism
    b: CoalgebraMorphism


def morphism_candidates(
    source: PCoalgebra, target: PCoalgebra, count: int, rng: np.random.Generator
) -> list[CoalgebraMorphism]:
    """Up to ``count`` distinct coalgebra morphisms, the zero morphism first.

    Each further candidate is built degree by degree with a random point of
    the solution space in every degree.
    """
    out = [CoalgebraMorphism.zero(source, target)]
    for _ in range(4 * count):
        if len(out) >= count:
            break
        try:
            m = solve_degreewise(source, target, choose=lambda sol: sol.sample(rng))
        except NoLiftFound:
            continue
        f = CoalgebraMorphism(source, target, m)
        if all(f != g for g in out):
            out.append(f)
    return out


def _primitive_square_basis(j: CoalgebraMorphism, f: CoalgebraMorphism) -> list[tuple[ChainMap, ChainMap]]:
    """Basis of the squares ``(a, b)`` when ``A`` and ``B`` have zero cooperations.

    Then ``a`` and ``b`` are chain maps into the primitives, and the
    squares form a vector space.
    """
    A, B, X, Y = j.source, j.target, f.source, f.target
    s = LinearSystem()
    for d in A.space.degrees:
        s.add_unknown(("a", d), X.complex.dim(d), A.complex.dim(d))
        s.add_unknown(("b", d), Y.complex.dim(d), B.complex.dim(d))
    for key, src, tgt in (("a", A, X), ("b", B, Y)):
        for d in A.space.degrees:
            if d >= 2:
                s.add_block(
                    [((key, d), tgt.complex.d(d), None, 1), ((key, d - 1), None, src.complex.d(d), -1)],
                    rhs=LinearMap.zero(tgt.complex.dim(d - 1), src.complex.dim(d)),
                )
            for n in tgt.arities():
                for q in range(tgt.operad.dim(n)):
                    table = tgt.cooperation(n, q, d)
                    if table.rows:
                        s.add_block([((key, d), table, None, 1)], rhs=LinearMap.zero(table.rows, src.complex.dim(d)))
    for d in A.space.degrees:
        s.add_block(
            [(("a", d), f.component(d), None, 1), (("b", d), None, j.component(d), -1)],
            rhs=LinearMap.zero(Y.complex.dim(d), A.complex.dim(d)),
        )
    _, basis = s.solve_with_kernel()
    return [
        (
            ChainMap(A.complex, X.complex, {d: sol[("a", d)] for d in A.space.degrees}),
            ChainMap(B.complex, Y.complex, {d: sol[("b", d)] for d in A.space.degrees}),
        )
        for sol in basis
    ]


def enumerate_squares(
    member: int, j: CoalgebraMorphism, f: CoalgebraMorphism, limit: int, rng: np.random.Generator
) -> list[Square]:
    if j.source.is_primitive() and j.target.is_primitive():
        pairs = _primitive_square_basis(j, f)[:limit]
        return [
            Square(member, CoalgebraMorphism(j.source, f.source, a), CoalgebraMorphism(j.target, f.target, b))
            for a, b in pairs
        ]
    squares = []
    for b in morphism_candidates(j.target, f.target, limit, rng):
        bj = b.compose(j)
        try:
            a = solve_degreewise(
                j.source, f.source, left_extra=lambda d: [(f.component(d), bj.component(d))]
            )
        except NoLiftFound:
            continue
        squares.append(Square(member, CoalgebraMorphism(j.source, f.source, a), b))
    return squares


def unlifted_squares(
    member: int, j: CoalgebraMorphism, f: CoalgebraMorphism, limit: int, rng: np.random.Generator
) -> list[Square]:
    out = []
    for sq in enumerate_squares(member, j, f, limit, rng):
        try:
            solve_lifting(LiftingProblem(j, f, sq.a, sq.b))
        except NoLiftFound:
            out.append(sq)
    return out


@dataclass
class RlpCertificate:
    """Outcome of testing one morphism against a finite family of squares."""

    tested: int = 0
    lifted: int = 0
    failures: list[tuple[int, int]] = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {
            "tested": self.tested,
            "lifted": self.lifted,
            "holds": self.holds,
            "failures": [{"member": m, "degree": d} for m, d in self.failures],
        }


def certify_rlp(
    f: CoalgebraMorphism, members: Sequence[CoalgebraMorphism], probes: int, rng: np.random.Generator
) -> RlpCertificate:
    """Try to lift ``probes`` squares per family member against ``f``."""
    cert = RlpCertificate()
    for k, j in enumerate(members):
        for sq in enumerate_squares(k, j, f, probes, rng):
            cert.tested += 1
            try:
                solve_lifting(LiftingProblem(j, f, sq.a, sq.b))
            except NoLiftFound as exc:
                cert.failures.append((k, exc.degree))
                continue
            cert.lifted += 1
    logger.debug(f"rlp: {cert.lifted}/{cert.tested} squares lifted")
    return cert
