"""Classification of algebra morphisms in the transferred model structure.

Weak equivalences and fibrations are created by the forgetful functor to
chain complexes. Cofibrations are tested by lifting against acyclic
fibrations between algebras with zero operations. An algebra map into such
an algebra is a chain map that kills the decomposables, so every lifting
problem is a chain lifting problem for the map induced on indecomposables.
For free maps and cell attachments that map is the chain map of generators.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from opmodel.bialgebras.algebras import AlgebraMorphism, FreeMapTag, PAlgebra, check_algebra_morphism
from opmodel.bialgebras.pushouts import CellTag
from opmodel.core.complexes import (
    ChainComplex,
    ChainMap,
    GradedSpace,
    chain_lift,
    direct_sum,
    disk,
    is_weak_equivalence,
    sphere,
    sum_projection,
)
from opmodel.core.config import DEFAULT_CONFIG
from opmodel.core.errors import IllFormed, NoLift
from opmodel.core.linalg import LinearMap, LinearSystem, Quotient, image, quotient
from opmodel.core.logging import get_logger
from opmodel.operads.operad import Operad

logger = get_logger("opmodel.bialgebras.classify")


@dataclass(frozen=True)
class AlgebraFlags:
    weak_equivalence: bool
    fibration: bool
    # None only when no fibration was sampled
    cofibration_wrt: bool | None
    cell: bool
    failures: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "weak_equivalence": self.weak_equivalence,
            "fibration": self.fibration,
            "cofibration_wrt": self.cofibration_wrt,
            "cell_attachment": self.cell,
            "failures": self.failures,
        }


def _acyclic_piece(rng: np.random.Generator, max_degree: int, label: str) -> ChainComplex:
    # below D = 2 the homology window is empty, so any complex is acyclic
    if max_degree < 2:
        return sphere(1, max_degree, label=label)
    return disk(int(rng.integers(2, max_degree + 1)), max_degree, label=label)


def sample_acyclic_fibrations(operad: Operad, max_degree: int, seed: int = 0, count: int = 3) -> list[AlgebraMorphism]:
    """Projections ``V ⊕ D^n -> V`` and ``D^n -> 0`` between algebras with zero operations."""
    rng = np.random.default_rng(seed)
    out: list[AlgebraMorphism] = []
    for _ in range(count):
        cell = _acyclic_piece(rng, max_degree, "b")
        if rng.random() < 0.5:
            zero = ChainComplex.zero(max_degree)
            out.append(
                AlgebraMorphism(
                    PAlgebra.trivial(operad, cell), PAlgebra.trivial(operad, zero), ChainMap.zero(cell, zero)
                )
            )
            continue
        base = _acyclic_piece(rng, max_degree, "c")
        total = direct_sum(base, cell)
        proj = sum_projection([base, cell], total, 0)
        out.append(AlgebraMorphism(PAlgebra.trivial(operad, total), PAlgebra.trivial(operad, base), proj))
    return out


def decomposables(a: PAlgebra, d: int) -> LinearMap:
    """Columns spanning the image of all operations of arity at least 2 in degree ``d``."""
    rows = a.complex.dim(d)
    tables = [a.operation(n, b, d) for n in a.arities() for b in range(a.operad.dim(n))]
    return image(LinearMap.hstack(tables, rows=rows)) if tables else LinearMap.zero(rows, 0)


@dataclass(frozen=True)
class Indecomposables:
    """``A / A·A`` as a chain complex, with the projection and a section per degree."""

    complex: ChainComplex
    quotients: dict[int, Quotient]

    def induced(self, f: ChainMap, target: "Indecomposables") -> ChainMap:
        comps = {
            d: target.quotients[d].projection @ f.component(d) @ self.quotients[d].section
            for d in self.complex.space.degrees
        }
        return ChainMap(self.complex, target.complex, comps)


def indecomposables(a: PAlgebra) -> Indecomposables:
    c = a.complex
    quotients = {d: quotient(c.dim(d), decomposables(a, d)) for d in c.space.degrees}
    dims = {d: q.projection.rows for d, q in quotients.items()}
    space = GradedSpace.from_dims(c.max_degree, dims, prefix="q")
    diffs = {
        n: quotients[n - 1].projection @ c.d(n) @ quotients[n].section
        for n in range(2, c.max_degree + 1)
    }
    return Indecomposables(ChainComplex(space, diffs, f"Q({a.name})"), quotients)


def generating_map(f: AlgebraMorphism) -> ChainMap:
    """The chain map whose lifting problems against zero-operation algebras are those of ``f``."""
    if isinstance(f.provenance, (FreeMapTag, CellTag)):
        return f.provenance.generators
    qa, qb = indecomposables(f.source), indecomposables(f.target)
    return qa.induced(f.map, qb)


def _chain_squares(j: ChainMap, p: ChainMap) -> list[tuple[ChainMap, ChainMap]]:
    """A basis of the commuting squares ``p∘a = b∘j`` of chain maps."""
    A, B, X, Y = j.source, j.target, p.source, p.target
    s = LinearSystem()
    degrees = A.space.degrees
    for d in degrees:
        s.add_unknown(("a", d), X.dim(d), A.dim(d))
        s.add_unknown(("b", d), Y.dim(d), B.dim(d))
    for key, src, tgt in (("a", A, X), ("b", B, Y)):
        for d in degrees:
            if d >= 2:
                s.add_block(
                    [((key, d), tgt.d(d), None, 1), ((key, d - 1), None, src.d(d), -1)],
                    rhs=LinearMap.zero(tgt.dim(d - 1), src.dim(d)),
                )
    for d in degrees:
        s.add_block(
            [(("a", d), p.component(d), None, 1), (("b", d), None, j.component(d), -1)],
            rhs=LinearMap.zero(Y.dim(d), A.dim(d)),
        )
    _, basis = s.solve_with_kernel()
    return [
        (
            ChainMap(A, X, {d: sol[("a", d)] for d in degrees}),
            ChainMap(B, Y, {d: sol[("b", d)] for d in degrees}),
        )
        for sol in basis
    ]


def chain_llp(j: ChainMap, fibrations: Sequence[AlgebraMorphism]) -> list[dict]:
    """Lifting failures of the generating map ``j`` against each fibration.

    Lifts form an affine space over the squares, so lifting a basis of the
    squares decides the whole problem.
    """
    failures = []
    for k, p in enumerate(fibrations):
        for a, b in _chain_squares(j, p.map):
            try:
                chain_lift(j, p.map, a, b)
            except NoLift as exc:
                failures.append({"fibration": k, "degree": exc.degree})
                break
    return failures


def classify_algebra_morphism(
    f: AlgebraMorphism,
    fibrations: Sequence[AlgebraMorphism] | None = None,
    seed: int = 0,
) -> AlgebraFlags:
    report = check_algebra_morphism(f)
    if not report:
        raise IllFormed(f"not an algebra morphism: {report.first().rule}")
    prov = f.provenance
    failures: list = []
    if f.map.is_iso():
        cof = True
    else:
        generators = generating_map(f)
        if fibrations is None:
            fibrations = sample_acyclic_fibrations(
                f.source.operad, f.source.max_degree, seed, DEFAULT_CONFIG.family.size
            )
        failures = chain_llp(generators, fibrations)
        cof = generators.is_injective() and not failures if fibrations else None
        logger.debug(f"{f.source.name} -> {f.target.name}: {len(failures)} lifting failures")
    cell = isinstance(prov, CellTag) or (isinstance(prov, FreeMapTag) and prov.generators.is_injective())
    return AlgebraFlags(
        weak_equivalence=is_weak_equivalence(f.map),
        fibration=f.map.is_surjective(),
        cofibration_wrt=cof,
        cell=cell,
        failures=failures,
    )
