"""Homotopical statements about envelopes, checked on concrete instances.

* ``compare_with_product``: ``U(A)(C) ≅ A × P*(C)`` as coalgebras, with both
  directions of the isomorphism built from universal properties.
* ``check_acyclic_invariance``: ``M(C)`` is acyclic when ``C`` is.
* ``check_acyclic_projection``: ``A × P*(C) -> A`` is a weak equivalence when
  ``C`` is acyclic.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from opmodel.coalgebras.cofree import cofree, cofree_lift, cofree_map
from opmodel.coalgebras.limits import ProductResult, factor_through, product
from opmodel.coalgebras.structure import CoalgebraMorphism, PCoalgebra, check_morphism
from opmodel.core.complexes import (
    ChainComplex,
    ChainMapFlags,
    classify_chain_map,
    homology,
    pair,
)
from opmodel.core.errors import ComparisonFailed, HypothesisFailed
from opmodel.core.linalg import in_span
from opmodel.core.logging import get_logger
from opmodel.envelope.enveloping import EnvelopingEvaluation, enveloping_evaluate
from opmodel.operads.schur import schur_evaluate
from opmodel.operads.sigma import SigmaModule

logger = get_logger("opmodel.envelope")


@dataclass(frozen=True)
class ComparisonCertificate:
    evaluation: EnvelopingEvaluation
    product: ProductResult
    # U(A)(C) -> A × P*(C) and its inverse
    phi: CoalgebraMorphism
    psi: CoalgebraMorphism

    @property
    def dims(self) -> tuple[int, ...]:
        return self.evaluation.dims

    def to_dict(self) -> dict:
        return {
            "dims": list(self.dims),
            "product_dims": list(self.product.coalgebra.complex.dims),
            "phi": {str(d): self.phi.component(d).dense() for d in self.phi.source.space.degrees},
        }


def _factor(inclusion: CoalgebraMorphism, f: CoalgebraMorphism, what: str) -> CoalgebraMorphism:
    for d in f.source.space.degrees:
        emb = inclusion.component(d)
        for col in f.component(d).columns:
            if not in_span(emb, col):
                raise ComparisonFailed(d, f"{what} does not land in {inclusion.source.name}")
    return factor_through(inclusion, f)


def compare_with_product(
    a: PCoalgebra, c: ChainComplex, evaluation: EnvelopingEvaluation | None = None
) -> ComparisonCertificate:
    """Build and certify ``U(A)(C) -> A × P*(C)``.

    ``ComparisonFailed`` carries the first degree where dimensions, the
    morphism property, or an inverse identity fails.
    """
    P = a.operad
    ev = evaluation or enveloping_evaluate(a, c)
    maps = ev.structure
    u_coalg, incl = ev.coalgebra, ev.inclusion
    pc, pi_c = cofree(P, c)
    prod = product(a, pc, f"{a.name}x{pc.name}")

    for d in u_coalg.space.degrees:
        if u_coalg.complex.dim(d) != prod.coalgebra.complex.dim(d):
            raise ComparisonFailed(
                d, f"dims {u_coalg.complex.dim(d)} and {prod.coalgebra.complex.dim(d)}"
            )

    to_a = CoalgebraMorphism(u_coalg, a, maps.pr_base.compose(incl.map))
    to_pc = cofree_map(maps.summand_projections[1], maps.ambient, pc).compose(incl)
    w = prod.ambient.cofree_of.argument
    phi_lift = cofree_lift(u_coalg, pair([to_a.map, to_pc.map], w), prod.ambient)
    phi = _factor(prod.inclusion, phi_lift, "phi")

    first, second = prod.projections
    k = pair([first.map, pi_c.compose(second.map)], maps.ambient.cofree_of.argument)
    psi = _factor(incl, cofree_lift(prod.coalgebra, k, maps.ambient), "psi")

    for d in u_coalg.space.degrees:
        if not phi.component(d).is_invertible():
            raise ComparisonFailed(d, "phi is not bijective")
    report = check_morphism(phi)
    if not report:
        raise ComparisonFailed(_witness_degree(u_coalg, report.first().witness), report.first().rule)
    for name, loop, ident in (
        ("psi∘phi", psi.compose(phi), CoalgebraMorphism.identity(u_coalg)),
        ("phi∘psi", phi.compose(psi), CoalgebraMorphism.identity(prod.coalgebra)),
    ):
        bad = next(
            (d for d in u_coalg.space.degrees if loop.component(d) != ident.component(d)), None
        )
        if bad is not None:
            raise ComparisonFailed(bad, f"{name} is not the identity")
    logger.info(f"  comparison certified: dims {list(ev.dims)}")
    return ComparisonCertificate(ev, prod, phi, psi)


def _witness_degree(c: PCoalgebra, witness: dict) -> int:
    if "degree" in witness:
        return int(witness["degree"])
    label = witness.get("element")
    for d in c.space.degrees:
        if label in c.space.labels[d - 1]:
            return d
    return 1


@dataclass(frozen=True)
class AcyclicityVerdict:
    holds: bool
    betti: tuple[int, ...]
    window: tuple[int, ...]
    table: object = field(default=None, compare=False)

    def to_dict(self) -> dict:
        return {"holds": self.holds, "betti": list(self.betti), "window": list(self.window)}


def _require_acyclic(c: ChainComplex) -> None:
    h = homology(c)
    if not h.is_acyclic():
        bad = [n for n in h.window if h.betti_number(n)]
        raise HypothesisFailed(f"{c.name} is not acyclic: homology in degrees {bad}")


def check_acyclic_invariance(module: SigmaModule, c: ChainComplex) -> AcyclicityVerdict:
    """``H_*(M(C)) = H_*(M(0)) = 0`` in the window, for acyclic ``C``."""
    _require_acyclic(c)
    value = schur_evaluate(module, c)
    h = homology(value.complex)
    window = tuple(h.window)
    holds = all(h.betti_number(n) == 0 for n in window)
    logger.info(f"  {module.name}({c.name}): betti {list(h.betti)}")
    return AcyclicityVerdict(holds, h.betti, window, h.table())


@dataclass(frozen=True)
class ProjectionVerdict:
    flags: ChainMapFlags
    product: ProductResult

    @property
    def weak_equivalence(self) -> bool:
        return self.flags.weak_equivalence

    def to_dict(self) -> dict:
        return {
            "weak_equivalence": self.weak_equivalence,
            "flags": self.flags.to_dict(),
            "product_dims": list(self.product.coalgebra.complex.dims),
        }


def check_acyclic_projection(a: PCoalgebra, c: ChainComplex) -> ProjectionVerdict:
    """Classify ``A × P*(C) -> A`` for acyclic ``C``."""
    _require_acyclic(c)
    pc, _ = cofree(a.operad, c)
    prod = product(a, pc)
    flags = classify_chain_map(prod.projections[0].map)
    logger.info(f"  projection to {a.name}: {flags.to_dict()}")
    return ProjectionVerdict(flags, prod)
