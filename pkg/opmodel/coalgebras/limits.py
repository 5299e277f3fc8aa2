"""Equalizers and products of P-coalgebras.

The product ``R × S`` is the coreflexive equalizer of two coalgebra maps
``P*(R ⊕ S) ⇉ P*(P*(R) ⊕ P*(S))``:

* ``d0`` lifts ``(ρ_R ⊕ ρ_S) ∘ π``, where ``ρ_R : R -> P*(R)`` is the lift of
  the identity;
* ``d1`` lifts ``(P*(pr_R), P*(pr_S))``, which forgets mixed tensors;
* the common section is ``P*(π_R ⊕ π_S)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from opmodel.coalgebras.cofree import cofree, cofree_lift, cofree_map, cofree_value
from opmodel.coalgebras.structure import CoalgebraMorphism, PCoalgebra, subcoalgebra
from opmodel.core.complexes import (
    ChainMap,
    direct_sum,
    pair,
    sum_of_maps,
    sum_projection,
)
from opmodel.core.errors import Inconsistent, IllFormed, NotCoreflexive
from opmodel.core.linalg import kernel, solve_columns
from opmodel.core.logging import get_logger


def equalizer(
    d0: CoalgebraMorphism, d1: CoalgebraMorphism, s0: ChainMap, name: str | None = None
) -> CoalgebraMorphism:
    """Inclusion of ``ker(d0 - d1)`` as a sub-coalgebra of the common source."""
    a = d0.source
    ident = ChainMap.identity(a.complex)
    if s0.compose(d0.map) != ident or s0.compose(d1.map) != ident:
        raise NotCoreflexive("the section does not split both maps")
    emb = {d: kernel(d0.component(d) - d1.component(d)) for d in a.space.degrees}
    return subcoalgebra(a, emb, name or f"eq({a.name})")


def factor_through(inclusion: CoalgebraMorphism, f: CoalgebraMorphism) -> CoalgebraMorphism:
    """The morphism ``h`` with ``inclusion ∘ h = f``; ``IllFormed`` if ``f`` misses the image."""
    comps = {}
    for d in f.source.space.degrees:
        try:
            comps[d] = solve_columns(inclusion.component(d), f.component(d))
        except Inconsistent:
            raise IllFormed(f"map does not factor through {inclusion.source.name} in degree {d}") from None
    return CoalgebraMorphism(
        f.source, inclusion.source, ChainMap(f.source.complex, inclusion.source.complex, comps)
    )


@dataclass(frozen=True)
class ProjectionTag:
    """Marks a product projection; ``index`` is the factor it lands in."""

    product: "ProductResult"
    index: int


@dataclass(eq=False)
class ProductResult:
    coalgebra: PCoalgebra
    factors: tuple[PCoalgebra, PCoalgebra]
    ambient: PCoalgebra
    inclusion: CoalgebraMorphism
    # chain projections P*(R ⊕ S) -> R and -> S
    ambient_projections: tuple[ChainMap, ChainMap]
    projections: tuple[CoalgebraMorphism, ...] = field(default=())

    def pair(self, u: CoalgebraMorphism, v: CoalgebraMorphism) -> CoalgebraMorphism:
        """The unique morphism into the product with components ``u`` and ``v``."""
        w = cofree_value(self.ambient).argument
        k = pair([u.map, v.map], w)
        lift = cofree_lift(u.source, k, self.ambient)
        out = factor_through(self.inclusion, lift)
        return CoalgebraMorphism(out.source, out.target, out.map, provenance="product_pair")


def product(r: PCoalgebra, s: PCoalgebra, name: str | None = None) -> ProductResult:
    log = get_logger("opmodel.coalgebras.limits")
    P = r.operad
    name = name or f"{r.name}x{s.name}"
    w = direct_sum(r.complex, s.complex)
    x, pi_x = cofree(P, w, f"{P.name}*({w.name})")
    pr, pi_r = cofree(P, r.complex)
    ps, pi_s = cofree(P, s.complex)
    y = direct_sum(pr.complex, ps.complex)
    z, _ = cofree(P, y)

    rho_r = cofree_lift(r, ChainMap.identity(r.complex), pr)
    rho_s = cofree_lift(s, ChainMap.identity(s.complex), ps)
    h0 = sum_of_maps([rho_r.map, rho_s.map], w, y).compose(pi_x)
    proj_r = sum_projection([r.complex, s.complex], w, 0)
    proj_s = sum_projection([r.complex, s.complex], w, 1)
    h1 = pair([cofree_map(proj_r, x, pr).map, cofree_map(proj_s, x, ps).map], y)
    d0 = cofree_lift(x, h0, z)
    d1 = cofree_lift(x, h1, z)
    s0 = cofree_map(sum_of_maps([pi_r, pi_s], y, w), z, x).map

    inclusion = equalizer(d0, d1, s0, name)
    result = ProductResult(
        inclusion.source,
        (r, s),
        x,
        inclusion,
        (proj_r.compose(pi_x), proj_s.compose(pi_x)),
    )
    result.projections = tuple(
        CoalgebraMorphism(
            inclusion.source,
            factor,
            amb.compose(inclusion.map),
            provenance=ProjectionTag(result, k),
        )
        for k, (factor, amb) in enumerate(zip((r, s), result.ambient_projections))
    )
    log.info(f"Product {name}: dims {inclusion.source.complex.dims}")
    return result


def iterated_product(factors: Sequence[PCoalgebra]) -> tuple[PCoalgebra, list[CoalgebraMorphism]]:
    """``((C_1 × C_2) × C_3) × …`` with the composite projections."""
    current = factors[0]
    projections = [CoalgebraMorphism.identity(current)]
    for nxt in factors[1:]:
        result = product(current, nxt)
        left, right = result.projections
        projections = [p.compose(left) for p in projections] + [right]
        current = result.coalgebra
    return current, projections
