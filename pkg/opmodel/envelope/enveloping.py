"""Evaluations of the enveloping cooperad of a P-coalgebra ``A``.

For a complex ``C`` the evaluation is the coreflexive equalizer of

* ``d0 = P*(ρ_A ⊕ id_C)``, the lift of ``(ρ_A ⊕ id_C) ∘ π``,
* ``d1``, the lift of ``(P*(pr_A), pr_C ∘ π)``: the comonad coproduct of
  ``P*(A ⊕ C)`` followed by the arity-one projection on the ``C`` part,

both ``P*(A ⊕ C) -> P*(P*(A) ⊕ C)``, with common section ``P*(π_A ⊕ id_C)``.
"""

from __future__ import annotations

from dataclasses import dataclass

from opmodel.coalgebras.cofree import cofree, cofree_lift, cofree_map
from opmodel.coalgebras.structure import CoalgebraMorphism, PCoalgebra, check_morphism
from opmodel.coalgebras.limits import equalizer
from opmodel.core.complexes import ChainComplex, ChainMap, direct_sum, pair, sum_of_maps, sum_projection
from opmodel.core.errors import DegreeMismatch
from opmodel.core.logging import get_logger

logger = get_logger("opmodel.envelope")


@dataclass(frozen=True)
class StructureMaps:
    base: PCoalgebra
    argument: ChainComplex
    # P*(A ⊕ C) and P*(P*(A) ⊕ C)
    ambient: PCoalgebra
    target: PCoalgebra
    d0: CoalgebraMorphism
    d1: CoalgebraMorphism
    s0: ChainMap
    # π : P*(A ⊕ C) -> A ⊕ C and the summand projections of A ⊕ C
    cogenerators: ChainMap
    summand_projections: tuple[ChainMap, ChainMap]

    @property
    def pr_base(self) -> ChainMap:
        return self.summand_projections[0].compose(self.cogenerators)

    def coreflexive(self) -> bool:
        ident = ChainMap.identity(self.ambient.complex)
        return self.s0.compose(self.d0.map) == ident and self.s0.compose(self.d1.map) == ident


def structure_maps(a: PCoalgebra, c: ChainComplex) -> StructureMaps:
    if a.max_degree != c.max_degree:
        raise DegreeMismatch("base and argument have different truncations")
    P = a.operad
    w = direct_sum(a.complex, c)
    x, pi_x = cofree(P, w, f"{P.name}*({a.name}+{c.name})")
    pa, pi_a = cofree(P, a.complex)
    y = direct_sum(pa.complex, c)
    z, _ = cofree(P, y)

    pr_a = sum_projection([a.complex, c], w, 0)
    pr_c = sum_projection([a.complex, c], w, 1)
    rho_a = cofree_lift(a, ChainMap.identity(a.complex), pa)
    h0 = sum_of_maps([rho_a.map, ChainMap.identity(c)], w, y).compose(pi_x)
    h1 = pair([cofree_map(pr_a, x, pa).map, pr_c.compose(pi_x)], y)
    d0 = cofree_lift(x, h0, z)
    d1 = cofree_lift(x, h1, z)
    s0 = cofree_map(sum_of_maps([pi_a, ChainMap.identity(c)], y, w), z, x).map
    return StructureMaps(a, c, x, z, d0, d1, s0, pi_x, (pr_a, pr_c))


@dataclass(frozen=True)
class EnvelopingEvaluation:
    structure: StructureMaps
    inclusion: CoalgebraMorphism
    # filled in by the comparison with A × P*(C)
    comparison: object = None

    @property
    def coalgebra(self) -> PCoalgebra:
        return self.inclusion.source

    @property
    def dims(self) -> tuple[int, ...]:
        return self.coalgebra.complex.dims


def enveloping_evaluate(a: PCoalgebra, c: ChainComplex, compare: bool = False) -> EnvelopingEvaluation:
    """``U(A)(C) = ker(d0 - d1)`` as a sub-coalgebra of ``P*(A ⊕ C)``.

    With ``compare`` the isomorphism to ``A × P*(C)`` is built and certified
    as well.
    """
    logger.info(f"Evaluating the envelope of {a.name} at {c.name}")
    maps = structure_maps(a, c)
    inclusion = equalizer(maps.d0, maps.d1, maps.s0, f"U({a.name})({c.name})")
    logger.info(f"  dims: {inclusion.source.complex.dims}")
    result = EnvelopingEvaluation(maps, inclusion)
    if compare:
        from opmodel.envelope.homotopy import compare_with_product

        result = EnvelopingEvaluation(maps, inclusion, compare_with_product(a, c, result))
    return result


def check_structure_maps(maps: StructureMaps) -> dict[str, bool]:
    """Coreflexivity and the morphism property of both structure maps."""
    return {
        "coreflexive": maps.coreflexive(),
        "d0_morphism": bool(check_morphism(maps.d0)),
        "d1_morphism": bool(check_morphism(maps.d1)),
    }
