"""Pushouts of coalgebras, created by the forgetful functor."""

from __future__ import annotations

from dataclasses import dataclass

from opmodel.coalgebras.structure import (
    CoalgebraMorphism,
    PCoalgebra,
    direct_sum_coalgebra,
    quotient_coalgebra,
)
from opmodel.core.complexes import ChainMap, copair
from opmodel.core.errors import IllFormed
from opmodel.core.logging import get_logger


@dataclass(frozen=True)
class PushoutResult:
    coalgebra: PCoalgebra
    from_left: CoalgebraMorphism
    from_right: CoalgebraMorphism
    # quotient map from the direct sum and its linear sections
    quotient: CoalgebraMorphism
    sections: dict
    cobase_injective: bool | None

    def induced(self, u: CoalgebraMorphism, v: CoalgebraMorphism) -> CoalgebraMorphism:
        """The map out of the pushout restricting to ``u`` and ``v``."""
        total = copair([u.map, v.map], self.quotient.source.complex)
        comps = {d: total.component(d) @ self.sections[d] for d in total.source.space.degrees}
        out = ChainMap(self.coalgebra.complex, u.target.complex, comps)
        if out.compose(self.quotient.map) != total:
            raise IllFormed("maps do not agree on the glued part")
        return CoalgebraMorphism(self.coalgebra, u.target, out)


def pushout(f: CoalgebraMorphism, g: CoalgebraMorphism, name: str | None = None) -> PushoutResult:
    """``B ⊔_A C = (B ⊕ C) / ⟨f(a) - g(a)⟩`` for ``f : A -> B`` and ``g : A -> C``."""
    log = get_logger("opmodel.coalgebras.colimits")
    b, c = f.target, g.target
    name = name or f"{b.name}+_{f.source.name}{c.name}"
    total = direct_sum_coalgebra(b, c)
    inc_b, inc_c = total.inclusions
    relations = {
        d: inc_b.component(d) @ f.component(d) - inc_c.component(d) @ g.component(d)
        for d in b.space.degrees
    }
    q, sections = quotient_coalgebra(total.coalgebra, relations, name)
    from_left = q.compose(inc_b)
    from_right = q.compose(inc_c)
    cobase = None
    if f.map.is_injective():
        cobase = from_right.map.is_injective()
        if not cobase:
            raise IllFormed("cobase change of an injective map is not injective")
    log.debug(f"pushout {name}: dims {q.target.complex.dims}")
    return PushoutResult(q.target, from_left, from_right, q, sections, cobase)
