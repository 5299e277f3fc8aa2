"""Factorizations of coalgebra morphisms.

``factorize_cof_trivfib`` builds ``D -> C × P*(V) -> C`` with ``V`` the cone
of the identity of ``D``: the first map pairs ``f`` with the lift of the
inclusion ``D -> V``; the second is the product projection.

``factorize_smallobject`` runs the small object argument for a finite
family: at each stage every unlifted square is attached at once by a
pushout, until no unlifted square remains or the stage budget runs out.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from opmodel.coalgebras.colimits import pushout
from opmodel.coalgebras.cofree import cofree, cofree_lift
from opmodel.coalgebras.limits import product
from opmodel.coalgebras.structure import CoalgebraMorphism, PCoalgebra, direct_sum_coalgebra
from opmodel.core.complexes import classify_chain_map, cone_of_identity, copair, is_weak_equivalence, sum_of_maps
from opmodel.core.config import DEFAULT_CONFIG
from opmodel.core.errors import StageBudgetExhausted
from opmodel.core.logging import get_logger
from opmodel.model.families import GeneratingFamily, sample_generating_family
from opmodel.model.squares import Square, certify_rlp, unlifted_squares


@dataclass
class Factorization:
    input: CoalgebraMorphism
    left: CoalgebraMorphism
    right: CoalgebraMorphism
    method: str
    certificates: dict = field(default_factory=dict)
    stages: pd.DataFrame | None = None

    @property
    def middle(self) -> PCoalgebra:
        return self.left.target

    def composite_ok(self) -> bool:
        return self.right.compose(self.left) == self.input

    def to_dict(self) -> dict:
        out = {
            "method": self.method,
            "middle_dims": list(self.middle.complex.dims),
            "composite": self.composite_ok(),
            "certificates": self.certificates,
        }
        if self.stages is not None:
            out["stages"] = self.stages.to_dict(orient="records")
        return out


def factorize_cof_trivfib(
    f: CoalgebraMorphism,
    family: GeneratingFamily | None = None,
    probes: int | None = None,
    seed: int = 0,
) -> Factorization:
    """``f = q ∘ j`` with ``j`` injective and ``q`` an acyclic fibration.

    ``q`` is tested for the lifting property against ``family`` (by default
    a sampled family of cofibrations).
    """
    log = get_logger("opmodel.model.factorization")
    P = f.source.operad
    probes = probes if probes is not None else DEFAULT_CONFIG.sampling.probes
    log.info(f"Factorizing {f.source.name} -> {f.target.name} through a product with a cofree coalgebra")
    v, emb = cone_of_identity(f.source.complex)
    pv, _ = cofree(P, v)
    prod = product(f.target, pv)
    j = prod.pair(f, cofree_lift(f.source, emb, pv))
    q = prod.projections[0]
    log.info(f"  middle dims: {prod.coalgebra.complex.dims}")

    flags_j = classify_chain_map(j.map)
    flags_q = classify_chain_map(q.map)
    if family is None:
        family = sample_generating_family(P, seed=seed, max_degree=f.source.max_degree)
    rlp = certify_rlp(q, family.maps, probes, np.random.default_rng(seed))
    certificates = {
        "left_injective": flags_j.cofibration,
        "right_weak_equivalence": flags_q.weak_equivalence,
        "right_rlp": rlp.to_dict(),
        "composite": q.compose(j) == f,
    }
    log.info(f"  certificates: j injective={flags_j.cofibration}, q weq={flags_q.weak_equivalence}")
    return Factorization(f, j, q, "cone", certificates)


def _attach(squares: list[Square], family: GeneratingFamily, right: CoalgebraMorphism):
    members = [family.members[sq.member].map for sq in squares]
    sources = direct_sum_coalgebra(*(m.source for m in members))
    targets = direct_sum_coalgebra(*(m.target for m in members))
    j_tot = CoalgebraMorphism(
        sources.coalgebra,
        targets.coalgebra,
        sum_of_maps([m.map for m in members], sources.coalgebra.complex, targets.coalgebra.complex),
    )
    a_tot = CoalgebraMorphism(
        sources.coalgebra, right.source, copair([sq.a.map for sq in squares], sources.coalgebra.complex)
    )
    b_tot = CoalgebraMorphism(
        targets.coalgebra, right.target, copair([sq.b.map for sq in squares], targets.coalgebra.complex)
    )
    result = pushout(j_tot, a_tot)
    return result.from_right, result.induced(b_tot, right)


def factorize_smallobject(
    f: CoalgebraMorphism,
    family: GeneratingFamily,
    max_stages: int | None = None,
    max_squares: int | None = None,
    probes: int | None = None,
    seed: int = 0,
) -> Factorization:
    """``f = f_∞ ∘ i_∞`` with ``i_∞`` a composite of pushouts of family members."""
    log = get_logger("opmodel.model.smallobject")
    max_stages = max_stages if max_stages is not None else DEFAULT_CONFIG.small_object.max_stages
    max_squares = max_squares or DEFAULT_CONFIG.small_object.max_squares_per_stage
    probes = probes if probes is not None else DEFAULT_CONFIG.sampling.probes
    rng = np.random.default_rng(seed)
    left = CoalgebraMorphism.identity(f.source)
    right = f
    rows = []
    log.info(f"Small object argument on {f.source.name} -> {f.target.name} ({len(family)} members)")
    stage = 0
    while True:
        squares: list[Square] = []
        for k, member in enumerate(family.members):
            squares += unlifted_squares(k, member.map, right, max_squares - len(squares), rng)
            if len(squares) >= max_squares:
                break
        if not squares:
            break
        if stage == max_stages:
            raise StageBudgetExhausted(stage, squares)
        stage += 1
        step, right = _attach(squares, family, right)
        left = step.compose(left)
        weq = is_weak_equivalence(step.map) if family.acyclic else None
        if weq is False:
            log.error(f"  stage {stage}: pushout of acyclic members is not a weak equivalence")
        rows.append(
            {
                "stage": stage,
                "squares": len(squares),
                "dims": list(step.target.complex.dims),
                "injective": step.map.is_injective(),
                "weak_equivalence": weq,
            }
        )
        log.info(f"  stage {stage}: attached {len(squares)} squares, dims {step.target.complex.dims}")

    rlp = certify_rlp(right, family.maps, probes, rng)
    stages = pd.DataFrame(rows, columns=["stage", "squares", "dims", "injective", "weak_equivalence"])
    certificates = {
        "stages": stage,
        "stage_maps_injective": bool(stages["injective"].all()) if rows else True,
        "right_rlp": rlp.to_dict(),
    }
    if family.acyclic:
        certificates["stage_maps_weak_equivalences"] = bool(stages["weak_equivalence"].all()) if rows else True
    return Factorization(f, left, right, "small-object", certificates, stages)
