"""The model structure on (P,Q)-bialgebras transferred from Q-coalgebras.

Weak equivalences and fibrations are those of the underlying Q-coalgebra
morphisms. The generating cofibrations are the maps ``P(i)`` for ``i`` in a
coalgebra family; a bialgebra map ``P(A) -> X`` is the same as a coalgebra
map ``A -> X``, so squares and lifts against ``P(i)`` are read off the
coalgebra squares of ``i``.
"""

from __future__ import annotations

import numpy as np
import pandas as pd

from opmodel.bialgebras.algebras import free_algebra, free_extension
from opmodel.bialgebras.bialgebra import (
    BialgebraMorphism,
    PQBialgebra,
    check_bialgebra_morphism,
    lift_free_to_bialgebra,
)
from opmodel.bialgebras.pushouts import cell_attachment
from opmodel.coalgebras.structure import direct_sum_coalgebra, quotient_coalgebra
from opmodel.core.complexes import copair, is_weak_equivalence, sum_of_maps
from opmodel.core.config import DEFAULT_CONFIG, FamilyBounds
from opmodel.core.errors import DegreeMismatch, IllFormed, StageBudgetExhausted
from opmodel.core.linalg import kernel
from opmodel.core.logging import get_logger
from opmodel.model.classify import MorphismFlags, classify_coalgebra_morphism
from opmodel.model.factorization import Factorization
from opmodel.model.families import GeneratingFamily, sample_generating_family
from opmodel.model.squares import Square, certify_rlp, unlifted_squares

logger = get_logger("opmodel.bialgebras.model")

MAX_FACTORIZATION_DEGREE = 2


def classify_bialgebra_morphism(
    f: BialgebraMorphism,
    family: GeneratingFamily | None = None,
    probes: int | None = None,
    seed: int = 0,
) -> MorphismFlags:
    """Flags of the underlying coalgebra morphism.

    Lifting against ``P(i)`` is adjoint to lifting against ``i``, so
    ``fibration_wrt`` is tested on the coalgebra map.
    """
    report = check_bialgebra_morphism(f)
    if not report:
        raise IllFormed(f"not a bialgebra morphism: {report.first().rule}")
    return classify_coalgebra_morphism(f.on_coalgebras, family, probes, seed)


def _attach(squares: list[Square], family: GeneratingFamily, right: BialgebraMorphism, stage: int):
    X, Y, law = right.source, right.target, right.source.law
    members = [family.members[sq.member].map for sq in squares]
    sources = direct_sum_coalgebra(*(m.source for m in members))
    targets = direct_sum_coalgebra(*(m.target for m in members))
    a_src, b_src = sources.coalgebra.complex, targets.coalgebra.complex
    j = sum_of_maps([m.map for m in members], a_src, b_src)
    a_tot = copair([sq.a.map for sq in squares], a_src)
    b_tot = copair([sq.b.map for sq in squares], b_src)
    cell = cell_attachment(X.algebra, j, a_tot, name=f"{X.name}[{stage}]")
    # the glued coalgebra is a quotient of the lifted structure on P(B ⊕ X)
    generators = direct_sum_coalgebra(targets.coalgebra, X.coalgebra)
    lifted = lift_free_to_bialgebra(generators.coalgebra, law, algebra=cell.free)
    ideal = {d: kernel(cell.quotient.component(d)) for d in cell.free.space.degrees}
    q, _ = quotient_coalgebra(lifted.coalgebra, ideal, cell.algebra.name)
    if q.map != cell.quotient.map:
        raise IllFormed(f"stage {stage}: coalgebra and algebra quotients disagree")
    glued = PQBialgebra(cell.algebra, q.target, law)
    step = BialgebraMorphism(X, glued, cell.from_right.map, cell.from_right.provenance)
    cells = free_algebra(law.P, b_src)
    induced = cell.induced(free_extension(cells, Y.algebra, b_tot), right.on_algebras)
    return step, BialgebraMorphism(glued, Y, induced.map)


def factorize_bialgebra(
    f: BialgebraMorphism,
    family: GeneratingFamily | None = None,
    max_stages: int | None = None,
    max_squares: int | None = None,
    probes: int | None = None,
    seed: int = 0,
) -> Factorization:
    """``f = f_∞ ∘ i_∞`` with ``i_∞`` a composite of cell attachments of
    ``P``-images of family members.

    Each stage map is certified injective on underlying complexes.
    """
    D = f.source.max_degree
    if D > MAX_FACTORIZATION_DEGREE:
        raise DegreeMismatch(f"bialgebra factorization runs up to degree {MAX_FACTORIZATION_DEGREE}, got {D}")
    log = get_logger("opmodel.bialgebras.smallobject")
    law = f.source.law
    max_stages = max_stages if max_stages is not None else DEFAULT_CONFIG.small_object.max_stages
    max_squares = max_squares or DEFAULT_CONFIG.small_object.max_squares_per_stage
    probes = probes if probes is not None else DEFAULT_CONFIG.sampling.probes
    if family is None:
        family = sample_generating_family(law.Q, FamilyBounds(max_dim=2, max_degree=D), seed=seed, max_degree=D)
    rng = np.random.default_rng(seed)
    left = BialgebraMorphism.identity(f.source)
    right = f
    rows = []
    log.info(f"Small object argument on {f.source.name} -> {f.target.name} ({len(family)} free cells)")
    stage = 0
    while True:
        squares: list[Square] = []
        for k, member in enumerate(family.members):
            squares += unlifted_squares(k, member.map, right.on_coalgebras, max_squares - len(squares), rng)
            if len(squares) >= max_squares:
                break
        if not squares:
            break
        if stage == max_stages:
            raise StageBudgetExhausted(stage, squares)
        stage += 1
        step, right = _attach(squares, family, right, stage)
        left = step.compose(left)
        injective = step.map.is_injective()
        if not injective:
            log.error(f"  stage {stage}: cell attachment is not injective")
        rows.append(
            {
                "stage": stage,
                "squares": len(squares),
                "dims": list(step.target.complex.dims),
                "injective": injective,
                "weak_equivalence": is_weak_equivalence(step.map) if family.acyclic else None,
            }
        )
        log.info(f"  stage {stage}: attached {len(squares)} cells, dims {step.target.complex.dims}")

    rlp = certify_rlp(right.on_coalgebras, family.maps, probes, rng)
    stages = pd.DataFrame(rows, columns=["stage", "squares", "dims", "injective", "weak_equivalence"])
    certificates = {
        "stages": stage,
        "stage_maps_injective": bool(stages["injective"].all()) if rows else True,
        "right_rlp": rlp.to_dict(),
    }
    return Factorization(f, left, right, "bialgebra-small-object", certificates, stages)

