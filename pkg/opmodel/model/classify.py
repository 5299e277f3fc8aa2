from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from opmodel.coalgebras.structure import CoalgebraMorphism, check_morphism
from opmodel.core.complexes import classify_chain_map
from opmodel.core.config import DEFAULT_CONFIG
from opmodel.core.errors import IllFormed
from opmodel.model.families import GeneratingFamily
from opmodel.model.squares import RlpCertificate, certify_rlp


@dataclass(frozen=True)
class MorphismFlags:
    weak_equivalence: bool
    cofibration: bool
    # None when no family was supplied
    fibration_wrt: bool | None
    rlp: RlpCertificate | None = None

    def to_dict(self) -> dict:
        out = {
            "weak_equivalence": self.weak_equivalence,
            "cofibration": self.cofibration,
            "fibration_wrt": self.fibration_wrt,
        }
        if self.rlp is not None:
            out["rlp"] = self.rlp.to_dict()
        return out


def classify_coalgebra_morphism(
    f: CoalgebraMorphism,
    family: GeneratingFamily | None = None,
    probes: int | None = None,
    seed: int = 0,
) -> MorphismFlags:
    """Weak equivalences and cofibrations are decided on the underlying chain
    map; fibrations only relative to a finite family of acyclic cofibrations.
    """
    report = check_morphism(f)
    if not report:
        raise IllFormed(f"not a coalgebra morphism: {report.first().rule}")
    chain = classify_chain_map(f.map)
    rlp = None
    if family is not None:
        probes = probes if probes is not None else DEFAULT_CONFIG.sampling.probes
        rlp = certify_rlp(f, family.maps, probes, np.random.default_rng(seed))
    return MorphismFlags(
        weak_equivalence=chain.weak_equivalence,
        cofibration=chain.cofibration,
        fibration_wrt=rlp.holds if rlp is not None else None,
        rlp=rlp,
    )
