"""Seeded finite families of generating (acyclic) cofibrations."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from opmodel.coalgebras.closure import finite_subcoalgebra
from opmodel.coalgebras.cofree import cofree, zero_coalgebra
from opmodel.coalgebras.structure import CoalgebraMorphism, PCoalgebra
from opmodel.core.complexes import (
    ChainComplex,
    ChainMap,
    direct_sum,
    disk,
    is_weak_equivalence,
    sphere,
    sum_inclusion,
)
from opmodel.core.config import DEFAULT_CONFIG, FamilyBounds
from opmodel.core.linalg import LinearMap
from opmodel.core.logging import get_logger
from opmodel.operads.operad import Operad

logger = get_logger("opmodel.model.families")


@dataclass(frozen=True)
class FamilyMember:
    map: CoalgebraMorphism
    shape: str
    acyclic: bool

    def to_dict(self) -> dict:
        return {
            "shape": self.shape,
            "acyclic": self.acyclic,
            "source": self.map.source.name,
            "target": self.map.target.name,
            "source_dims": list(self.map.source.complex.dims),
            "target_dims": list(self.map.target.complex.dims),
        }


@dataclass(frozen=True)
class GeneratingFamily:
    members: tuple[FamilyMember, ...] = ()
    acyclic: bool = False
    bounds: FamilyBounds = field(default_factory=FamilyBounds)
    seed: int | None = None

    def __len__(self) -> int:
        return len(self.members)

    @property
    def maps(self) -> list[CoalgebraMorphism]:
        return [m.map for m in self.members]

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "acyclic": self.acyclic,
            "bounds": {
                "max_dim": self.bounds.max_dim,
                "max_degree": self.bounds.max_degree,
                "size": self.bounds.size,
                "shapes": list(self.bounds.shapes),
            },
            "members": [m.to_dict() for m in self.members],
        }


def _cell(rng: np.random.Generator, top: int, D: int, prefer_disks: bool) -> ChainComplex:
    use_disk = top >= 2 and (prefer_disks or rng.random() < 0.5)
    if use_disk:
        return disk(int(rng.integers(2, top + 1)), D)
    return sphere(int(rng.integers(1, top + 1)), D)


def _cells(rng: np.random.Generator, count: int, top: int, D: int, prefer_disks: bool) -> ChainComplex:
    parts = [_cell(rng, top, D, prefer_disks) for _ in range(count)]
    return direct_sum(*parts) if len(parts) > 1 else parts[0]


def _primitive_member(
    operad: Operad, rng: np.random.Generator, bounds: FamilyBounds, D: int, acyclic: bool
) -> tuple[CoalgebraMorphism, str] | None:
    top = min(bounds.max_degree, D)
    if bounds.max_dim <= 1:
        s = sphere(int(rng.integers(1, top + 1)), D)
        zero = zero_coalgebra(operad, D)
        target = PCoalgebra.trivial(operad, s)
        return CoalgebraMorphism(zero, target, ChainMap.zero(zero.complex, s)), "0->cell"
    kind = int(rng.integers(0, 3))
    if kind == 0:
        b = _cells(rng, int(rng.integers(1, 3)), top, D, acyclic)
        target = PCoalgebra.trivial(operad, b)
        zero = zero_coalgebra(operad, D)
        return CoalgebraMorphism(zero, target, ChainMap.zero(zero.complex, b)), "0->cells"
    if kind == 1 and top >= 2:
        n = int(rng.integers(2, top + 1))
        s, dk = sphere(n - 1, D), disk(n, D)
        incl = ChainMap(s, dk, {n - 1: LinearMap.identity(1)})
        return (
            CoalgebraMorphism(PCoalgebra.trivial(operad, s), PCoalgebra.trivial(operad, dk), incl),
            "sphere->disk",
        )
    a = _cells(rng, 1, top, D, False)
    extra = _cells(rng, 1, top, D, acyclic)
    total = direct_sum(a, extra)
    incl = sum_inclusion([a, extra], total, 0)
    return (
        CoalgebraMorphism(PCoalgebra.trivial(operad, a), PCoalgebra.trivial(operad, total), incl),
        "cells->cells",
    )


def _cofree_slice_member(
    operad: Operad, rng: np.random.Generator, bounds: FamilyBounds, D: int, acyclic: bool
) -> tuple[CoalgebraMorphism, str] | None:
    top = min(bounds.max_degree, D)
    v = _cell(rng, top, D, acyclic)
    c, _ = cofree(operad, v)
    degrees = [d for d in c.space.degrees if c.complex.dim(d)]
    if not degrees:
        return None
    d = degrees[int(rng.integers(0, len(degrees)))]
    i = int(rng.integers(0, c.complex.dim(d)))
    b = finite_subcoalgebra(c, d, {i: Fraction(1)}).source
    zero = zero_coalgebra(operad, D)
    return CoalgebraMorphism(zero, b, ChainMap.zero(zero.complex, b.complex)), "0->cofree-slice"


def sample_generating_family(
    operad: Operad,
    bounds: FamilyBounds | None = None,
    acyclic: bool = False,
    seed: int = 0,
    max_degree: int | None = None,
) -> GeneratingFamily:
    """A deterministic family of injections between small coalgebras.

    With ``acyclic`` only weak equivalences are kept, each one checked by
    exact homology.
    """
    bounds = bounds or DEFAULT_CONFIG.family
    D = max_degree or DEFAULT_CONFIG.truncation.max_degree
    rng = np.random.default_rng(seed)
    shapes = ("primitive",) if bounds.max_dim <= 1 else bounds.shapes
    members: list[FamilyMember] = []
    attempts = 0
    while len(members) < bounds.size and attempts < 50 * bounds.size:
        attempts += 1
        shape = shapes[int(rng.integers(0, len(shapes)))]
        if shape == "cofree_slice":
            found = _cofree_slice_member(operad, rng, bounds, D, acyclic)
        else:
            found = _primitive_member(operad, rng, bounds, D, acyclic)
        if found is None:
            continue
        j, kind = found
        if j.target.space.total_dim > bounds.max_dim:
            continue
        weq = is_weak_equivalence(j.map)
        if acyclic and not weq:
            continue
        members.append(FamilyMember(j, kind, weq))
    logger.info(f"Sampled {len(members)} family members (seed {seed}, acyclic={acyclic})")
    return GeneratingFamily(tuple(members), acyclic, bounds, seed)
