from __future__ import annotations

from dataclasses import dataclass

# Runtime engine configuration


@dataclass(frozen=True)
class TruncationConfig:
    # Every complex is cut off above this degree
    max_degree: int = 4


@dataclass(frozen=True)
class SmallObjectConfig:
    # Heuristic bound; the degree truncation usually stops runs much earlier
    max_stages: int = 32
    # Candidate squares tried per non-primitive family member and stage
    max_squares_per_stage: int = 64


@dataclass(frozen=True)
class FamilyBounds:
    max_dim: int = 4
    max_degree: int = 3
    size: int = 8
    shapes: tuple[str, ...] = ("primitive", "cofree_slice")


@dataclass(frozen=True)
class SamplingConfig:
    seed: int = 0
    # Test squares generated per family member when certifying lifting properties
    probes: int = 4


@dataclass(frozen=True)
class Config:
    truncation: TruncationConfig = TruncationConfig()
    small_object: SmallObjectConfig = SmallObjectConfig()
    family: FamilyBounds = FamilyBounds()
    sampling: SamplingConfig = SamplingConfig()


DEFAULT_CONFIG = Config()
