"""Σ-modules given by the matrices of the adjacent transpositions."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from opmodel.core.checks import CheckReport
from opmodel.core.linalg import LinearMap
from opmodel.core.tensors import Permutation, identity_permutation, reduced_word, transposition


@dataclass(frozen=True, eq=False)
class SigmaModule:
    """Spaces ``M(1..N)`` with left Σ_n actions.

    ``transpositions[n][i]`` is the action of the transposition swapping
    positions ``i`` and ``i + 1`` (0-based) on ``M(n)``.
    """

    dims: tuple[int, ...]
    transpositions: Mapping[int, tuple[LinearMap, ...]]
    name: str = "M"
    _actions: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    @property
    def max_arity(self) -> int:
        return len(self.dims)

    def dim(self, n: int) -> int:
        if n < 1 or n > self.max_arity:
            return 0
        return self.dims[n - 1]

    def generator(self, n: int, i: int) -> LinearMap:
        return self.transpositions[n][i]

    def action(self, perm: Permutation) -> LinearMap:
        perm = tuple(perm)
        if perm not in self._actions:
            n = len(perm)
            out = LinearMap.identity(self.dim(n))
            for i in reduced_word(perm):
                out = out @ self.generator(n, i)
            self._actions[perm] = out
        return self._actions[perm]

    def act(self, perm: Permutation, vector: Mapping[int, object]) -> dict:
        return self.action(perm).apply(vector)

    def dual(self, name: str | None = None) -> "SigmaModule":
        """Contragredient module: ``σ`` acts by the transpose of ``σ^{-1}``."""
        return SigmaModule(
            self.dims,
            {n: tuple(g.transpose() for g in gens) for n, gens in self.transpositions.items()},
            name or f"{self.name}*",
        )

    def truncated(self, max_arity: int) -> "SigmaModule":
        if max_arity >= self.max_arity:
            return self
        return SigmaModule(
            self.dims[:max_arity],
            {n: g for n, g in self.transpositions.items() if n <= max_arity},
            self.name,
        )

    @classmethod
    def trivial(cls, dims: tuple[int, ...], name: str = "M") -> "SigmaModule":
        return cls(
            dims,
            {n: tuple(LinearMap.identity(dims[n - 1]) for _ in range(n - 1)) for n in range(1, len(dims) + 1)},
            name,
        )


def check_sigma_module(module: SigmaModule) -> CheckReport:
    """Verify the Coxeter presentation of every Σ_n action."""
    report = CheckReport(f"sigma-module {module.name}")
    for n in range(1, module.max_arity + 1):
        gens = module.transpositions.get(n, ())
        if len(gens) != n - 1:
            report.add("generator-count", arity=n, found=len(gens), expected=n - 1)
            continue
        dim = module.dim(n)
        ident = LinearMap.identity(dim)
        for i, s in enumerate(gens):
            report.tick()
            if s.shape != (dim, dim):
                report.add("generator-shape", arity=n, generator=i + 1, shape=list(s.shape))
                continue
            if s @ s != ident:
                report.add("involution", arity=n, generator=i + 1)
        if report.violations:
            continue
        for i in range(n - 1):
            for j in range(i + 1, n - 1):
                report.tick()
                a, b = gens[i], gens[j]
                if j == i + 1:
                    ab = a @ b
                    if ab @ ab @ ab != ident:
                        report.add("braid", arity=n, generators=[i + 1, j + 1])
                elif a @ b != b @ a:
                    report.add("commutation", arity=n, generators=[i + 1, j + 1])
    return report


def generator_permutations(n: int) -> list[Permutation]:
    return [transposition(n, i) for i in range(n - 1)]


__all__ = ["SigmaModule", "check_sigma_module", "generator_permutations", "identity_permutation"]
