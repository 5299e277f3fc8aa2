"""Schur functors ``M(C) = ⊕_n M(n) ⊗_{Σ_n} C^{⊗n}`` with Koszul signs.

Coinvariants are computed one Σ_n-orbit of basis words at a time. The
orbit of a word is represented by its sorted word ``t0``; with ``H`` the
stabilizer of ``t0`` and ``χ`` its Koszul character, the classes
``[m ⊗ t0]`` are identified with the image of
``e_H = 1/|H| Σ_h χ(h) ρ(h)`` on ``M(n)``. The norm map sends a class to
the Σ_n-invariant average inside ``M(n) ⊗ C^{⊗n}``; projection after norm
is the identity.

Elements of the full space are sparse dicts keyed by ``(a, word)`` with
``a`` a basis index of ``M(n)`` and ``word`` a tuple of global basis
indices of ``C``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterator, Mapping

from opmodel.core.complexes import ChainComplex, ChainMap, GradedSpace
from opmodel.core.errors import DegreeMismatch
from opmodel.core.linalg import LinearMap, SparseVector, add_into, image, left_inverse
from opmodel.core.logging import get_logger
from opmodel.core.tensors import (
    Permutation,
    TensorBasis,
    all_permutations,
    apply_factorwise,
    inverse_permutation,
    koszul_sign,
    permute_word,
)
from opmodel.operads.sigma import SigmaModule

FullVector = dict[tuple[int, tuple[int, ...]], Fraction]


@dataclass(frozen=True)
class Summand:
    arity: int
    degree: int
    word: tuple[int, ...]
    # columns are the chosen class representatives m_j in M(n)
    basis: LinearMap
    # coordinates of e_H(m) in ``basis``
    coords: LinearMap
    start: int

    @property
    def size(self) -> int:
        return self.basis.cols


def sorted_words(space: GradedSpace, n: int, degree: int, lowest: int = 0) -> Iterator[tuple[int, ...]]:
    """Non-decreasing words of ``n`` global indices with total ``degree``."""
    if n == 0:
        if degree == 0:
            yield ()
        return
    for g in range(lowest, space.total_dim):
        dg = space.degree_of(g)
        if dg + (n - 1) > degree:
            break
        for rest in sorted_words(space, n - 1, degree - dg, g):
            yield (g,) + rest


def _matching_permutation(t0: tuple[int, ...], word: tuple[int, ...]) -> Permutation:
    """A ``τ`` with ``permute_word(τ, t0) == word``, matching equal letters in order."""
    slots: dict[int, list[int]] = {}
    for pos, g in enumerate(word):
        slots.setdefault(g, []).append(pos)
    used: dict[int, int] = {}
    tau = []
    for g in t0:
        k = used.get(g, 0)
        tau.append(slots[g][k])
        used[g] = k + 1
    return tuple(tau)


class SchurValue:
    """The evaluation ``M(C)`` with its basis of coinvariant classes."""

    def __init__(self, module: SigmaModule, argument: ChainComplex, name: str | None = None):
        self.module = module
        self.argument = argument
        self.space_in = argument.space
        self.max_degree = argument.max_degree
        self.name = name or f"{module.name}({argument.name})"
        self._word_cache: dict[tuple[int, ...], dict[int, SparseVector]] = {}
        self._norm_cache: dict[int, FullVector] = {}
        self._summands: list[list[Summand]] = []
        self._by_word: dict[tuple[int, ...], Summand] = {}
        labels = []
        for d in range(1, self.max_degree + 1):
            level: list[Summand] = []
            start = 0
            for n in range(1, min(module.max_arity, d) + 1):
                if module.dim(n) == 0:
                    continue
                for t0 in sorted_words(self.space_in, n, d):
                    s = self._make_summand(n, d, t0, start)
                    if s.size:
                        level.append(s)
                        self._by_word[t0] = s
                        start += s.size
            self._summands.append(level)
            labels.append(
                tuple(
                    f"{s.arity}:{j}[{','.join(self.space_in.label(g) for g in s.word)}]"
                    for s in level
                    for j in range(s.size)
                )
            )
        self.space = GradedSpace(self.max_degree, tuple(labels))
        self._owner = [None] * self.space.total_dim
        for d in range(1, self.max_degree + 1):
            for s in self._summands[d - 1]:
                for j in range(s.size):
                    self._owner[self.space.global_index(d, s.start + j)] = (s, j)

    # --- construction ---

    def _make_summand(self, n: int, d: int, t0: tuple[int, ...], start: int) -> Summand:
        degs = [self.space_in.degree_of(g) for g in t0]
        dim = self.module.dim(n)
        stab = [p for p in all_permutations(n) if permute_word(p, t0) == t0]
        avg = LinearMap.zero(dim, dim)
        for h in stab:
            avg = avg + self.module.action(h).scale(koszul_sign(h, degs))
        avg = avg.scale(Fraction(1, len(stab)))
        basis = image(avg)
        coords = left_inverse(basis) @ avg if basis.cols else LinearMap.zero(0, dim)
        return Summand(n, d, t0, basis, coords, start)

    # --- structure ---

    def summands(self, d: int) -> list[Summand]:
        return self._summands[d - 1]

    def dim(self, d: int) -> int:
        return self.space.dim(d)

    @property
    def dims(self) -> tuple[int, ...]:
        return self.space.dims

    def owner(self, g: int) -> tuple[Summand, int]:
        return self._owner[g]

    def arity_of(self, g: int) -> int:
        return self._owner[g][0].arity

    def representative(self, g: int) -> tuple[SparseVector, tuple[int, ...]]:
        """A representative ``m ⊗ t0`` of the class with global index ``g``."""
        s, j = self._owner[g]
        return s.basis.column(j), s.word

    def project(self, a: int, word: tuple[int, ...]) -> SparseVector:
        """Class of ``e_a ⊗ word`` in global indices of ``M(C)``."""
        if word not in self._word_cache:
            self._word_cache[word] = self._project_word(word)
        return self._word_cache[word].get(a, {})

    def _project_word(self, word: tuple[int, ...]) -> dict[int, SparseVector]:
        t0 = tuple(sorted(word))
        s = self._by_word.get(t0)
        if s is None:
            return {}
        tau = _matching_permutation(t0, word)
        sign = koszul_sign(tau, [self.space_in.degree_of(g) for g in t0])
        q = s.coords @ self.module.action(inverse_permutation(tau))
        off = self.space.global_index(s.degree, s.start)
        out: dict[int, SparseVector] = {}
        for a, col in enumerate(q.columns):
            if col:
                out[a] = {off + j: sign * v for j, v in col.items()}
        return out

    def project_full(self, full: Mapping[tuple[int, tuple[int, ...]], Fraction]) -> SparseVector:
        out: SparseVector = {}
        for (a, word), c in full.items():
            add_into(out, self.project(a, word), c)
        return out

    def norm(self, g: int) -> FullVector:
        """The Σ-invariant average ``1/n! Σ_σ ρ(σ)m ⊗ κ(σ)t0`` of class ``g``."""
        if g in self._norm_cache:
            return self._norm_cache[g]
        m, t0 = self.representative(g)
        n = len(t0)
        degs = [self.space_in.degree_of(x) for x in t0]
        weight = Fraction(1, math.factorial(n))
        out: FullVector = {}
        for sigma in all_permutations(n):
            sign = koszul_sign(sigma, degs)
            word = permute_word(sigma, t0)
            moved = self.module.action(sigma).apply(m)
            for a, v in moved.items():
                add_into(out, {(a, word): Fraction(1)}, sign * weight * v)
        self._norm_cache[g] = out
        return out

    def image_of_word(self, m: Mapping[int, Fraction], tensor: Mapping[tuple[int, ...], Fraction]) -> SparseVector:
        """Class of ``m ⊗ tensor`` for a sparse tensor of equal-length words."""
        out: SparseVector = {}
        for word, c in tensor.items():
            for a, v in m.items():
                add_into(out, self.project(a, word), c * v)
        return out

    # --- evaluated complex ---

    @cached_property
    def complex(self) -> ChainComplex:
        diffs = {}
        for d in range(2, self.max_degree + 1):
            cols = []
            for i in range(self.dim(d)):
                g = self.space.global_index(d, i)
                m, t0 = self.representative(g)
                tensor: dict[tuple[int, ...], Fraction] = {}
                sign = 1
                for k, x in enumerate(t0):
                    for y, v in self.argument.d_global(x).items():
                        add_into(tensor, {t0[:k] + (y,) + t0[k + 1:]: Fraction(sign)}, v)
                    if self.space_in.degree_of(x) % 2:
                        sign = -sign
                local = self.space.to_local(self.image_of_word(m, tensor))[1]
                cols.append(local)
            diffs[d] = LinearMap.from_columns(cols, self.dim(d - 1))
        return ChainComplex(self.space, diffs, self.name)


def schur_evaluate(module: SigmaModule, c: ChainComplex, name: str | None = None) -> SchurValue:
    log = get_logger("opmodel.operads.schur")
    value = SchurValue(module, c, name)
    log.debug(f"{value.name}: dims {value.dims}")
    return value


def schur_map(source: SchurValue, target: SchurValue, h: ChainMap) -> ChainMap:
    """``M(h) : M(C) -> M(C')`` for a chain map ``h : C -> C'``."""
    if h.source.space.total_dim != source.space_in.total_dim:
        raise DegreeMismatch("chain map source does not match the Schur argument")
    columns = []
    for g in range(source.space.total_dim):
        m, t0 = source.representative(g)
        tensor = apply_factorwise({t0: Fraction(1)}, h.global_column)
        columns.append(target.image_of_word(m, tensor))
    return ChainMap.from_global_columns(source.complex, target.complex, columns)


@dataclass(frozen=True)
class NormPair:
    """Norm and projection for one arity and degree.

    Full-space index of ``e_a ⊗ word`` is ``a * T + index(word)`` with ``T``
    the number of words of that arity and degree.
    """

    norm: LinearMap
    projection: LinearMap


def norm_map(module: SigmaModule, c: ChainComplex, n: int, value: SchurValue | None = None) -> dict[int, NormPair]:
    value = value or SchurValue(module, c)
    words = TensorBasis(c.space)
    out = {}
    for d in range(1, c.max_degree + 1):
        summands = [s for s in value.summands(d) if s.arity == n]
        classes = [
            value.space.global_index(d, s.start + j) for s in summands for j in range(s.size)
        ]
        T = words.dim(n, d)
        full_dim = module.dim(n) * T
        cols = []
        for g in classes:
            cols.append({a * T + words.index(w): v for (a, w), v in value.norm(g).items()})
        norm = LinearMap.from_columns(cols, full_dim)
        position = {g: k for k, g in enumerate(classes)}
        proj_entries = {}
        for a in range(module.dim(n)):
            for w in words.words(n, d):
                for g, v in value.project(a, w).items():
                    proj_entries[(position[g], a * T + words.index(w))] = v
        out[d] = NormPair(norm, LinearMap.from_entries(proj_entries, len(classes), full_dim))
    return out
