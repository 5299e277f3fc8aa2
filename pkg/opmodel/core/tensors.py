"""Permutations, Koszul signs and tensor power bases.

A permutation ``σ`` of ``n`` letters is a tuple with ``σ[k]`` the new
position of factor ``k``. Acting on a tensor word it moves factor ``k`` to
position ``σ[k]`` and contributes ``(-1)^{|v_k||v_l|}`` for every pair of
factors whose order is swapped.

Tensor basis words are tuples of global basis indices of a graded space
(see ``GradedSpace.offset``). Sparse tensors are ``dict[tuple, Fraction]``.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterator, Mapping, Sequence

from opmodel.core.linalg import add_into

Permutation = tuple[int, ...]
Tensor = dict[tuple[int, ...], Fraction]


# --- permutations ---


def identity_permutation(n: int) -> Permutation:
    return tuple(range(n))


def compose_permutations(s: Permutation, t: Permutation) -> Permutation:
    """``s ∘ t``: first apply ``t``, then ``s``."""
    return tuple(s[t[k]] for k in range(len(t)))


def inverse_permutation(s: Permutation) -> Permutation:
    inv = [0] * len(s)
    for k, v in enumerate(s):
        inv[v] = k
    return tuple(inv)


def transposition(n: int, i: int) -> Permutation:
    """The adjacent transposition swapping positions ``i`` and ``i + 1``."""
    s = list(range(n))
    s[i], s[i + 1] = s[i + 1], s[i]
    return tuple(s)


@lru_cache(maxsize=None)
def all_permutations(n: int) -> tuple[Permutation, ...]:
    return tuple(itertools.permutations(range(n)))


@lru_cache(maxsize=None)
def reduced_word(s: Permutation) -> tuple[int, ...]:
    """Indices ``w`` with ``s = s_{w[0]} ∘ s_{w[1]} ∘ ... ∘ s_{w[-1]}``.

    Peels descents from the right: if ``s[i] > s[i+1]`` then
    ``s = (s ∘ s_i) ∘ s_i`` with one inversion fewer.
    """
    s = tuple(s)
    word: list[int] = []
    while True:
        for i in range(len(s) - 1):
            if s[i] > s[i + 1]:
                s = compose_permutations(s, transposition(len(s), i))
                word.append(i)
                break
        else:
            break
    return tuple(reversed(word))


def is_permutation(s: Sequence[int]) -> bool:
    return sorted(s) == list(range(len(s)))


def koszul_sign(s: Permutation, degrees: Sequence[int]) -> int:
    """Sign of moving factor ``k`` (of degree ``degrees[k]``) to ``s[k]``."""
    odd = 0
    n = len(s)
    for a in range(n):
        if degrees[a] % 2 == 0:
            continue
        for b in range(a + 1, n):
            if degrees[b] % 2 and s[a] > s[b]:
                odd ^= 1
    return -1 if odd else 1


def permute_word(s: Permutation, word: Sequence) -> tuple:
    out = [None] * len(word)
    for k, item in enumerate(word):
        out[s[k]] = item
    return tuple(out)


# --- tensor power bases ---


class TensorBasis:
    """Basis words of the tensor powers of a graded space, by degree.

    Words of a given arity and total degree are listed in lexicographic
    order of their global indices.
    """

    def __init__(self, space):
        self.space = space
        self._words: dict[tuple[int, int], tuple[tuple[int, ...], ...]] = {}
        self._index: dict[tuple[int, int], dict[tuple[int, ...], int]] = {}

    def words(self, n: int, degree: int) -> tuple[tuple[int, ...], ...]:
        key = (n, degree)
        if key not in self._words:
            found = tuple(self._generate(n, degree))
            self._words[key] = found
            self._index[key] = {w: k for k, w in enumerate(found)}
        return self._words[key]

    def index(self, word: tuple[int, ...]) -> int:
        degree = sum(self.space.degree_of(g) for g in word)
        self.words(len(word), degree)
        return self._index[(len(word), degree)][word]

    def dim(self, n: int, degree: int) -> int:
        return len(self.words(n, degree))

    def _generate(self, n: int, degree: int) -> Iterator[tuple[int, ...]]:
        if n == 0:
            if degree == 0:
                yield ()
            return
        for g in range(self.space.total_dim):
            dg = self.space.degree_of(g)
            if dg + (n - 1) > degree:
                break
            for rest in self._generate(n - 1, degree - dg):
                yield (g,) + rest


def tensor_product(factors: Sequence[Mapping[int, Fraction]]) -> Tensor:
    """Tensor product of sparse vectors given in global indices."""
    out: Tensor = {(): Fraction(1)}
    for vec in factors:
        nxt: Tensor = {}
        for word, c in out.items():
            for g, v in vec.items():
                nxt[word + (g,)] = nxt.get(word + (g,), 0) + c * v
        out = {w: v for w, v in nxt.items() if v}
    return out


def apply_factorwise(tensor: Mapping[tuple[int, ...], Fraction], column: Callable[[int], Mapping[int, Fraction]]) -> Tensor:
    """Apply a degree-zero linear map to every factor of every word."""
    out: Tensor = {}
    cache: dict[int, Mapping[int, Fraction]] = {}
    for word, c in tensor.items():
        factors = []
        for g in word:
            if g not in cache:
                cache[g] = column(g)
            factors.append(cache[g])
        add_into(out, tensor_product(factors), c)
    return out


def permute_tensor(s: Permutation, tensor: Mapping[tuple[int, ...], Fraction], degree_of: Callable[[int], int]) -> Tensor:
    """Apply the Koszul action of ``s`` to a sparse tensor."""
    out: Tensor = {}
    for word, c in tensor.items():
        sign = koszul_sign(s, [degree_of(g) for g in word])
        key = permute_word(s, word)
        add_into(out, {key: Fraction(sign)}, c)
    return out


def apply_at(
    tensor: Mapping[tuple[int, ...], Fraction],
    position: int,
    expand: Callable[[int], Mapping[tuple[int, ...], Fraction]],
) -> Tensor:
    """Replace factor ``position`` of every word by the tensor ``expand(g)``.

    ``expand`` must be of degree zero, so no sign appears.
    """
    out: Tensor = {}
    cache: dict[int, Mapping[tuple[int, ...], Fraction]] = {}
    for word, c in tensor.items():
        g = word[position]
        if g not in cache:
            cache[g] = expand(g)
        for inner, v in cache[g].items():
            key = word[:position] + inner + word[position + 1:]
            add_into(out, {key: v}, c)
    return out


def compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Ordered tuples of ``parts`` positive integers summing to ``total``."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(1, total - parts + 2):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def tensor_concat(parts: Sequence[Mapping[tuple[int, ...], Fraction]]) -> Tensor:
    """Tensor product of sparse tensors: words are concatenated in order."""
    out: Tensor = {(): Fraction(1)}
    for tensor in parts:
        nxt: Tensor = {}
        for word, c in out.items():
            for inner, v in tensor.items():
                add_into(nxt, {word + inner: c * v})
        out = nxt
    return out
