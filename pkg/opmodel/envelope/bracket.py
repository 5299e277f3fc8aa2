"""Regrouping ``P*(A ⊕ C)`` by the number of factors taken from ``A``.

The basis of ``P*(A ⊕ C)`` splits into summands indexed by ``(n, r)``:
``n`` factors from ``C`` and ``r`` factors from ``A``. Each summand is
independently recounted by a character computation over
``Σ_r × Σ_n ⊂ Σ_{n+r}`` acting on ``P(n+r)* ⊗ A^{⊗r} ⊗ C^{⊗n}``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import pandas as pd

from opmodel.coalgebras.cofree import cofree, cofree_value
from opmodel.coalgebras.structure import PCoalgebra
from opmodel.core.complexes import ChainComplex, direct_sum
from opmodel.core.errors import DegreeMismatch
from opmodel.core.tensors import TensorBasis, all_permutations, inverse_permutation, koszul_sign, permute_word
from opmodel.operads.sigma import SigmaModule


@dataclass(frozen=True)
class BracketEvaluation:
    base: PCoalgebra
    argument: ChainComplex
    coalgebra: PCoalgebra
    # one row per (n, r, degree): dim from the orbit split and from characters
    table: pd.DataFrame

    def consistent(self) -> bool:
        if not (self.table["dim"] == self.table["regrouped_dim"]).all():
            return False
        totals = self.table.groupby("degree")["dim"].sum()
        return all(
            int(totals.get(d, 0)) == self.coalgebra.complex.dim(d)
            for d in self.coalgebra.space.degrees
        )


def _trace(m) -> Fraction:
    return sum((v for (i, j), v in m.entries.items() if i == j), Fraction(0))


def regrouped_dim(module: SigmaModule, a: ChainComplex, c: ChainComplex, n: int, r: int, degree: int) -> int:
    """``dim (P(n+r)* ⊗ A^{⊗r} ⊗ C^{⊗n})_{Σ_r × Σ_n}`` in one degree."""
    total = n + r
    if total == 0 or total > module.max_arity:
        return 0
    words_a, words_c = TensorBasis(a.space), TensorBasis(c.space)
    words = []
    for da in range(0, degree + 1):
        for wa in words_a.words(r, da):
            for wc in words_c.words(n, degree - da):
                degs = [a.space.degree_of(x) for x in wa] + [c.space.degree_of(x) for x in wc]
                words.append((tuple(("a", x) for x in wa) + tuple(("c", x) for x in wc), degs))
    group = [
        alpha + tuple(r + b for b in beta)
        for alpha in all_permutations(r)
        for beta in all_permutations(n)
    ]
    acc = Fraction(0)
    for sigma in group:
        chi = _trace(module.action(inverse_permutation(sigma)))
        if not chi:
            continue
        tr = 0
        for word, degs in words:
            if permute_word(sigma, word) == word:
                tr += koszul_sign(sigma, degs)
        acc += chi * tr
    value = acc / len(group)
    if value.denominator != 1:
        raise DegreeMismatch("character average is not an integer")
    return int(value)


def bracket_evaluate(a: PCoalgebra, c: ChainComplex) -> BracketEvaluation:
    if a.max_degree != c.max_degree:
        raise DegreeMismatch("base and argument have different truncations")
    w = direct_sum(a.complex, c)
    x, _ = cofree(a.operad, w, f"{a.operad.name}*[{a.name}]({c.name})")
    value = cofree_value(x)
    counts: dict[tuple[int, int, int], int] = {}
    for d in w.space.degrees:
        for s in value.summands(d):
            r = sum(1 for g in s.word if w.space.local(g)[1] < a.complex.dim(w.space.degree_of(g)))
            key = (s.arity - r, r, d)
            counts[key] = counts.get(key, 0) + s.size
    rows = []
    N = value.module.max_arity
    for d in w.space.degrees:
        for total in range(1, min(N, d) + 1):
            for r in range(total + 1):
                n = total - r
                dim = counts.get((n, r, d), 0)
                regrouped = regrouped_dim(value.module, a.complex, c, n, r, d)
                if dim or regrouped:
                    rows.append({"n": n, "r": r, "degree": d, "dim": dim, "regrouped_dim": regrouped})
    table = pd.DataFrame(rows, columns=["n", "r", "degree", "dim", "regrouped_dim"])
    return BracketEvaluation(a, c, x, table)


__all__ = ["BracketEvaluation", "bracket_evaluate", "regrouped_dim"]
