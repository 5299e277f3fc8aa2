"""Built-in operads: As, Com and Lie up to arity 3.

As(n) has one basis vector ``e_π`` per permutation (lexicographic order),
the operation ``x_π(1) x_π(2) … x_π(n)``. Lie3 is the span of the iterated
commutators inside As, with structure constants solved in that basis.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from opmodel.core.errors import InputError
from opmodel.core.linalg import LinearMap, SparseVector, solve_columns
from opmodel.core.logging import get_logger
from opmodel.core.tensors import all_permutations, compose_permutations, transposition
from opmodel.operads.operad import Operad
from opmodel.operads.sigma import SigmaModule

BUILTIN_NAMES = ("As", "Com", "Lie3")


def _as_word(pi: tuple[int, ...], rho: tuple[int, ...], i: int) -> tuple[int, ...]:
    m = len(rho)
    word: list[int] = []
    for a in pi:
        if a < i:
            word.append(a)
        elif a == i:
            word.extend(i + r for r in rho)
        else:
            word.append(a + m - 1)
    return tuple(word)


def associative_operad(max_arity: int = 4) -> Operad:
    index = {n: {p: k for k, p in enumerate(all_permutations(n))} for n in range(1, max_arity + 1)}
    dims = tuple(len(index[n]) for n in range(1, max_arity + 1))
    gens = {}
    for n in range(1, max_arity + 1):
        mats = []
        for j in range(n - 1):
            s = transposition(n, j)
            mats.append(
                LinearMap.from_entries(
                    {(index[n][compose_permutations(s, p)], k): Fraction(1) for p, k in index[n].items()},
                    dims[n - 1],
                    dims[n - 1],
                )
            )
        gens[n] = tuple(mats)
    comps = {}
    for m in range(1, max_arity + 1):
        for n in range(1, max_arity - m + 2):
            for i in range(m):
                entries = {}
                for pi, a in index[m].items():
                    for rho, b in index[n].items():
                        word = _as_word(pi, rho, i)
                        entries[(index[m + n - 1][word], a * dims[n - 1] + b)] = Fraction(1)
                comps[(m, n, i)] = LinearMap.from_entries(
                    entries, dims[m + n - 2], dims[m - 1] * dims[n - 1]
                )
    return Operad("As", SigmaModule(dims, gens, "As"), (Fraction(1),), comps)


def commutative_operad(max_arity: int = 4) -> Operad:
    dims = (1,) * max_arity
    one = LinearMap.identity(1)
    comps = {
        (m, n, i): one
        for m in range(1, max_arity + 1)
        for n in range(1, max_arity - m + 2)
        for i in range(m)
    }
    return Operad("Com", SigmaModule.trivial(dims, "Com"), (Fraction(1),), comps)


def suboperad(ambient: Operad, bases: Sequence[Sequence[SparseVector]], name: str) -> Operad:
    """The operad spanned by ``bases[n-1] ⊂ ambient(n)``.

    Actions and compositions are computed in the ambient operad and solved
    back into the given bases; ``Inconsistent`` means the span is not closed.
    """
    N = len(bases)
    embed = {
        n: LinearMap.from_columns(list(bases[n - 1]), ambient.dim(n)) for n in range(1, N + 1)
    }
    dims = tuple(embed[n].cols for n in range(1, N + 1))
    gens = {}
    for n in range(1, N + 1):
        gens[n] = tuple(
            solve_columns(embed[n], ambient.module.generator(n, j) @ embed[n]) for j in range(n - 1)
        )
    comps = {}
    for m in range(1, N + 1):
        for n in range(1, N - m + 2):
            for i in range(m):
                cols = [
                    ambient.compose(m, embed[m].column(a), n, embed[n].column(b), i)
                    for a in range(dims[m - 1])
                    for b in range(dims[n - 1])
                ]
                target = LinearMap.from_columns(cols, ambient.dim(m + n - 1))
                comps[(m, n, i)] = solve_columns(embed[m + n - 1], target)
    return Operad(name, SigmaModule(dims, gens, name), (Fraction(1),), comps)


def lie_operad(max_arity: int = 3) -> Operad:
    """Lie up to arity 3, spanned by ``[x1,x2]``, ``[[x1,x2],x3]`` and ``[x1,[x2,x3]]``."""
    N = min(max_arity, 3)
    ambient = associative_operad(3)
    bracket = {0: Fraction(1), 1: Fraction(-1)}
    bases: list[list[SparseVector]] = [[{0: Fraction(1)}]]
    if N >= 2:
        bases.append([bracket])
    if N >= 3:
        bases.append(
            [
                ambient.compose(2, bracket, 2, bracket, 0),
                ambient.compose(2, bracket, 2, bracket, 1),
            ]
        )
    return suboperad(ambient, bases, "Lie3")


def builtin_operad(name: str, max_arity: int = 4) -> Operad:
    log = get_logger("opmodel.operads")
    if name == "As":
        operad = associative_operad(max_arity)
    elif name == "Com":
        operad = commutative_operad(max_arity)
    elif name in ("Lie3", "Lie"):
        operad = lie_operad(max_arity)
    else:
        raise InputError(f"unknown built-in operad {name!r}; choose one of {', '.join(BUILTIN_NAMES)}")
    log.debug(f"built-in operad {operad.name} with dims {operad.module.dims}")
    return operad
