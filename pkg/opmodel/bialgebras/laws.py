"""Mixed distributive laws between an operad ``P`` and an operad ``Q``.

A law is a rewrite rule: for basis elements ``p`` of ``P(n)`` and ``q`` of
``Q(m)`` it expresses ``ρ_q ∘ γ_p`` as a sum of ladders

    c · (γ_{o_1} ⊗ … ⊗ γ_{o_m}) ∘ κ(σ) ∘ (ρ_{c_1} ⊗ … ⊗ ρ_{c_n})

where ``ρ_{c_k}`` acts on input ``k`` (arity one means the identity), the
``T = Σ arity(c_k)`` resulting factors are moved by the Koszul action of
``σ``, and consecutive blocks are multiplied by the ``γ_{o_l}``.

Rules given for one pair are propagated to the Σ-translates of ``p`` and
``q`` by ``complete_rules``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from opmodel.core.checks import CheckReport
from opmodel.core.errors import InputError
from opmodel.core.linalg import SparseVector, add_into
from opmodel.core.tensors import (
    Permutation,
    Tensor,
    all_permutations,
    compose_permutations,
    inverse_permutation,
    is_permutation,
    permute_tensor,
    tensor_concat,
    tensor_product,
)
from opmodel.operads.builtins import associative_operad, commutative_operad
from opmodel.operads.operad import Operad

RuleKey = tuple[int, int, int, int]
Slot = tuple[int, int]

LAW_NAMES = ("biassociative", "commutative", "trivial")


@dataclass(frozen=True)
class Ladder:
    coeff: Fraction
    # (arity, basis index) of Q, one per input
    coops: tuple[Slot, ...]
    sigma: Permutation
    # (arity, basis index) of P, one per output
    ops: tuple[Slot, ...]

    @property
    def width(self) -> int:
        return sum(r for r, _ in self.coops)

    def scaled(self, c: Fraction) -> "Ladder":
        return Ladder(self.coeff * c, self.coops, self.sigma, self.ops)

    def to_dict(self) -> dict:
        return {
            "coeff": str(self.coeff),
            "coops": [f"{r}:{k}" for r, k in self.coops],
            "sigma": list(self.sigma),
            "ops": [f"{r}:{k}" for r, k in self.ops],
        }


@dataclass(frozen=True)
class MixedDistributiveLaw:
    name: str
    P: Operad
    Q: Operad
    rules: Mapping[RuleKey, tuple[Ladder, ...]] = field(default_factory=dict)

    def coop_arities(self) -> list[int]:
        """Arities of ``Q`` whose every basis element has rules."""
        out = []
        for m in sorted({k[2] for k in self.rules}):
            if all(any(k[2] == m and k[3] == q for k in self.rules) for q in range(self.Q.dim(m))):
                out.append(m)
        return out

    def products_for(self, m: int, q: int) -> list[tuple[int, int]]:
        return sorted((n, p) for (n, p, mm, qq) in self.rules if (mm, qq) == (m, q))

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "P": self.P.name,
            "Q": self.Q.name,
            "rules": {
                rule_label(key): [ladder.to_dict() for ladder in ladders]
                for key, ladders in sorted(self.rules.items())
            },
        }


def rule_label(key: RuleKey) -> str:
    n, p, m, q = key
    return f"{n}:{p},{m}:{q}"


def parse_rule_label(text: str) -> RuleKey:
    try:
        left, right = text.split(",")
        n, p = (int(x) for x in left.split(":"))
        m, q = (int(x) for x in right.split(":"))
    except ValueError:
        raise InputError(f"rule key {text!r} is not of the form 'n:p,m:q'") from None
    return n, p, m, q


# --- evaluation ---


def block_permutation(pi: Permutation, sizes: Sequence[int]) -> Permutation:
    """Move block ``k`` (of ``sizes[k]`` factors) to block position ``pi[k]``."""
    starts = {}
    for pos in range(len(pi)):
        starts[pos] = sum(sizes[k] for k in range(len(pi)) if pi[k] < pos)
    return tuple(starts[pi[k]] + t for k in range(len(pi)) for t in range(sizes[k]))


def apply_ladder(
    ladder: Ladder,
    word: tuple[int, ...],
    coop: Callable[[int, int, int], Mapping[tuple[int, ...], Fraction]],
    op: Callable[[int, int, tuple[int, ...]], Mapping[int, Fraction]],
    degree_of: Callable[[int], int],
) -> Tensor:
    """The ladder applied to one word of inputs; a sparse tensor of ``m`` factors."""
    factors = [{(g,): Fraction(1)} if r == 1 else coop(r, c, g) for (r, c), g in zip(ladder.coops, word)]
    moved = permute_tensor(ladder.sigma, tensor_concat(factors), degree_of)
    out: Tensor = {}
    for inner, v in moved.items():
        blocks = []
        start = 0
        for r, o in ladder.ops:
            block = inner[start:start + r]
            start += r
            blocks.append({block[0]: Fraction(1)} if r == 1 else op(r, o, block))
        add_into(out, tensor_product(blocks), ladder.coeff * v)
    return out


def expand_rule(
    ladders: Sequence[Ladder],
    word: tuple[int, ...],
    coop: Callable[[int, int, int], Mapping[tuple[int, ...], Fraction]],
    op: Callable[[int, int, tuple[int, ...]], Mapping[int, Fraction]],
    degree_of: Callable[[int], int],
) -> Tensor:
    out: Tensor = {}
    for ladder in ladders:
        add_into(out, apply_ladder(ladder, word, coop, op, degree_of))
    return out


# --- construction ---


def _single(vector: SparseVector) -> tuple[int, Fraction] | None:
    if len(vector) != 1:
        return None
    (k, c), = vector.items()
    return k, c


def _move_inputs(ladder: Ladder, sigma: Permutation) -> Ladder:
    """Ladder for ``ρ_q ∘ γ_p ∘ κ(σ^{-1})``."""
    pi = inverse_permutation(sigma)
    coops = tuple(ladder.coops[pi[k]] for k in range(len(pi)))
    block = block_permutation(pi, [r for r, _ in coops])
    return Ladder(ladder.coeff, coops, compose_permutations(ladder.sigma, block), ladder.ops)


def _move_outputs(ladder: Ladder, tau: Permutation) -> Ladder:
    """Ladder for ``κ(τ) ∘ ρ_q ∘ γ_p``."""
    inv = inverse_permutation(tau)
    ops = tuple(ladder.ops[inv[k]] for k in range(len(tau)))
    block = block_permutation(tau, [r for r, _ in ladder.ops])
    return Ladder(ladder.coeff, ladder.coops, compose_permutations(block, ladder.sigma), ops)


def complete_rules(P: Operad, Q: Operad, rules: Mapping[RuleKey, Sequence[Ladder]]) -> dict[RuleKey, tuple[Ladder, ...]]:
    """Add the rules forced by equivariance for every Σ-translate that is a
    multiple of a basis element. Rules already present are kept."""
    out = {key: tuple(ladders) for key, ladders in rules.items()}
    frontier = list(out)
    while frontier:
        key = frontier.pop()
        n, p, m, q = key
        for sigma in all_permutations(n):
            moved_p = _single(P.act(sigma, {p: Fraction(1)}))
            if moved_p is None:
                continue
            for tau in all_permutations(m):
                moved_q = _single(Q.act(tau, {q: Fraction(1)}))
                if moved_q is None:
                    continue
                new = (n, moved_p[0], m, moved_q[0])
                if new in out:
                    continue
                # ρ_{τ·q} γ_{σ·p} = κ(τ) ρ_q γ_p κ(σ^{-1}), and τ·q = c_q e_{q'}, σ·p = c_p e_{p'}
                scale = 1 / (moved_p[1] * moved_q[1])
                out[new] = tuple(
                    _move_outputs(_move_inputs(ladder, sigma), tau).scaled(scale) for ladder in out[key]
                )
                frontier.append(new)
    return out


def hopf_ladders() -> tuple[Ladder, ...]:
    """``Δ̄(xy)`` for a connected bialgebra with reduced coproduct ``Δ̄``."""
    one, two = (1, 0), (2, 0)
    rows = [
        ((one, one), (0, 1), (one, one)),
        ((one, one), (1, 0), (one, one)),
        ((one, two), (0, 1, 2), (two, one)),
        ((one, two), (1, 0, 2), (one, two)),
        ((two, one), (0, 2, 1), (two, one)),
        ((two, one), (0, 1, 2), (one, two)),
        ((two, two), (0, 2, 1, 3), (two, two)),
    ]
    return tuple(Ladder(Fraction(1), coops, sigma, ops) for coops, sigma, ops in rows)


def builtin_law(name: str, P: Operad | None = None, Q: Operad | None = None, max_arity: int = 3) -> MixedDistributiveLaw:
    if name == "biassociative":
        P = P or associative_operad(max_arity)
        Q = Q or associative_operad(max_arity)
        rules = complete_rules(P, Q, {(2, 0, 2, 0): hopf_ladders()})
    elif name == "commutative":
        P = P or commutative_operad(max_arity)
        Q = Q or commutative_operad(max_arity)
        rules = complete_rules(P, Q, {(2, 0, 2, 0): hopf_ladders()})
    elif name == "trivial":
        P = P or commutative_operad(max_arity)
        Q = Q or commutative_operad(max_arity)
        rules = {(2, p, 2, q): () for p in range(P.dim(2)) for q in range(Q.dim(2))}
    else:
        raise InputError(f"unknown law {name!r}; expected one of {', '.join(LAW_NAMES)}")
    return MixedDistributiveLaw(name, P, Q, rules)


def validate_law(law: MixedDistributiveLaw) -> CheckReport:
    """Shape checks of every ladder against the arities of its rule."""
    report = CheckReport(f"law {law.name}")
    for key, ladders in sorted(law.rules.items()):
        n, p, m, q = key
        if not (0 <= p < law.P.dim(n)) or not (0 <= q < law.Q.dim(m)):
            report.add("rule-index", rule=rule_label(key))
            continue
        for k, ladder in enumerate(ladders):
            report.tick()
            slots_ok = all(
                (r == 1 and c == 0) or (r > 1 and 0 <= c < operad.dim(r))
                for slots, operad in ((ladder.coops, law.Q), (ladder.ops, law.P))
                for r, c in slots
            )
            shape_ok = (
                len(ladder.coops) == n
                and len(ladder.ops) == m
                and is_permutation(ladder.sigma)
                and len(ladder.sigma) == ladder.width == sum(r for r, _ in ladder.ops)
            )
            if not (slots_ok and shape_ok):
                report.add("ladder-shape", rule=rule_label(key), ladder=k)
    return report
