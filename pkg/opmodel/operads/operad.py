"""Operads given by partial composition tables, and their dual cooperads.

Positions are 0-based in code and 1-based in files and reports. The table
for ``(m, n, i)`` is a map ``P(m) ⊗ P(n) -> P(m+n-1)``; column
``a * dim P(n) + b`` holds ``e_a ∘_i e_b``. Operations act by
``(σ·μ)(x_1..x_n) = μ(x_σ(1)..x_σ(n))``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from opmodel.core.checks import CheckReport
from opmodel.core.errors import BadOperad
from opmodel.core.linalg import LinearMap, SparseVector, add_into
from opmodel.core.tensors import Permutation, transposition
from opmodel.operads.sigma import SigmaModule, check_sigma_module

CompositionKey = tuple[int, int, int]


@dataclass(frozen=True, eq=False)
class Operad:
    name: str
    module: SigmaModule
    unit: tuple[Fraction, ...]
    compositions: Mapping[CompositionKey, LinearMap]
    _totals: dict = field(default_factory=dict, init=False, repr=False, compare=False)
    _transposed_totals: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    @property
    def max_arity(self) -> int:
        return self.module.max_arity

    def dim(self, n: int) -> int:
        return self.module.dim(n)

    def composition(self, m: int, n: int, i: int) -> LinearMap:
        try:
            return self.compositions[(m, n, i)]
        except KeyError:
            raise BadOperad(f"{self.name}: no composition table for ({m},{n},{i + 1})") from None

    def compose_basis(self, m: int, a: int, n: int, b: int, i: int) -> SparseVector:
        return self.composition(m, n, i).column(a * self.dim(n) + b)

    def compose(self, m: int, left: Mapping[int, Fraction], n: int, right: Mapping[int, Fraction], i: int) -> SparseVector:
        out: SparseVector = {}
        for a, x in left.items():
            for b, y in right.items():
                add_into(out, self.compose_basis(m, a, n, b, i), x * y)
        return out

    def act(self, perm: Permutation, vector: Mapping[int, Fraction]) -> SparseVector:
        return self.module.act(perm, vector)

    def total(self, n: int, b: int, parts: Sequence[tuple[int, int]]) -> SparseVector:
        """``γ(e_b; e_{q_1}, …, e_{q_n})`` for ``parts = ((r_1, q_1), …)``.

        Inserted from the last position down so earlier positions keep
        their index.
        """
        key = (n, b, tuple(parts))
        if key in self._totals:
            return self._totals[key]
        vec: SparseVector = {b: Fraction(1)}
        arity = n
        for k in range(n - 1, -1, -1):
            r, q = parts[k]
            nxt: SparseVector = {}
            for a, x in vec.items():
                add_into(nxt, self.compose_basis(arity, a, r, q, k), x)
            vec = nxt
            arity += r - 1
        self._totals[key] = vec
        return vec

    def transposed_total(self, n: int, b: int, arities: tuple[int, ...]) -> dict[int, list[tuple[tuple[int, ...], Fraction]]]:
        """For each basis ``a`` of ``P(Σ r_k)``: pairs ``(q, ⟨e_a*, γ(e_b; e_q)⟩)``."""
        key = (n, b, arities)
        if key in self._transposed_totals:
            return self._transposed_totals[key]
        table: dict[int, list[tuple[tuple[int, ...], Fraction]]] = {}
        for qs in _basis_tuples([self.dim(r) for r in arities]):
            vec = self.total(n, b, tuple(zip(arities, qs)))
            for a, v in vec.items():
                table.setdefault(a, []).append((qs, v))
        self._transposed_totals[key] = table
        return table

    def with_composition(self, key: CompositionKey, table: LinearMap) -> "Operad":
        comps = dict(self.compositions)
        comps[key] = table
        return Operad(self.name, self.module, self.unit, comps)


def _basis_tuples(dims: Sequence[int]):
    if not dims:
        yield ()
        return
    for q in range(dims[0]):
        for rest in _basis_tuples(dims[1:]):
            yield (q,) + rest


@dataclass(frozen=True, eq=False)
class Cooperad:
    """Dual of a finite dimensional operad: decomposition tables are transposes."""

    name: str
    module: SigmaModule
    counit: tuple[Fraction, ...]
    decompositions: Mapping[CompositionKey, LinearMap]

    @property
    def max_arity(self) -> int:
        return self.module.max_arity

    def dim(self, n: int) -> int:
        return self.module.dim(n)


def dualize(x: Operad | Cooperad) -> Operad | Cooperad:
    """Operad to cooperad and back; applying it twice returns equal tables."""
    if isinstance(x, Operad):
        return Cooperad(
            f"{x.name}*",
            x.module.dual(f"{x.module.name}*"),
            x.unit,
            {k: t.transpose() for k, t in x.compositions.items()},
        )
    name = x.name[:-1] if x.name.endswith("*") else x.name
    mod_name = x.module.name[:-1] if x.module.name.endswith("*") else x.module.name
    return Operad(
        name,
        x.module.dual(mod_name),
        x.counit,
        {k: t.transpose() for k, t in x.decompositions.items()},
    )


def require_connected(operad: Operad) -> None:
    """``P(1)`` must be spanned by the unit, which must be its basis vector."""
    if operad.dim(1) != 1:
        raise BadOperad(f"{operad.name}: P(1) has dimension {operad.dim(1)}, expected 1")
    if tuple(operad.unit) != (Fraction(1),):
        raise BadOperad(f"{operad.name}: the unit must be the basis vector of P(1)")


# --- axiom checker ---


def _left_block_permutation(sigma: Permutation, i: int, m: int) -> Permutation:
    out: list[int] = []
    for a in sigma:
        if a < i:
            out.append(a)
        elif a == i:
            out.extend(range(i, i + m))
        else:
            out.append(a + m - 1)
    return tuple(out)


def _right_block_permutation(tau: Permutation, l: int, i: int) -> Permutation:
    m = len(tau)
    return tuple(range(i)) + tuple(i + t for t in tau) + tuple(range(i + m, l + m - 1))


def check_operad_axioms(operad: Operad) -> CheckReport:
    """Every violated operad identity, with witnesses.

    Checks the Σ presentation, unit shape, left and right unit laws,
    sequential and parallel associativity, and equivariance of ``∘_i`` in
    both arguments for the transposition generators.
    """
    report = CheckReport(f"operad {operad.name}")
    report.extend(check_sigma_module(operad.module))
    N = operad.max_arity
    if operad.dim(1) != 1:
        report.add("unit-dimension", dim=operad.dim(1))
        return report
    if len(operad.unit) != 1 or operad.unit[0] == 0:
        report.add("unit-vector", unit=[str(u) for u in operad.unit])
        return report

    missing = False
    for m in range(1, N + 1):
        for n in range(1, N - m + 2):
            for i in range(m):
                table = operad.compositions.get((m, n, i))
                expected = (operad.dim(m + n - 1), operad.dim(m) * operad.dim(n))
                if table is None:
                    report.add("missing-composition", m=m, n=n, position=i + 1)
                    missing = True
                elif table.shape != expected:
                    report.add("composition-shape", m=m, n=n, position=i + 1, shape=list(table.shape))
                    missing = True
    if missing or report.violations:
        return report

    unit = {0: operad.unit[0]}
    for n in range(1, N + 1):
        for b in range(operad.dim(n)):
            report.tick()
            if operad.compose(1, unit, n, {b: Fraction(1)}, 0) != {b: Fraction(1)}:
                report.add("left-unit", arity=n, basis=b)
            for i in range(n):
                report.tick()
                if operad.compose(n, {b: Fraction(1)}, 1, unit, i) != {b: Fraction(1)}:
                    report.add("right-unit", arity=n, basis=b, position=i + 1)

    def basis(n):
        return [{a: Fraction(1)} for a in range(operad.dim(n))]

    # sequential: (λ ∘_i μ) ∘_{i+j} ν = λ ∘_i (μ ∘_j ν)
    for l in range(2, N + 1):
        for m in range(2, N + 1):
            for n in range(2, N + 1):
                if l + m + n - 2 > N:
                    continue
                for a, lam in enumerate(basis(l)):
                    for b, mu in enumerate(basis(m)):
                        for c, nu in enumerate(basis(n)):
                            for i in range(l):
                                lm = operad.compose(l, lam, m, mu, i)
                                for j in range(m):
                                    report.tick()
                                    lhs = operad.compose(l + m - 1, lm, n, nu, i + j)
                                    rhs = operad.compose(l, lam, m + n - 1, operad.compose(m, mu, n, nu, j), i)
                                    if lhs != rhs:
                                        report.add(
                                            "sequential-associativity",
                                            arities=[l, m, n],
                                            basis=[a, b, c],
                                            positions=[i + 1, j + 1],
                                        )
    # parallel: (λ ∘_i μ) ∘_{k+m-1} ν = (λ ∘_k ν) ∘_i μ for i < k
    for l in range(2, N + 1):
        for m in range(2, N + 1):
            for n in range(2, N + 1):
                if l + m + n - 2 > N:
                    continue
                for a, lam in enumerate(basis(l)):
                    for b, mu in enumerate(basis(m)):
                        for c, nu in enumerate(basis(n)):
                            for i in range(l):
                                for k in range(i + 1, l):
                                    report.tick()
                                    lhs = operad.compose(
                                        l + m - 1, operad.compose(l, lam, m, mu, i), n, nu, k + m - 1
                                    )
                                    rhs = operad.compose(
                                        l + n - 1, operad.compose(l, lam, n, nu, k), m, mu, i
                                    )
                                    if lhs != rhs:
                                        report.add(
                                            "parallel-associativity",
                                            arities=[l, m, n],
                                            basis=[a, b, c],
                                            positions=[i + 1, k + 1],
                                        )
    # equivariance
    for l in range(2, N + 1):
        for m in range(1, N - l + 2):
            for a, lam in enumerate(basis(l)):
                for b, mu in enumerate(basis(m)):
                    for s in range(l - 1):
                        sigma = transposition(l, s)
                        for i in range(l):
                            report.tick()
                            lhs = operad.compose(l, operad.act(sigma, lam), m, mu, i)
                            j0 = sigma.index(i)
                            big = _left_block_permutation(sigma, i, m)
                            rhs = operad.act(big, operad.compose(l, lam, m, mu, j0))
                            if lhs != rhs:
                                report.add(
                                    "left-equivariance",
                                    arities=[l, m],
                                    basis=[a, b],
                                    generator=s + 1,
                                    position=i + 1,
                                )
                    for s in range(m - 1):
                        tau = transposition(m, s)
                        for i in range(l):
                            report.tick()
                            lhs = operad.compose(l, lam, m, operad.act(tau, mu), i)
                            rhs = operad.act(
                                _right_block_permutation(tau, l, i), operad.compose(l, lam, m, mu, i)
                            )
                            if lhs != rhs:
                                report.add(
                                    "right-equivariance",
                                    arities=[l, m],
                                    basis=[a, b],
                                    generator=s + 1,
                                    position=i + 1,
                                )
    return report
