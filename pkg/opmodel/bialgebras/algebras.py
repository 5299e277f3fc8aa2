"""P-algebras in truncated chain complexes and their morphisms.

An algebra stores, for every arity ``n`` in ``2..min(N, D)``, every basis
element ``p_b`` of ``P(n)`` and every degree ``d``, the matrix of
``γ_b : (A^{⊗n})_d -> A_d``. Columns follow the lexicographic word order of
``TensorBasis``; products of total degree above ``D`` vanish.

Equivariance reads ``γ_{σ·p} = γ_p ∘ κ(σ^{-1})`` and associativity
``γ_{p ∘_i q} = γ_p ∘ (1 ⊗ … ⊗ γ_q ⊗ … ⊗ 1)`` with ``γ_q`` in slot ``i``.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator, Mapping, Sequence

from opmodel.core.checks import CheckReport
from opmodel.core.complexes import ChainComplex, ChainMap, GradedSpace
from opmodel.core.errors import DegreeMismatch, IllFormed, NotAComplex
from opmodel.core.linalg import LinearMap, SparseVector, add_into, quotient
from opmodel.core.logging import get_logger
from opmodel.core.tensors import Tensor, TensorBasis, apply_factorwise, permute_tensor, tensor_product, transposition
from opmodel.operads.operad import Operad, require_connected
from opmodel.operads.schur import SchurValue, schur_map

Provider = Callable[[int, int, int], LinearMap]

logger = get_logger("opmodel.bialgebras.algebras")


@dataclass(frozen=True, eq=False)
class PAlgebra:
    operad: Operad
    complex: ChainComplex
    provider: Provider | None = None
    name: str = "A"
    # set when this is the free algebra on some complex
    free_on: object = None
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False)
    _products: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    @property
    def max_degree(self) -> int:
        return self.complex.max_degree

    @property
    def max_arity(self) -> int:
        return min(self.operad.max_arity, self.max_degree)

    @property
    def space(self) -> GradedSpace:
        return self.complex.space

    @property
    def words(self) -> TensorBasis:
        if "words" not in self._cache:
            self._cache["words"] = TensorBasis(self.complex.space)
        return self._cache["words"]

    def arities(self) -> range:
        return range(2, self.max_arity + 1)

    def operation(self, n: int, b: int, d: int) -> LinearMap:
        key = (n, b, d)
        if key not in self._cache:
            rows = self.complex.dim(d)
            cols = self.words.dim(n, d)
            if self.provider is None or n > d or rows == 0 or cols == 0:
                table = LinearMap.zero(rows, cols)
            else:
                table = self.provider(n, b, d)
                if table.shape != (rows, cols):
                    raise DegreeMismatch(
                        f"{self.name}: operation ({n},{b}) in degree {d} has shape "
                        f"{table.shape}, expected {(rows, cols)}"
                    )
            self._cache[key] = table
        return self._cache[key]

    def op_word(self, n: int, b: int, word: tuple[int, ...]) -> SparseVector:
        """``γ_b`` of one basis word, as a global vector."""
        key = (n, b, word)
        if key not in self._products:
            d = sum(self.space.degree_of(g) for g in word)
            if d > self.max_degree or n > self.max_arity:
                self._products[key] = {}
            else:
                col = self.operation(n, b, d).column(self.words.index(word))
                self._products[key] = self.space.to_global(d, col)
        return self._products[key]

    def op_tensor(self, n: int, p: Mapping[int, Fraction], tensor: Mapping[tuple[int, ...], Fraction]) -> SparseVector:
        """``γ_p(t)`` for ``p`` a vector of ``P(n)`` and ``t`` a sparse tensor."""
        out: SparseVector = {}
        for b, pv in p.items():
            for word, tv in tensor.items():
                add_into(out, self.op_word(n, b, word), pv * tv)
        return out

    def tables(self) -> dict[tuple[int, int], dict[int, LinearMap]]:
        return {
            (n, b): {d: self.operation(n, b, d) for d in self.complex.space.degrees}
            for n in self.arities()
            for b in range(self.operad.dim(n))
        }

    def is_trivial(self) -> bool:
        return all(t.is_zero() for per in self.tables().values() for t in per.values())

    @classmethod
    def from_tables(
        cls,
        operad: Operad,
        complex: ChainComplex,
        tables: Mapping[tuple[int, int], Mapping[int, LinearMap]],
        name: str = "A",
    ) -> "PAlgebra":
        def provider(n, b, d):
            per = tables.get((n, b), {})
            if d in per:
                return per[d]
            return LinearMap.zero(complex.dim(d), TensorBasis(complex.space).dim(n, d))

        return cls(operad, complex, provider, name)

    @classmethod
    def trivial(cls, operad: Operad, complex: ChainComplex, name: str | None = None) -> "PAlgebra":
        """Zero operations."""
        return cls(operad, complex, None, name or complex.name)

    def with_operation(self, n: int, b: int, d: int, table: LinearMap) -> "PAlgebra":
        tables = self.tables()
        tables.setdefault((n, b), {})[d] = table
        return PAlgebra.from_tables(self.operad, self.complex, tables, self.name)


def words_upto(algebra: PAlgebra, n: int) -> Iterator[tuple[int, ...]]:
    """All basis words of arity ``n`` and total degree at most ``D``."""
    for d in range(n, algebra.max_degree + 1):
        yield from algebra.words.words(n, d)


@dataclass(frozen=True)
class FreeMapTag:
    """``P(j)`` for the chain map ``j`` of generators."""

    generators: ChainMap


@dataclass(frozen=True, eq=False)
class AlgebraMorphism:
    source: PAlgebra
    target: PAlgebra
    map: ChainMap
    provenance: object = None

    def component(self, d: int) -> LinearMap:
        return self.map.component(d)

    def compose(self, other: "AlgebraMorphism") -> "AlgebraMorphism":
        """``self ∘ other``."""
        return AlgebraMorphism(other.source, self.target, self.map.compose(other.map))

    __matmul__ = compose

    def __eq__(self, other) -> bool:
        if not isinstance(other, AlgebraMorphism):
            return NotImplemented
        return self.map == other.map

    __hash__ = None

    @classmethod
    def identity(cls, a: PAlgebra) -> "AlgebraMorphism":
        return cls(a, a, ChainMap.identity(a.complex))

    @classmethod
    def zero(cls, source: PAlgebra, target: PAlgebra) -> "AlgebraMorphism":
        return cls(source, target, ChainMap.zero(source.complex, target.complex))


# --- checks ---


def _tensor_differential(c: ChainComplex, word: tuple[int, ...]) -> Tensor:
    out: Tensor = {}
    sign = 1
    for k, x in enumerate(word):
        for y, v in c.d_global(x).items():
            add_into(out, {word[:k] + (y,) + word[k + 1:]: Fraction(sign)}, v)
        if c.space.degree_of(x) % 2:
            sign = -sign
    return out


def check_algebra(a: PAlgebra) -> CheckReport:
    """Compatibility with d, equivariance and operadic associativity."""
    report = CheckReport(f"algebra {a.name}")
    try:
        a.complex.validate()
    except NotAComplex as exc:
        report.add("complex", degree=exc.degree)
        return report
    P = a.operad
    space = a.space
    label = lambda word: [space.label(g) for g in word]
    for n in a.arities():
        for b in range(P.dim(n)):
            for word in words_upto(a, n):
                report.tick()
                lhs: SparseVector = {}
                for g, v in a.op_word(n, b, word).items():
                    add_into(lhs, a.complex.d_global(g), v)
                rhs = a.op_tensor(n, {b: Fraction(1)}, _tensor_differential(a.complex, word))
                if lhs != rhs:
                    report.add("differential", arity=n, basis=b, inputs=label(word))
            for j in range(n - 1):
                s = transposition(n, j)
                moved = P.act(s, {b: Fraction(1)})
                for word in words_upto(a, n):
                    report.tick()
                    lhs = a.op_tensor(n, moved, {word: Fraction(1)})
                    rhs = a.op_tensor(n, {b: Fraction(1)}, permute_tensor(s, {word: Fraction(1)}, space.degree_of))
                    if lhs != rhs:
                        report.add("equivariance", arity=n, basis=b, generator=j + 1, inputs=label(word))
    for n in a.arities():
        for m in a.arities():
            if n + m - 1 > a.max_arity:
                continue
            for b in range(P.dim(n)):
                for e in range(P.dim(m)):
                    for i in range(n):
                        composite = P.compose_basis(n, b, m, e, i)
                        for word in words_upto(a, n + m - 1):
                            report.tick()
                            lhs = a.op_tensor(n + m - 1, composite, {word: Fraction(1)})
                            inner = a.op_word(m, e, word[i:i + m])
                            rhs = a.op_tensor(
                                n,
                                {b: Fraction(1)},
                                {word[:i] + (g,) + word[i + m:]: v for g, v in inner.items()},
                            )
                            if lhs != rhs:
                                report.add(
                                    "associativity",
                                    arities=[n, m],
                                    basis=[b, e],
                                    position=i + 1,
                                    inputs=label(word),
                                )
    return report


def check_algebra_morphism(f: AlgebraMorphism) -> CheckReport:
    report = CheckReport(f"algebra morphism {f.source.name} -> {f.target.name}")
    if f.source.operad is not f.target.operad and f.source.operad.name != f.target.operad.name:
        report.add("operad", source=f.source.operad.name, target=f.target.operad.name)
        return report
    bad = f.map.failing_degree()
    if bad is not None:
        report.add("chain-map", degree=bad)
    S, T = f.source, f.target
    for n in S.arities():
        for b in range(S.operad.dim(n)):
            for word in words_upto(S, n):
                report.tick()
                lhs = T.op_tensor(n, {b: Fraction(1)}, apply_factorwise({word: Fraction(1)}, f.map.global_column))
                rhs = f.map.apply_global(S.op_word(n, b, word))
                if lhs != rhs:
                    report.add("operation", arity=n, basis=b, inputs=[S.space.label(g) for g in word])
    return report


# --- free algebras ---


def _product_column(operad: Operad, value: SchurValue, n: int, b: int, word: tuple[int, ...]) -> SparseVector:
    reps = [value.representative(g) for g in word]
    if sum(len(t) for _, t in reps) > value.module.max_arity:
        return {}
    letters = tuple(x for _, t in reps for x in t)
    out: SparseVector = {}
    for choice in itertools.product(*(sorted(m.items()) for m, _ in reps)):
        coeff = Fraction(1)
        for _, v in choice:
            coeff *= v
        parts = tuple((len(t), a) for (a, _), (_, t) in zip(choice, reps))
        add_into(out, value.image_of_word(operad.total(n, b, parts), {letters: Fraction(1)}), coeff)
    return out


def free_algebra(operad: Operad, v: ChainComplex, name: str | None = None) -> PAlgebra:
    """``P(V) = ⊕_n P(n) ⊗_{Σ_n} V^{⊗n}`` with ``γ`` given by operadic composition."""
    require_connected(operad)
    N = min(operad.max_arity, v.max_degree)
    value = SchurValue(operad.module.truncated(N), v, name or f"{operad.name}({v.name})")
    words = TensorBasis(value.space)

    def provider(n, b, d):
        columns = [value.space.to_local(_product_column(operad, value, n, b, w))[1] for w in words.words(n, d)]
        return LinearMap.from_columns(columns, value.dim(d))

    algebra = PAlgebra(operad, value.complex, provider, value.name, free_on=value)
    algebra._cache["words"] = words
    logger.debug(f"free algebra {value.name}: dims {value.dims}")
    return algebra


def free_value(a: PAlgebra) -> SchurValue:
    if not isinstance(a.free_on, SchurValue):
        raise DegreeMismatch(f"{a.name} is not a free algebra")
    return a.free_on


def _unit_vector(operad: Operad) -> SparseVector:
    return {k: v for k, v in enumerate(operad.unit) if v}


def free_unit(a: PAlgebra) -> ChainMap:
    """The generator inclusion ``η : V -> P(V)``."""
    value = free_value(a)
    unit = _unit_vector(a.operad)
    columns = [value.image_of_word(unit, {(g,): Fraction(1)}) for g in range(value.space_in.total_dim)]
    return ChainMap.from_global_columns(value.argument, a.complex, columns)


def free_extension(free: PAlgebra, target: PAlgebra, g: ChainMap) -> AlgebraMorphism:
    """The algebra morphism ``P(V) -> A`` extending ``g : V -> A``."""
    value = free_value(free)
    if g.source.space.total_dim != value.space_in.total_dim:
        raise DegreeMismatch("extension: chain map source is not the generators")
    unit = _unit_vector(free.operad)
    k0 = next(iter(unit))
    columns: list[SparseVector] = []
    for x in range(free.space.total_dim):
        m, t0 = value.representative(x)
        if len(t0) == 1:
            columns.append({y: v * m.get(k0, 0) / unit[k0] for y, v in g.global_column(t0[0]).items()})
            continue
        pushed = apply_factorwise({t0: Fraction(1)}, g.global_column)
        columns.append(target.op_tensor(len(t0), m, pushed) if len(t0) <= target.max_arity else {})
    ext = ChainMap.from_global_columns(free.complex, target.complex, columns)
    return AlgebraMorphism(free, target, ext, provenance="free_extension")


def free_map(h: ChainMap, source: PAlgebra, target: PAlgebra) -> AlgebraMorphism:
    """``P(h) : P(V) -> P(W)``."""
    m = schur_map(free_value(source), free_value(target), h)
    return AlgebraMorphism(source, target, ChainMap(source.complex, target.complex, m.components), FreeMapTag(h))


def monad_multiplication(operad: Operad, v: ChainComplex, inner: PAlgebra | None = None) -> AlgebraMorphism:
    """``γ_V : P(P(V)) -> P(V)``, the extension of the identity."""
    inner = inner or free_algebra(operad, v)
    outer = free_algebra(operad, inner.complex)
    return free_extension(outer, inner, ChainMap.identity(inner.complex))


# --- ideals and quotients ---


def _one_step(a: PAlgebra, d: int, vec: SparseVector) -> Iterator[tuple[int, SparseVector]]:
    """Images of ``vec ∈ A_d`` under d and under every operation with basis
    elements in the other slots, as local vectors."""
    if d >= 2:
        yield d - 1, a.complex.d(d).apply(vec)
    gvec = a.space.to_global(d, vec)
    for n in a.arities():
        for b in range(a.operad.dim(n)):
            for pos in range(n):
                for rest in range(n - 1, a.max_degree - d + 1):
                    for others in a.words.words(n - 1, rest):
                        tensor = {others[:pos] + (g,) + others[pos:]: v for g, v in gvec.items()}
                        dd, local = a.space.to_local(a.op_tensor(n, {b: Fraction(1)}, tensor))
                        if dd is not None:
                            yield dd, local


def ideal_closure(a: PAlgebra, generators: Mapping[int, Sequence[Mapping[int, Fraction]]]) -> dict[int, LinearMap]:
    """Per degree, a basis of the dg ideal generated by local vectors."""
    spans: dict[int, list[SparseVector]] = {d: [] for d in a.space.degrees}
    queue: deque[tuple[int, SparseVector]] = deque()

    def offer(d: int, vec: Mapping[int, Fraction]) -> None:
        vec = {i: Fraction(v) for i, v in vec.items() if v}
        if not vec:
            return
        basis = spans[d]
        if LinearMap.from_columns(basis + [vec], a.complex.dim(d)).rank() > len(basis):
            basis.append(vec)
            queue.append((d, vec))

    for d, vecs in sorted(generators.items()):
        for vec in vecs:
            offer(d, vec)
    while queue:
        d, vec = queue.popleft()
        for dd, image in _one_step(a, d, vec):
            offer(dd, image)
    return {d: LinearMap.from_columns(spans[d], a.complex.dim(d)) for d in a.space.degrees}


def quotient_algebra(
    a: PAlgebra, ideal: Mapping[int, LinearMap], name: str | None = None
) -> tuple[AlgebraMorphism, dict[int, LinearMap]]:
    """Divide ``a`` by a dg ideal; returns the projection and linear sections.

    Raises ``IllFormed`` if the span is not closed under d or the operations.
    """
    name = name or f"{a.name}/I"
    D = a.max_degree
    rel = {d: ideal.get(d, LinearMap.zero(a.complex.dim(d), 0)) for d in range(1, D + 1)}
    quots = {d: quotient(a.complex.dim(d), rel[d]) for d in range(1, D + 1)}
    proj = {d: q.projection for d, q in quots.items()}
    sect = {d: q.section for d, q in quots.items()}
    for d in range(1, D + 1):
        for r in rel[d].columns:
            for dd, image in _one_step(a, d, r):
                if proj[dd].apply(image):
                    raise IllFormed(f"{name}: relations are not an ideal (degree {d} -> {dd})")
    labels = tuple(
        tuple(a.complex.space.labels[d - 1][next(iter(col))] for col in sect[d].columns)
        for d in range(1, D + 1)
    )
    space = GradedSpace(D, labels)
    diffs = {d: proj[d - 1] @ a.complex.d(d) @ sect[d] for d in range(2, D + 1)}
    q_complex = ChainComplex(space, diffs, name)
    words = TensorBasis(space)

    def lifted(g: int) -> SparseVector:
        d, i = space.local(g)
        return a.space.to_global(d, sect[d].column(i))

    def provider(n, b, d):
        columns = []
        for word in words.words(n, d):
            image = a.op_tensor(n, {b: Fraction(1)}, tensor_product([lifted(g) for g in word]))
            columns.append(proj[d].apply(a.space.to_local(image)[1]) if image else {})
        return LinearMap.from_columns(columns, space.dim(d))

    q = PAlgebra(a.operad, q_complex, provider, name)
    logger.debug(f"quotient {name}: dims {q_complex.dims}")
    return AlgebraMorphism(a, q, ChainMap(a.complex, q_complex, proj)), sect
