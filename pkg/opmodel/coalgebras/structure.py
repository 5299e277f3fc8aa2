"""P-coalgebras in truncated chain complexes and their morphisms.

A coalgebra stores, for every arity ``n`` in ``2..min(N, D)``, every basis
element ``p_b`` of ``P(n)`` and every degree ``d``, the matrix of
``ρ_b : C_d -> (C^{⊗n})_d``. Rows follow the lexicographic word order of
``TensorBasis``. Matrices may be produced lazily by a provider.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from opmodel.core.checks import CheckReport
from opmodel.core.complexes import ChainComplex, ChainMap, GradedSpace, direct_sum, sum_inclusion, sum_projection
from opmodel.core.errors import DegreeMismatch, IllFormed, NotAComplex
from opmodel.core.linalg import LinearMap, SparseVector, add_into, kernel, left_inverse, quotient
from opmodel.core.tensors import Tensor, TensorBasis, apply_at, apply_factorwise, permute_tensor, transposition
from opmodel.operads.operad import Operad

Provider = Callable[[int, int, int], LinearMap]


@dataclass(frozen=True, eq=False)
class PCoalgebra:
    operad: Operad
    complex: ChainComplex
    provider: Provider | None = None
    name: str = "C"
    # set when this is the cofree coalgebra on some complex
    cofree_of: object = None
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False)
    _columns: dict = field(default_factory=dict, init=False, repr=False, compare=False)

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

    def cooperation(self, n: int, b: int, d: int) -> LinearMap:
        key = (n, b, d)
        if key not in self._cache:
            rows = self.words.dim(n, d)
            cols = self.complex.dim(d)
            if self.provider is None or n > d or rows == 0 or cols == 0:
                table = LinearMap.zero(rows, cols)
            else:
                table = self.provider(n, b, d)
                if table.shape != (rows, cols):
                    raise DegreeMismatch(
                        f"{self.name}: cooperation ({n},{b}) in degree {d} has shape "
                        f"{table.shape}, expected {(rows, cols)}"
                    )
            self._cache[key] = table
        return self._cache[key]

    def coop_global(self, n: int, b: int, g: int) -> Tensor:
        """``ρ_b`` of the basis vector with global index ``g``, as a sparse tensor."""
        key = (n, b, g)
        if key not in self._columns:
            d, i = self.space.local(g)
            col = self.cooperation(n, b, d).column(i)
            words = self.words.words(n, d)
            self._columns[key] = {words[r]: v for r, v in col.items()}
        return self._columns[key]

    def coop_vector(self, n: int, p: Mapping[int, Fraction], vector: Mapping[int, Fraction]) -> Tensor:
        """``ρ_p(x)`` for ``p`` a vector of ``P(n)`` and ``x`` a global vector."""
        out: Tensor = {}
        for b, pv in p.items():
            for g, xv in vector.items():
                add_into(out, self.coop_global(n, b, g), pv * xv)
        return out

    def tables(self) -> dict[tuple[int, int], dict[int, LinearMap]]:
        return {
            (n, b): {d: self.cooperation(n, b, d) for d in self.complex.space.degrees}
            for n in self.arities()
            for b in range(self.operad.dim(n))
        }

    def is_primitive(self) -> bool:
        return all(t.is_zero() for per in self.tables().values() for t in per.values())

    @classmethod
    def from_tables(
        cls,
        operad: Operad,
        complex: ChainComplex,
        tables: Mapping[tuple[int, int], Mapping[int, LinearMap]],
        name: str = "C",
        cofree_of=None,
    ) -> "PCoalgebra":
        def provider(n, b, d):
            per = tables.get((n, b), {})
            if d in per:
                return per[d]
            return LinearMap.zero(TensorBasis(complex.space).dim(n, d), complex.dim(d))

        return cls(operad, complex, provider, name, cofree_of)

    @classmethod
    def trivial(cls, operad: Operad, complex: ChainComplex, name: str | None = None) -> "PCoalgebra":
        """Zero cooperations: every element is primitive."""
        return cls(operad, complex, None, name or complex.name)

    def with_cooperation(self, n: int, b: int, d: int, table: LinearMap) -> "PCoalgebra":
        tables = self.tables()
        tables.setdefault((n, b), {})[d] = table
        return PCoalgebra.from_tables(self.operad, self.complex, tables, self.name)


def table_from_columns(coalgebra_words: TensorBasis, n: int, d: int, columns: Sequence[Tensor]) -> LinearMap:
    rows = coalgebra_words.dim(n, d)
    entries = {}
    for j, tensor in enumerate(columns):
        for word, v in tensor.items():
            entries[(coalgebra_words.index(word), j)] = v
    return LinearMap.from_entries(entries, rows, len(columns))


@dataclass(frozen=True, eq=False)
class CoalgebraMorphism:
    source: PCoalgebra
    target: PCoalgebra
    map: ChainMap
    # optional tag describing how the morphism was built
    provenance: object = None

    def component(self, d: int) -> LinearMap:
        return self.map.component(d)

    def compose(self, other: "CoalgebraMorphism") -> "CoalgebraMorphism":
        """``self ∘ other``."""
        return CoalgebraMorphism(other.source, self.target, self.map.compose(other.map))

    __matmul__ = compose

    def __eq__(self, other) -> bool:
        if not isinstance(other, CoalgebraMorphism):
            return NotImplemented
        return self.map == other.map

    __hash__ = None

    @classmethod
    def identity(cls, c: PCoalgebra) -> "CoalgebraMorphism":
        return cls(c, c, ChainMap.identity(c.complex))

    @classmethod
    def zero(cls, source: PCoalgebra, target: PCoalgebra) -> "CoalgebraMorphism":
        return cls(source, target, ChainMap.zero(source.complex, target.complex))


# --- checks ---


def tensor_differential(c: ChainComplex, tensor: Mapping[tuple[int, ...], Fraction]) -> Tensor:
    """Koszul-signed differential of a sparse tensor over ``c``."""
    out: Tensor = {}
    for word, coeff in tensor.items():
        sign = 1
        for k, x in enumerate(word):
            for y, v in c.d_global(x).items():
                add_into(out, {word[:k] + (y,) + word[k + 1:]: Fraction(sign)}, coeff * v)
            if c.space.degree_of(x) % 2:
                sign = -sign
    return out


def check_coalgebra(c: PCoalgebra) -> CheckReport:
    """Compatibility with d, equivariance and operadic coassociativity."""
    report = CheckReport(f"coalgebra {c.name}")
    try:
        c.complex.validate()
    except NotAComplex as exc:
        report.add("complex", degree=exc.degree)
        return report
    P = c.operad
    space = c.space
    degree_of = space.degree_of
    basis = range(space.total_dim)
    for n in c.arities():
        for b in range(P.dim(n)):
            for g in basis:
                report.tick()
                lhs = c.coop_vector(n, {b: Fraction(1)}, c.complex.d_global(g))
                rhs = tensor_differential(c.complex, c.coop_global(n, b, g))
                if lhs != rhs:
                    report.add("differential", arity=n, basis=b, element=space.label(g))
            for j in range(n - 1):
                s = transposition(n, j)
                moved = P.act(s, {b: Fraction(1)})
                for g in basis:
                    report.tick()
                    lhs = c.coop_vector(n, moved, {g: Fraction(1)})
                    rhs = permute_tensor(s, c.coop_global(n, b, g), degree_of)
                    if lhs != rhs:
                        report.add(
                            "equivariance",
                            arity=n,
                            basis=b,
                            generator=j + 1,
                            element=space.label(g),
                        )
    for n in c.arities():
        for m in c.arities():
            if n + m - 1 > c.max_arity:
                continue
            for b in range(P.dim(n)):
                for e in range(P.dim(m)):
                    for i in range(n):
                        composite = P.compose_basis(n, b, m, e, i)
                        for g in basis:
                            report.tick()
                            lhs = c.coop_vector(n + m - 1, composite, {g: Fraction(1)})
                            rhs = apply_at(c.coop_global(n, b, g), i, lambda x: c.coop_global(m, e, x))
                            if lhs != rhs:
                                report.add(
                                    "coassociativity",
                                    arities=[n, m],
                                    basis=[b, e],
                                    position=i + 1,
                                    element=space.label(g),
                                )
    return report


def check_morphism(f: CoalgebraMorphism) -> CheckReport:
    report = CheckReport(f"morphism {f.source.name} -> {f.target.name}")
    if f.source.operad is not f.target.operad and f.source.operad.name != f.target.operad.name:
        report.add("operad", source=f.source.operad.name, target=f.target.operad.name)
        return report
    bad = f.map.failing_degree()
    if bad is not None:
        report.add("chain-map", degree=bad)
    S, T = f.source, f.target
    for n in S.arities():
        for b in range(S.operad.dim(n)):
            for g in range(S.space.total_dim):
                report.tick()
                lhs = apply_factorwise(S.coop_global(n, b, g), f.map.global_column)
                rhs = T.coop_vector(n, {b: Fraction(1)}, f.map.global_column(g))
                if lhs != rhs:
                    report.add("cooperation", arity=n, basis=b, element=S.space.label(g))
    return report


# --- sums, sub-coalgebras and quotients ---


@dataclass(frozen=True)
class SumResult:
    coalgebra: PCoalgebra
    inclusions: tuple[CoalgebraMorphism, ...]
    projections: tuple[CoalgebraMorphism, ...]


def direct_sum_coalgebra(*parts: PCoalgebra, name: str = "") -> SumResult:
    """Direct sum with componentwise cooperations (the coproduct)."""
    operad = parts[0].operad
    total = direct_sum(*(p.complex for p in parts), name=name)
    complexes = [p.complex for p in parts]
    incl_maps = [sum_inclusion(complexes, total, k) for k in range(len(parts))]
    words = TensorBasis(total.space)

    def provider(n, b, d):
        columns = []
        for k, part in enumerate(parts):
            for i in range(part.complex.dim(d)):
                g = part.space.global_index(d, i)
                columns.append(apply_factorwise(part.coop_global(n, b, g), incl_maps[k].global_column))
        return table_from_columns(words, n, d, columns)

    coalg = PCoalgebra(operad, total, provider, total.name)
    inclusions = tuple(
        CoalgebraMorphism(part, coalg, incl_maps[k]) for k, part in enumerate(parts)
    )
    projections = tuple(
        CoalgebraMorphism(coalg, part, sum_projection(complexes, total, k))
        for k, part in enumerate(parts)
    )
    return SumResult(coalg, inclusions, projections)


def _global_map(space_from: GradedSpace, space_to: GradedSpace, per_degree: Mapping[int, LinearMap]) -> Callable[[int], SparseVector]:
    cache: dict[int, SparseVector] = {}

    def column(g: int) -> SparseVector:
        if g not in cache:
            d, i = space_from.local(g)
            cache[g] = space_to.to_global(d, per_degree[d].column(i))
        return cache[g]

    return column


def _sub_labels(c: PCoalgebra, embeddings: Mapping[int, LinearMap], name: str) -> tuple[tuple[str, ...], ...]:
    labels = []
    for d in c.space.degrees:
        e = embeddings[d]
        row = []
        for j, col in enumerate(e.columns):
            if len(col) == 1 and next(iter(col.values())) == 1:
                row.append(c.complex.space.labels[d - 1][next(iter(col))])
            else:
                row.append(f"{name}{d}_{j}")
        labels.append(tuple(row))
    return tuple(labels)


def subcoalgebra(c: PCoalgebra, embeddings: Mapping[int, LinearMap], name: str | None = None) -> CoalgebraMorphism:
    """Restrict ``c`` to the subspace spanned by the columns of ``embeddings``.

    Closure under d and every cooperation is verified exactly; the result is
    the inclusion morphism.
    """
    name = name or f"sub({c.name})"
    D = c.max_degree
    emb = {d: embeddings.get(d, LinearMap.zero(c.complex.dim(d), 0)) for d in range(1, D + 1)}
    for d, e in emb.items():
        if not e.is_injective():
            raise DegreeMismatch(f"embedding in degree {d} is not injective")
    inv = {d: left_inverse(e) for d, e in emb.items()}
    space = GradedSpace(D, _sub_labels(c, emb, name))
    diffs = {}
    for d in range(2, D + 1):
        image = c.complex.d(d) @ emb[d]
        restricted = inv[d - 1] @ image
        if emb[d - 1] @ restricted != image:
            raise IllFormed(f"{name}: subspace is not closed under d in degree {d}")
        diffs[d] = restricted
    sub_complex = ChainComplex(space, diffs, name)
    back = _global_map(c.space, space, inv)
    forth = _global_map(space, c.space, emb)
    words = TensorBasis(space)
    tables: dict[tuple[int, int], dict[int, LinearMap]] = {}
    for n in c.arities():
        for b in range(c.operad.dim(n)):
            for d in range(1, D + 1):
                columns = []
                for j in range(space.dim(d)):
                    image = c.coop_vector(n, {b: Fraction(1)}, c.space.to_global(d, emb[d].column(j)))
                    pulled = apply_factorwise(image, back)
                    if apply_factorwise(pulled, forth) != image:
                        raise IllFormed(
                            f"{name}: subspace is not closed under cooperation ({n},{b}) in degree {d}"
                        )
                    columns.append(pulled)
                tables.setdefault((n, b), {})[d] = table_from_columns(words, n, d, columns)
    sub = PCoalgebra.from_tables(c.operad, sub_complex, tables, name)
    return CoalgebraMorphism(sub, c, ChainMap(sub_complex, c.complex, emb))


def quotient_coalgebra(c: PCoalgebra, relations: Mapping[int, LinearMap], name: str | None = None) -> tuple[CoalgebraMorphism, dict[int, LinearMap]]:
    """Divide ``c`` by the span of ``relations``; returns the projection and sections.

    Raises ``IllFormed`` if d or a cooperation does not descend.
    """
    name = name or f"{c.name}/~"
    D = c.max_degree
    rel = {d: relations.get(d, LinearMap.zero(c.complex.dim(d), 0)) for d in range(1, D + 1)}
    quots = {d: quotient(c.complex.dim(d), rel[d]) for d in range(1, D + 1)}
    proj = {d: q.projection for d, q in quots.items()}
    sect = {d: q.section for d, q in quots.items()}
    labels = []
    for d in range(1, D + 1):
        row = []
        for col in sect[d].columns:
            row.append(c.complex.space.labels[d - 1][next(iter(col))])
        labels.append(tuple(row))
    space = GradedSpace(D, tuple(labels))
    diffs = {}
    for d in range(2, D + 1):
        if not (proj[d - 1] @ c.complex.d(d) @ rel[d]).is_zero():
            raise IllFormed(f"{name}: d does not descend in degree {d}")
        diffs[d] = proj[d - 1] @ c.complex.d(d) @ sect[d]
    q_complex = ChainComplex(space, diffs, name)
    down = _global_map(c.space, space, proj)
    words = TensorBasis(space)
    tables: dict[tuple[int, int], dict[int, LinearMap]] = {}
    for n in c.arities():
        for b in range(c.operad.dim(n)):
            for d in range(1, D + 1):
                for r in rel[d].columns:
                    image = c.coop_vector(n, {b: Fraction(1)}, c.space.to_global(d, r))
                    if apply_factorwise(image, down):
                        raise IllFormed(f"{name}: cooperation ({n},{b}) does not descend in degree {d}")
                columns = []
                for s in sect[d].columns:
                    image = c.coop_vector(n, {b: Fraction(1)}, c.space.to_global(d, s))
                    columns.append(apply_factorwise(image, down))
                tables.setdefault((n, b), {})[d] = table_from_columns(words, n, d, columns)
    q = PCoalgebra.from_tables(c.operad, q_complex, tables, name)
    return CoalgebraMorphism(c, q, ChainMap(c.complex, q_complex, proj)), sect


def primitives(c: PCoalgebra) -> dict[int, LinearMap]:
    """Per degree, a basis of the elements killed by every cooperation."""
    out = {}
    for d in c.space.degrees:
        tables = [c.cooperation(n, b, d) for n in c.arities() for b in range(c.operad.dim(n))]
        tables = [t for t in tables if t.rows]
        if not tables:
            out[d] = LinearMap.identity(c.complex.dim(d))
        else:
            out[d] = kernel(LinearMap.vstack(tables, cols=c.complex.dim(d)))
    return out

