"""Truncated chain complexes over the rationals.

Complexes are concentrated in degrees ``1..D`` with differentials of degree
-1; ``d_n : C_n -> C_{n-1}`` is stored for ``n = 2..D``. Homology in the top
degree ``D`` cannot see the missing ``d_{D+1}``, so weak equivalences and
acyclicity are decided on degrees ``1..D-1`` (the *window*).
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Mapping, Sequence

import numpy as np
import pandas as pd

from opmodel.core.errors import DegreeMismatch, Inconsistent, NoLift, NotAComplex
from opmodel.core.linalg import (
    LinearMap,
    LinearSystem,
    SparseVector,
    image,
    kernel,
    left_inverse,
    quotient,
    solve_columns,
)
from opmodel.core.logging import get_logger


# --- graded spaces ---


@dataclass(frozen=True)
class GradedSpace:
    """Finite dimensional graded space with labelled bases in degrees 1..D."""

    max_degree: int
    labels: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        if self.max_degree < 1:
            raise DegreeMismatch("max_degree must be at least 1")
        if len(self.labels) != self.max_degree:
            raise DegreeMismatch(
                f"expected labels for {self.max_degree} degrees, got {len(self.labels)}"
            )

    @classmethod
    def from_dims(cls, max_degree: int, dims: Mapping[int, int], prefix: str = "e") -> "GradedSpace":
        labels = tuple(
            tuple(f"{prefix}{d}_{i}" for i in range(dims.get(d, 0)))
            for d in range(1, max_degree + 1)
        )
        return cls(max_degree, labels)

    @property
    def degrees(self) -> range:
        return range(1, self.max_degree + 1)

    def dim(self, d: int) -> int:
        if d < 1 or d > self.max_degree:
            return 0
        return len(self.labels[d - 1])

    @cached_property
    def dims(self) -> tuple[int, ...]:
        return tuple(len(level) for level in self.labels)

    @cached_property
    def _starts(self) -> tuple[int, ...]:
        starts = [0]
        for n in self.dims:
            starts.append(starts[-1] + n)
        return tuple(starts)

    @property
    def total_dim(self) -> int:
        return self._starts[-1]

    def offset(self, d: int) -> int:
        return self._starts[d - 1]

    def global_index(self, d: int, i: int) -> int:
        return self._starts[d - 1] + i

    def degree_of(self, g: int) -> int:
        return bisect.bisect_right(self._starts, g)

    def local(self, g: int) -> tuple[int, int]:
        d = self.degree_of(g)
        return d, g - self._starts[d - 1]

    def label(self, g: int) -> str:
        d, i = self.local(g)
        return self.labels[d - 1][i]

    def to_global(self, d: int, vector: Mapping[int, Fraction]) -> SparseVector:
        off = self.offset(d)
        return {off + i: v for i, v in vector.items()}

    def to_local(self, vector: Mapping[int, Fraction]) -> tuple[int | None, SparseVector]:
        """Split a homogeneous global vector into ``(degree, local vector)``."""
        if not vector:
            return None, {}
        degrees = {self.degree_of(g) for g in vector}
        if len(degrees) != 1:
            raise DegreeMismatch("vector is not homogeneous")
        d = degrees.pop()
        off = self.offset(d)
        return d, {g - off: v for g, v in vector.items()}


# --- chain complexes ---


@dataclass(frozen=True, eq=False)
class ChainComplex:
    space: GradedSpace
    differentials: Mapping[int, LinearMap] = field(default_factory=dict)
    name: str = "C"

    @property
    def max_degree(self) -> int:
        return self.space.max_degree

    def dim(self, d: int) -> int:
        return self.space.dim(d)

    @property
    def dims(self) -> tuple[int, ...]:
        return self.space.dims

    def d(self, n: int) -> LinearMap:
        """``d_n : C_n -> C_{n-1}``, zero outside the stored range."""
        if 2 <= n <= self.max_degree and n in self.differentials:
            return self.differentials[n]
        return LinearMap.zero(self.dim(n - 1), self.dim(n))

    @cached_property
    def _global_columns(self) -> tuple[SparseVector, ...]:
        cols = []
        for g in range(self.space.total_dim):
            d, i = self.space.local(g)
            if d < 2:
                cols.append({})
            else:
                cols.append(self.space.to_global(d - 1, self.d(d).column(i)))
        return tuple(cols)

    def d_global(self, g: int) -> SparseVector:
        return self._global_columns[g]

    def validate(self) -> "ChainComplex":
        for n in range(2, self.max_degree + 1):
            dn = self.d(n)
            if dn.shape != (self.dim(n - 1), self.dim(n)):
                raise DegreeMismatch(f"d_{n} has shape {dn.shape}")
        for n in range(3, self.max_degree + 1):
            if not (self.d(n - 1) @ self.d(n)).is_zero():
                raise NotAComplex(n)
        return self

    def is_zero(self) -> bool:
        return self.space.total_dim == 0

    @classmethod
    def zero(cls, max_degree: int, name: str = "0") -> "ChainComplex":
        return cls(GradedSpace.from_dims(max_degree, {}), {}, name)


def sphere(n: int, max_degree: int, label: str = "s") -> ChainComplex:
    """One basis vector in degree ``n``."""
    space = GradedSpace.from_dims(max_degree, {n: 1}, prefix=label)
    return ChainComplex(space, {}, f"S^{n}")


def disk(n: int, max_degree: int, label: str = "b") -> ChainComplex:
    """``e_n -> e_{n-1}`` with ``d e_n = e_{n-1}``; acyclic."""
    if n < 2 or n > max_degree:
        raise DegreeMismatch(f"disk D^{n} does not fit in degrees 1..{max_degree}")
    space = GradedSpace.from_dims(max_degree, {n - 1: 1, n: 1}, prefix=label)
    return ChainComplex(space, {n: LinearMap.from_rows([[1]])}, f"D^{n}")


def direct_sum(*complexes: ChainComplex, name: str = "") -> ChainComplex:
    if not complexes:
        raise DegreeMismatch("direct sum of nothing")
    D = complexes[0].max_degree
    if any(c.max_degree != D for c in complexes):
        raise DegreeMismatch("direct sum of complexes with different truncations")
    labels = tuple(
        tuple(lab for c in complexes for lab in c.space.labels[d - 1]) for d in range(1, D + 1)
    )
    diffs = {
        n: LinearMap.block_diagonal(*(c.d(n) for c in complexes)) for n in range(2, D + 1)
    }
    return ChainComplex(
        GradedSpace(D, _dedupe(labels)), diffs, name or "+".join(c.name for c in complexes)
    )


def _dedupe(labels: tuple[tuple[str, ...], ...]) -> tuple[tuple[str, ...], ...]:
    seen: set[str] = set()
    out = []
    for level in labels:
        row = []
        for lab in level:
            cand = lab
            k = 1
            while cand in seen:
                cand = f"{lab}'{k}"
                k += 1
            seen.add(cand)
            row.append(cand)
        out.append(tuple(row))
    return tuple(out)


def sum_inclusion(summands: Sequence[ChainComplex], total: ChainComplex, k: int) -> "ChainMap":
    """Inclusion of the ``k``-th summand of a direct sum."""
    comps = {}
    for d in total.space.degrees:
        before = sum(c.dim(d) for c in summands[:k])
        comps[d] = LinearMap.from_entries(
            {(before + i, i): Fraction(1) for i in range(summands[k].dim(d))},
            total.dim(d),
            summands[k].dim(d),
        )
    return ChainMap(summands[k], total, comps)


def sum_projection(summands: Sequence[ChainComplex], total: ChainComplex, k: int) -> "ChainMap":
    return sum_inclusion(summands, total, k).transposed()


# --- chain maps ---


@dataclass(frozen=True, eq=False)
class ChainMap:
    source: ChainComplex
    target: ChainComplex
    components: Mapping[int, LinearMap]

    def component(self, d: int) -> LinearMap:
        if d in self.components:
            return self.components[d]
        return LinearMap.zero(self.target.dim(d), self.source.dim(d))

    @classmethod
    def identity(cls, c: ChainComplex) -> "ChainMap":
        return cls(c, c, {d: LinearMap.identity(c.dim(d)) for d in c.space.degrees})

    @classmethod
    def zero(cls, source: ChainComplex, target: ChainComplex) -> "ChainMap":
        return cls(source, target, {})

    @classmethod
    def from_global_columns(cls, source, target, columns: Sequence[Mapping[int, Fraction]]) -> "ChainMap":
        comps = {}
        for d in source.space.degrees:
            cols = []
            for i in range(source.dim(d)):
                dd, local = target.space.to_local(columns[source.space.global_index(d, i)])
                if dd is not None and dd != d:
                    raise DegreeMismatch(f"map changes degree {d} to {dd}")
                cols.append(local)
            comps[d] = LinearMap.from_columns(cols, target.dim(d))
        return cls(source, target, comps)

    @cached_property
    def _global_columns(self) -> tuple[SparseVector, ...]:
        cols = []
        for g in range(self.source.space.total_dim):
            d, i = self.source.space.local(g)
            cols.append(self.target.space.to_global(d, self.component(d).column(i)))
        return tuple(cols)

    def global_column(self, g: int) -> SparseVector:
        return self._global_columns[g]

    def apply_global(self, vector: Mapping[int, Fraction]) -> SparseVector:
        out: SparseVector = {}
        for g, c in vector.items():
            for h, v in self._global_columns[g].items():
                out[h] = out.get(h, 0) + c * v
        return {k: v for k, v in out.items() if v}

    def compose(self, other: "ChainMap") -> "ChainMap":
        """``self ∘ other``."""
        return ChainMap(
            other.source,
            self.target,
            {d: self.component(d) @ other.component(d) for d in self.source.space.degrees},
        )

    __matmul__ = compose

    def __add__(self, other: "ChainMap") -> "ChainMap":
        return ChainMap(
            self.source,
            self.target,
            {d: self.component(d) + other.component(d) for d in self.source.space.degrees},
        )

    def __sub__(self, other: "ChainMap") -> "ChainMap":
        return ChainMap(
            self.source,
            self.target,
            {d: self.component(d) - other.component(d) for d in self.source.space.degrees},
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, ChainMap):
            return NotImplemented
        return all(
            self.component(d) == other.component(d) for d in self.source.space.degrees
        )

    __hash__ = None

    def transposed(self) -> "ChainMap":
        return ChainMap(
            self.target,
            self.source,
            {d: self.component(d).transpose() for d in self.source.space.degrees},
        )

    def is_chain_map(self) -> bool:
        return self.failing_degree() is None

    def failing_degree(self) -> int | None:
        for n in range(2, self.source.max_degree + 1):
            lhs = self.target.d(n) @ self.component(n)
            rhs = self.component(n - 1) @ self.source.d(n)
            if lhs != rhs:
                return n
        return None

    def is_injective(self) -> bool:
        return all(self.component(d).is_injective() for d in self.source.space.degrees)

    def is_surjective(self) -> bool:
        return all(self.component(d).is_surjective() for d in self.source.space.degrees)

    def is_iso(self) -> bool:
        return all(self.component(d).is_invertible() for d in self.source.space.degrees)


def copair(maps: Sequence[ChainMap], source: ChainComplex) -> ChainMap:
    """The map out of a direct sum whose restriction to summand k is ``maps[k]``."""
    target = maps[0].target
    return ChainMap(
        source,
        target,
        {d: LinearMap.hstack([m.component(d) for m in maps]) for d in source.space.degrees},
    )


def pair(maps: Sequence[ChainMap], target: ChainComplex) -> ChainMap:
    """The map into a direct sum whose k-th component is ``maps[k]``."""
    source = maps[0].source
    return ChainMap(
        source,
        target,
        {d: LinearMap.vstack([m.component(d) for m in maps]) for d in source.space.degrees},
    )


def sum_of_maps(maps: Sequence[ChainMap], source: ChainComplex, target: ChainComplex) -> ChainMap:
    return ChainMap(
        source,
        target,
        {
            d: LinearMap.block_diagonal(*(m.component(d) for m in maps))
            for d in source.space.degrees
        },
    )


# --- homology ---


@dataclass(frozen=True)
class HomologyDegree:
    cycles: LinearMap
    boundaries: LinearMap
    representatives: LinearMap
    # cycle coordinates -> homology coordinates
    projection: LinearMap


@dataclass(frozen=True)
class HomologyReport:
    max_degree: int
    betti: tuple[int, ...]
    degrees: tuple[HomologyDegree, ...]

    def betti_number(self, n: int) -> int:
        if n < 1 or n > self.max_degree:
            return 0
        return self.betti[n - 1]

    @property
    def window(self) -> range:
        return range(1, self.max_degree)

    def is_acyclic(self) -> bool:
        """Acyclic in the window below the truncation degree."""
        return all(self.betti_number(n) == 0 for n in self.window)

    def representatives(self, n: int) -> LinearMap:
        return self.degrees[n - 1].representatives

    def table(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "degree": list(range(1, self.max_degree + 1)),
                "cycles": [h.cycles.cols for h in self.degrees],
                "boundaries": [h.boundaries.cols for h in self.degrees],
                "betti": list(self.betti),
                "determined": [n < self.max_degree for n in range(1, self.max_degree + 1)],
            }
        )


def homology(c: ChainComplex) -> HomologyReport:
    """Betti numbers and cycle representatives in every degree 1..D.

    The top degree uses ``d_{D+1} = 0`` and is reported as undetermined.
    """
    c.validate()
    levels = []
    for n in c.space.degrees:
        z = kernel(c.d(n))
        b = image(c.d(n + 1))
        coords = solve_columns(z, b)
        q = quotient(z.cols, coords)
        reps = z @ q.section
        levels.append(HomologyDegree(z, b, reps, q.projection))
    betti = tuple(h.representatives.cols for h in levels)
    return HomologyReport(c.max_degree, betti, tuple(levels))


def induced_map(f: ChainMap, n: int, source_h: HomologyReport | None = None, target_h: HomologyReport | None = None) -> LinearMap:
    """``H_n(f)`` in the bases of homology representatives."""
    sh = source_h or homology(f.source)
    th = target_h or homology(f.target)
    reps = sh.representatives(n)
    img = f.component(n) @ reps
    level = th.degrees[n - 1]
    z_coords = solve_columns(level.cycles, img)
    return level.projection @ z_coords


def is_weak_equivalence(f: ChainMap) -> bool:
    sh, th = homology(f.source), homology(f.target)
    for n in sh.window:
        if sh.betti_number(n) != th.betti_number(n):
            return False
        if not induced_map(f, n, sh, th).is_invertible():
            return False
    return True


@dataclass(frozen=True)
class ChainMapFlags:
    weak_equivalence: bool
    fibration: bool
    cofibration: bool

    def to_dict(self) -> dict:
        return {
            "weak_equivalence": self.weak_equivalence,
            "fibration": self.fibration,
            "cofibration": self.cofibration,
        }


def classify_chain_map(f: ChainMap) -> ChainMapFlags:
    if not f.is_chain_map():
        raise NotAComplex(f.failing_degree())
    return ChainMapFlags(
        weak_equivalence=is_weak_equivalence(f),
        fibration=f.is_surjective(),
        cofibration=f.is_injective(),
    )


# --- cones ---


def cone_of_identity(x: ChainComplex) -> tuple[ChainComplex, ChainMap]:
    """Mapping cone of ``id_X`` and the inclusion ``X -> cone``.

    ``V_n = X_{n-1} ⊕ X_n`` with ``d(x', x) = (-d x', x' + d x)``. The cone is
    acyclic in the window; it is fully acyclic when ``X_D = 0``.
    """
    D = x.max_degree
    labels = tuple(
        (tuple(f"s({lab})" for lab in x.space.labels[n - 2]) if n >= 2 else ())
        + x.space.labels[n - 1]
        for n in range(1, D + 1)
    )
    diffs = {}
    for n in range(2, D + 1):
        a, b = x.dim(n - 1), x.dim(n)
        c = x.dim(n - 2)
        top = LinearMap.hstack([-x.d(n - 1), LinearMap.zero(c, b)], rows=c)
        bottom = LinearMap.hstack([LinearMap.identity(a), x.d(n)], rows=a)
        diffs[n] = LinearMap.vstack([top, bottom], cols=a + b)
    cone = ChainComplex(GradedSpace(D, labels), diffs, f"cone({x.name})")
    incl = {
        n: LinearMap.vstack(
            [LinearMap.zero(x.dim(n - 1), x.dim(n)), LinearMap.identity(x.dim(n))],
            cols=x.dim(n),
        )
        for n in range(1, D + 1)
    }
    return cone, ChainMap(x, cone, incl)


# --- solving for maps ---


def _map_system(source: ChainComplex, target: ChainComplex, upto: int) -> LinearSystem:
    system = LinearSystem()
    for d in range(1, upto + 1):
        system.add_unknown(d, target.dim(d), source.dim(d))
    for d in range(2, upto + 1):
        system.add_block(
            [(d, target.d(d), None, 1), (d - 1, None, source.d(d), -1)],
            shape=(target.dim(d - 1), source.dim(d)),
            rhs=LinearMap.zero(target.dim(d - 1), source.dim(d)),
        )
    return system


def _lift_system(i: ChainMap, p: ChainMap, a: ChainMap, b: ChainMap, upto: int) -> LinearSystem:
    system = _map_system(i.target, p.source, upto)
    for d in range(1, upto + 1):
        system.add_block([(d, None, i.component(d), 1)], rhs=a.component(d))
        system.add_block([(d, p.component(d), None, 1)], rhs=b.component(d))
    return system


def chain_lift(i: ChainMap, p: ChainMap, a: ChainMap, b: ChainMap) -> ChainMap:
    """A chain map ``h : B -> X`` with ``h∘i = a`` and ``p∘h = b``.

    All degrees are solved as one linear system, so a lift is found whenever
    one exists. ``NoLift`` names the lowest degree at which the truncated
    problem already has no solution.
    """
    log = get_logger("opmodel.core.complexes")
    B, X = i.target, p.source
    D = B.max_degree
    if p.compose(a) != b.compose(i):
        raise NoLift(1, "square does not commute")
    try:
        solution = _lift_system(i, p, a, b, D).solve()
    except Inconsistent:
        for d in range(1, D + 1):
            if not _lift_system(i, p, a, b, d).is_consistent():
                raise NoLift(d) from None
        raise NoLift(D) from None
    h = ChainMap(B, X, {d: solution[d] for d in range(1, D + 1)})
    log.debug(f"chain lift found for {B.name} -> {X.name}")
    return h


def chain_maps_space(source: ChainComplex, target: ChainComplex) -> list[ChainMap]:
    """A basis of the space of chain maps ``source -> target``."""
    _, basis = _map_system(source, target, source.max_degree).solve_with_kernel()
    return [ChainMap(source, target, sol) for sol in basis]


def random_complex(dims: Mapping[int, int], max_degree: int, rng: np.random.Generator, name: str = "R") -> ChainComplex:
    """A complex with the given dimensions and random small integer differentials.

    Each ``d_n`` is a random combination of a kernel basis of ``d_{n-1}``.
    """
    space = GradedSpace.from_dims(max_degree, dims, prefix="r")
    diffs: dict[int, LinearMap] = {}
    for n in range(2, max_degree + 1):
        below = diffs.get(n - 1, LinearMap.zero(0, space.dim(1)))
        k = kernel(below)
        coeffs = LinearMap.from_entries(
            {(r, c): Fraction(int(rng.integers(-1, 2))) for r in range(k.cols) for c in range(space.dim(n))},
            k.cols,
            space.dim(n),
        )
        diffs[n] = k @ coeffs
    return ChainComplex(space, diffs, name)


def random_chain_map(source: ChainComplex, target: ChainComplex, rng: np.random.Generator) -> ChainMap:
    """A random integer combination of a basis of chain maps."""
    basis = chain_maps_space(source, target)
    out = ChainMap.zero(source, target)
    for m in basis:
        c = int(rng.integers(-1, 2))
        if c:
            out = out + ChainMap(source, target, {d: m.component(d).scale(c) for d in source.space.degrees})
    return out


@dataclass(frozen=True)
class DegreeSolution:
    """All ``h`` with ``L h = R`` and ``h M = K`` for one degree.

    Solutions are ``particular + left_kernel · Z · right_free^T``.
    """

    particular: LinearMap
    left_kernel: LinearMap
    right_free: LinearMap

    def sample(self, rng: np.random.Generator) -> LinearMap:
        k, f = self.left_kernel.cols, self.right_free.cols
        if k == 0 or f == 0:
            return self.particular
        z = LinearMap.from_entries(
            {(r, c): Fraction(int(rng.integers(-1, 2))) for r in range(k) for c in range(f)},
            k,
            f,
        )
        return self.particular + self.left_kernel @ z @ self.right_free.transpose()


def solve_degree(
    rows: int,
    cols: int,
    left: Sequence[tuple[LinearMap, LinearMap]],
    right: Sequence[tuple[LinearMap, LinearMap]],
) -> DegreeSolution:
    """Solve for ``h`` (``rows x cols``) with ``L h = R`` and ``h M = K``.

    Right constraints are solved through the transpose, giving
    ``h = h0 + Y N^T``; left constraints then determine ``Y``. Raises
    ``Inconsistent`` when no ``h`` exists.
    """
    if right:
        m = LinearMap.hstack([mm for mm, _ in right], rows=cols)
        k = LinearMap.hstack([kk for _, kk in right], rows=rows)
        h0 = solve_columns(m.transpose(), k.transpose()).transpose()
        n = kernel(m.transpose())
    else:
        h0 = LinearMap.zero(rows, cols)
        n = LinearMap.identity(cols)
    if not left:
        return DegreeSolution(h0, LinearMap.identity(rows), n)
    l = LinearMap.vstack([ll for ll, _ in left], cols=rows)
    r = LinearMap.vstack([rr for _, rr in left], cols=cols)
    e = r - l @ h0
    if n.cols == 0:
        if not e.is_zero():
            raise Inconsistent("left constraints conflict with right constraints")
        return DegreeSolution(h0, kernel(l), n)
    g = left_inverse(n).transpose()
    f = e @ g
    if f @ n.transpose() != e:
        raise Inconsistent("left constraints conflict with right constraints")
    y = solve_columns(l, f)
    return DegreeSolution(h0 + y @ n.transpose(), kernel(l), n)
