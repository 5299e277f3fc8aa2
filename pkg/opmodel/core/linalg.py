"""Exact rational linear algebra.

Matrices are sympy ``DomainMatrix`` objects over ``QQ`` kept in sparse
format. Every public value that leaves this module is a
``fractions.Fraction`` so callers never see domain elements.

A ``LinearMap`` of shape ``(m, n)`` maps K^n to K^m; column ``j`` is the
image of the ``j``-th basis vector.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from opmodel.core.errors import DegreeMismatch, Inconsistent

Scalar = Fraction
SparseVector = dict[int, Fraction]


# --- scalars ---


def parse_scalar(value) -> Fraction:
    """Parse ``"p/q"``, an integer or a Fraction into an exact scalar."""
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot read a scalar from {value!r}")


def format_scalar(value) -> str:
    return str(Fraction(value))


def _qq(value: Fraction):
    value = Fraction(value)
    return QQ(value.numerator, value.denominator)


def _frac(element) -> Fraction:
    return Fraction(int(element.numerator), int(element.denominator))


def _dm(entries: Mapping[tuple[int, int], Fraction], shape: tuple[int, int]) -> DomainMatrix:
    rows: dict[int, dict[int, object]] = {}
    for (i, j), v in entries.items():
        if v:
            rows.setdefault(i, {})[j] = _qq(v)
    return DomainMatrix(rows, shape, QQ)


def _read(matrix: DomainMatrix) -> dict[tuple[int, int], Fraction]:
    out: dict[tuple[int, int], Fraction] = {}
    for i, row in matrix.to_sparse().rep.items():
        for j, v in row.items():
            if v:
                out[(i, j)] = _frac(v)
    return out


def add_into(acc: dict, vector: Mapping, scale: Fraction = Fraction(1)) -> dict:
    """Accumulate ``scale * vector`` into ``acc``, dropping zero entries."""
    if not scale:
        return acc
    for key, v in vector.items():
        total = acc.get(key, 0) + scale * v
        if total:
            acc[key] = total
        else:
            acc.pop(key, None)
    return acc


# --- linear maps ---


@dataclass(frozen=True, eq=False)
class LinearMap:
    matrix: DomainMatrix

    @classmethod
    def from_entries(
        cls, entries: Mapping[tuple[int, int], Fraction], rows: int, cols: int
    ) -> "LinearMap":
        return cls(_dm(entries, (rows, cols)))

    @classmethod
    def from_columns(cls, columns: Sequence[Mapping[int, Fraction]], rows: int) -> "LinearMap":
        entries = {(i, j): v for j, col in enumerate(columns) for i, v in col.items()}
        return cls.from_entries(entries, rows, len(columns))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "LinearMap":
        if cols is None:
            cols = len(rows[0]) if rows else 0
        entries = {}
        for i, row in enumerate(rows):
            if len(row) != cols:
                raise DegreeMismatch(f"row {i} has {len(row)} entries, expected {cols}")
            for j, v in enumerate(row):
                entries[(i, j)] = parse_scalar(v)
        return cls.from_entries(entries, len(rows), cols)

    @classmethod
    def zero(cls, rows: int, cols: int) -> "LinearMap":
        return cls.from_entries({}, rows, cols)

    @classmethod
    def identity(cls, n: int) -> "LinearMap":
        return cls.from_entries({(i, i): Fraction(1) for i in range(n)}, n, n)

    @classmethod
    def block_diagonal(cls, *maps: "LinearMap") -> "LinearMap":
        entries = {}
        r0 = c0 = 0
        for m in maps:
            for (i, j), v in m.entries.items():
                entries[(r0 + i, c0 + j)] = v
            r0 += m.rows
            c0 += m.cols
        return cls.from_entries(entries, r0, c0)

    @classmethod
    def hstack(cls, maps: Sequence["LinearMap"], rows: int | None = None) -> "LinearMap":
        if not maps:
            return cls.zero(rows or 0, 0)
        rows = maps[0].rows
        entries = {}
        c0 = 0
        for m in maps:
            if m.rows != rows:
                raise DegreeMismatch("hstack of maps with different row counts")
            for (i, j), v in m.entries.items():
                entries[(i, c0 + j)] = v
            c0 += m.cols
        return cls.from_entries(entries, rows, c0)

    @classmethod
    def vstack(cls, maps: Sequence["LinearMap"], cols: int | None = None) -> "LinearMap":
        if not maps:
            return cls.zero(0, cols or 0)
        cols = maps[0].cols
        entries = {}
        r0 = 0
        for m in maps:
            if m.cols != cols:
                raise DegreeMismatch("vstack of maps with different column counts")
            for (i, j), v in m.entries.items():
                entries[(r0 + i, j)] = v
            r0 += m.rows
        return cls.from_entries(entries, r0, cols)

    # --- shape and entries ---

    @property
    def rows(self) -> int:
        return self.matrix.shape[0]

    @property
    def cols(self) -> int:
        return self.matrix.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape

    @cached_property
    def entries(self) -> dict[tuple[int, int], Fraction]:
        return _read(self.matrix)

    @cached_property
    def columns(self) -> tuple[SparseVector, ...]:
        cols: list[SparseVector] = [{} for _ in range(self.cols)]
        for (i, j), v in self.entries.items():
            cols[j][i] = v
        return tuple(cols)

    def column(self, j: int) -> SparseVector:
        return self.columns[j]

    def dense(self) -> list[list[Fraction]]:
        out = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, LinearMap):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    __hash__ = None

    def __repr__(self) -> str:
        return f"LinearMap({self.rows}x{self.cols}, nnz={len(self.entries)})"

    # --- arithmetic ---

    def apply(self, vector: Mapping[int, Fraction]) -> SparseVector:
        out: SparseVector = {}
        for j, c in vector.items():
            add_into(out, self.columns[j], c)
        return out

    def compose(self, other: "LinearMap") -> "LinearMap":
        """Return ``self ∘ other``."""
        if self.cols != other.rows:
            raise DegreeMismatch(f"cannot compose {self.shape} after {other.shape}")
        if 0 in (self.rows, other.cols, self.cols):
            return LinearMap.zero(self.rows, other.cols)
        return LinearMap(self.matrix.matmul(other.matrix))

    __matmul__ = compose

    def __add__(self, other: "LinearMap") -> "LinearMap":
        if self.shape != other.shape:
            raise DegreeMismatch(f"cannot add {self.shape} and {other.shape}")
        if 0 in self.shape:
            return self
        return LinearMap(self.matrix + other.matrix)

    def __sub__(self, other: "LinearMap") -> "LinearMap":
        if self.shape != other.shape:
            raise DegreeMismatch(f"cannot subtract {other.shape} from {self.shape}")
        if 0 in self.shape:
            return self
        return LinearMap(self.matrix - other.matrix)

    def __neg__(self) -> "LinearMap":
        return self.scale(Fraction(-1))

    def scale(self, c) -> "LinearMap":
        c = Fraction(c)
        return LinearMap.from_entries(
            {k: c * v for k, v in self.entries.items()}, self.rows, self.cols
        )

    def transpose(self) -> "LinearMap":
        return LinearMap.from_entries(
            {(j, i): v for (i, j), v in self.entries.items()}, self.cols, self.rows
        )

    @property
    def T(self) -> "LinearMap":
        return self.transpose()

    def select_rows(self, indices: Sequence[int]) -> "LinearMap":
        pos = {r: k for k, r in enumerate(indices)}
        return LinearMap.from_entries(
            {(pos[i], j): v for (i, j), v in self.entries.items() if i in pos},
            len(indices),
            self.cols,
        )

    def select_columns(self, indices: Sequence[int]) -> "LinearMap":
        pos = {c: k for k, c in enumerate(indices)}
        return LinearMap.from_entries(
            {(i, pos[j]): v for (i, j), v in self.entries.items() if j in pos},
            self.rows,
            len(indices),
        )

    def kron(self, other: "LinearMap") -> "LinearMap":
        entries = {}
        for (i, j), a in self.entries.items():
            for (k, l), b in other.entries.items():
                entries[(i * other.rows + k, j * other.cols + l)] = a * b
        return LinearMap.from_entries(
            entries, self.rows * other.rows, self.cols * other.cols
        )

    # --- rank predicates ---

    def is_zero(self) -> bool:
        return not self.entries

    def rank(self) -> int:
        if 0 in self.shape or not self.entries:
            return 0
        return len(self.pivots)

    @cached_property
    def pivots(self) -> tuple[int, ...]:
        return rref(self)[1]

    def is_injective(self) -> bool:
        return self.rank() == self.cols

    def is_surjective(self) -> bool:
        return self.rank() == self.rows

    def is_invertible(self) -> bool:
        return self.rows == self.cols and self.is_injective()


# --- row reduction based operations ---


def rref(f: LinearMap) -> tuple[dict[tuple[int, int], Fraction], tuple[int, ...]]:
    """Reduced row echelon form as sparse entries plus pivot columns."""
    if 0 in f.shape or not f.entries:
        return {}, ()
    reduced, pivots = f.matrix.rref()
    return _read(reduced), tuple(pivots)


def kernel(f: LinearMap) -> LinearMap:
    """Basis of ker(f) as the columns of an injective map.

    One basis vector per free column ``j`` of the reduced form: it has a one
    in position ``j`` and minus the reduced entries in the pivot positions.
    """
    n = f.cols
    reduced, pivots = rref(f)
    pivot_set = set(pivots)
    free = [j for j in range(n) if j not in pivot_set]
    columns = []
    for j in free:
        vec: SparseVector = {j: Fraction(1)}
        for r, c in enumerate(pivots):
            v = reduced.get((r, j))
            if v:
                vec[c] = -v
        columns.append(vec)
    return LinearMap.from_columns(columns, n)


def image(f: LinearMap) -> LinearMap:
    """Basis of im(f): the pivot columns of ``f``."""
    return f.select_columns(rref(f)[1])


def solve_columns(f: LinearMap, targets: LinearMap) -> LinearMap:
    """Solve ``f ∘ X = targets`` with every free variable set to zero.

    Raises ``Inconsistent`` when some column of ``targets`` is outside the
    image of ``f``.
    """
    if f.rows != targets.rows:
        raise DegreeMismatch(f"cannot solve {f.shape} against {targets.shape}")
    n = f.cols
    if targets.cols == 0:
        return LinearMap.zero(n, 0)
    if not targets.entries:
        return LinearMap.zero(n, targets.cols)
    augmented = LinearMap.hstack([f, targets])
    reduced, pivots = rref(augmented)
    if pivots and pivots[-1] >= n:
        raise Inconsistent(f"target column {pivots[-1] - n} is not in the image")
    entries = {}
    for r, c in enumerate(pivots):
        for j in range(targets.cols):
            v = reduced.get((r, n + j))
            if v:
                entries[(c, j)] = v
    return LinearMap.from_entries(entries, n, targets.cols)


def solve_affine(f: LinearMap, target: Mapping[int, Fraction]) -> tuple[SparseVector, LinearMap]:
    """Particular solution of ``f x = target`` plus a kernel basis.

    The particular solution is canonical: all free variables are zero.
    """
    col = LinearMap.from_columns([dict(target)], f.rows)
    x = solve_columns(f, col)
    return dict(x.columns[0]) if x.cols else {}, kernel(f)


def left_inverse(f: LinearMap) -> LinearMap:
    """A map ``g`` with ``g ∘ f = id`` for injective ``f``."""
    if not f.is_injective():
        raise Inconsistent("map is not injective, no left inverse")
    if f.cols == 0:
        return LinearMap.zero(0, f.rows)
    return solve_columns(f.transpose(), LinearMap.identity(f.cols)).transpose()


def right_inverse(f: LinearMap) -> LinearMap:
    """A map ``g`` with ``f ∘ g = id`` for surjective ``f``."""
    if not f.is_surjective():
        raise Inconsistent("map is not surjective, no right inverse")
    return solve_columns(f, LinearMap.identity(f.rows))


@dataclass(frozen=True)
class Quotient:
    """The projection K^n -> K^n / S together with a linear section."""

    projection: LinearMap
    section: LinearMap


def quotient(n: int, subspace: LinearMap) -> Quotient:
    """Quotient of K^n by the span of the columns of ``subspace``.

    The complement is spanned by the standard basis vectors outside the
    pivot rows of the subspace basis, so ``section`` is a coordinate
    inclusion and ``projection ∘ section = id``.
    """
    if subspace.rows != n:
        raise DegreeMismatch(f"subspace lives in K^{subspace.rows}, not K^{n}")
    basis = image(subspace)
    r = basis.cols
    pivot_rows = set(rref(basis.transpose())[1])
    free = [i for i in range(n) if i not in pivot_rows]
    section = LinearMap.from_columns([{i: Fraction(1)} for i in free], n)
    change = LinearMap.hstack([basis, section], rows=n)
    inverse = solve_columns(change, LinearMap.identity(n))
    projection = inverse.select_rows(list(range(r, n)))
    return Quotient(projection, section)


def in_span(basis: LinearMap, vector: Mapping[int, Fraction]) -> bool:
    if not vector:
        return True
    try:
        solve_columns(basis, LinearMap.from_columns([dict(vector)], basis.rows))
    except Inconsistent:
        return False
    return True


# --- linear systems over matrix unknowns ---


class LinearSystem:
    """Sparse linear equations over named matrix unknowns.

    Each unknown ``X`` of shape ``(r, c)`` is vectorised row-major. An
    equation block ``Σ sign · L_k X_k R_k = rhs`` adds one scalar equation per
    entry of ``rhs``.
    """

    def __init__(self):
        self._shapes: dict[object, tuple[int, int]] = {}
        self._offsets: dict[object, int] = {}
        self._size = 0
        self._equations: list[tuple[dict[int, Fraction], Fraction]] = []

    @property
    def size(self) -> int:
        return self._size

    def add_unknown(self, key, rows: int, cols: int) -> None:
        if key in self._shapes:
            return
        self._shapes[key] = (rows, cols)
        self._offsets[key] = self._size
        self._size += rows * cols

    def index(self, key, r: int, c: int) -> int:
        return self._offsets[key] + r * self._shapes[key][1] + c

    def add_block(
        self,
        terms: Iterable[tuple[object, LinearMap | None, LinearMap | None, int]],
        rhs: LinearMap | None = None,
        shape: tuple[int, int] | None = None,
    ) -> None:
        """Add ``Σ sign · left · X_key · right = rhs``; ``None`` means identity."""
        rows: dict[tuple[int, int], dict[int, Fraction]] = {}
        for key, left, right, sign in terms:
            xr, xc = self._shapes[key]
            left_entries = (
                left.entries.items()
                if left is not None
                else (((i, i), Fraction(1)) for i in range(xr))
            )
            right_cols: dict[int, list[tuple[int, Fraction]]] = {}
            if right is not None:
                for (c, j), v in right.entries.items():
                    right_cols.setdefault(c, []).append((j, v))
            else:
                right_cols = {c: [(c, Fraction(1))] for c in range(xc)}
            for (i, r), lv in left_entries:
                for c, outs in right_cols.items():
                    idx = self.index(key, r, c)
                    for j, rv in outs:
                        eq = rows.setdefault((i, j), {})
                        total = eq.get(idx, 0) + sign * lv * rv
                        if total:
                            eq[idx] = total
                        else:
                            eq.pop(idx, None)
        rhs_entries = rhs.entries if rhs is not None else {}
        if shape is None and rhs is not None:
            shape = rhs.shape
        keys = set(rows) | set(rhs_entries)
        for pos in sorted(keys):
            self._equations.append((rows.get(pos, {}), rhs_entries.get(pos, Fraction(0))))

    def _matrix(self) -> tuple[LinearMap, SparseVector]:
        entries = {}
        rhs = {}
        for k, (coeffs, value) in enumerate(self._equations):
            for idx, v in coeffs.items():
                entries[(k, idx)] = v
            if value:
                rhs[k] = value
        return LinearMap.from_entries(entries, len(self._equations), self._size), rhs

    def _unpack(self, vector: Mapping[int, Fraction]) -> dict[object, LinearMap]:
        out = {}
        for key, (r, c) in self._shapes.items():
            off = self._offsets[key]
            entries = {}
            for i in range(r):
                for j in range(c):
                    v = vector.get(off + i * c + j)
                    if v:
                        entries[(i, j)] = v
            out[key] = LinearMap.from_entries(entries, r, c)
        return out

    def solve(self) -> dict[object, LinearMap]:
        """Canonical solution (free variables zero); raises ``Inconsistent``."""
        matrix, rhs = self._matrix()
        if matrix.rows == 0:
            return self._unpack({})
        x, _ = solve_affine(matrix, rhs)
        return self._unpack(x)

    def solve_with_kernel(self) -> tuple[dict[object, LinearMap], list[dict[object, LinearMap]]]:
        matrix, rhs = self._matrix()
        if matrix.rows == 0:
            x: SparseVector = {}
            basis = kernel(LinearMap.zero(0, self._size))
        else:
            x, basis = solve_affine(matrix, rhs)
        return self._unpack(x), [self._unpack(col) for col in basis.columns]

    def is_consistent(self) -> bool:
        try:
            self.solve()
        except Inconsistent:
            return False
        return True
