"""The finite dimensional sub-coalgebra generated by one homogeneous element."""

from __future__ import annotations

from collections import deque
from fractions import Fraction
from typing import Mapping

from opmodel.coalgebras.structure import CoalgebraMorphism, PCoalgebra, subcoalgebra
from opmodel.core.errors import DegreeMismatch
from opmodel.core.linalg import LinearMap, SparseVector
from opmodel.core.logging import get_logger


def finite_subcoalgebra(
    c: PCoalgebra, degree: int, vector: Mapping[int, Fraction], name: str | None = None
) -> CoalgebraMorphism:
    """Inclusion of the smallest sub-coalgebra containing ``vector`` (in ``C_degree``).

    Saturates the span under d and under every slice of every cooperation:
    fixing all factors of a word but one gives a vector that must lie in
    the sub-coalgebra. Slices have strictly smaller degree, so the loop stops
    and the result vanishes above ``degree``.
    """
    log = get_logger("opmodel.coalgebras.closure")
    if degree < 1 or degree > c.max_degree:
        raise DegreeMismatch(f"degree {degree} outside 1..{c.max_degree}")
    spans: dict[int, list[SparseVector]] = {d: [] for d in c.space.degrees}
    queue: deque[tuple[int, SparseVector]] = deque()

    def offer(d: int, vec: SparseVector) -> None:
        if not vec:
            return
        basis = spans[d]
        if LinearMap.from_columns(basis + [vec], c.complex.dim(d)).rank() > len(basis):
            basis.append(dict(vec))
            queue.append((d, vec))

    offer(degree, {i: Fraction(v) for i, v in vector.items() if v})
    while queue:
        d, vec = queue.popleft()
        if d >= 2:
            offer(d - 1, c.complex.d(d).apply(vec))
        gvec = c.space.to_global(d, vec)
        for n in c.arities():
            for b in range(c.operad.dim(n)):
                tensor = c.coop_vector(n, {b: Fraction(1)}, gvec)
                for pos in range(n):
                    slices: dict[tuple[int, ...], SparseVector] = {}
                    for word, v in sorted(tensor.items()):
                        key = word[:pos] + word[pos + 1:]
                        slices.setdefault(key, {})[word[pos]] = v
                    for key in sorted(slices):
                        dd, local = c.space.to_local(slices[key])
                        if dd is not None:
                            offer(dd, local)
    emb = {d: LinearMap.from_columns(spans[d], c.complex.dim(d)) for d in c.space.degrees}
    inclusion = subcoalgebra(c, emb, name or f"<{c.name}>")
    log.debug(f"finite sub-coalgebra of {c.name}: dims {inclusion.source.complex.dims}")
    return inclusion
