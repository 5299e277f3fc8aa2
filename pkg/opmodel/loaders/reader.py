"""JSON documents with path-aware error reporting.

Every value read from a file is wrapped in a ``Node`` that remembers the file
and the JSON path leading to it, so a bad entry is reported as e.g.
``coalgebra.json: $.cooperations.2:0.3[1][0]: expected a scalar``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterator

from opmodel.core.errors import InputError
from opmodel.core.linalg import LinearMap, format_scalar, parse_scalar
from opmodel.core.logging import get_logger


@dataclass(frozen=True)
class Node:
    value: object
    file: str
    where: str = "$"
    # directory against which string references are resolved
    base: Path = Path(".")

    def fail(self, reason: str) -> InputError:
        return InputError(reason, self.file, self.where)

    def child(self, key, value) -> "Node":
        step = f"[{key}]" if isinstance(key, int) else f".{key}"
        return Node(value, self.file, self.where + step, self.base)

    def has(self, key: str) -> bool:
        return isinstance(self.value, dict) and key in self.value

    def get(self, key: str, default=...) -> "Node":
        if not isinstance(self.value, dict):
            raise self.fail("expected an object")
        if key not in self.value:
            if default is ...:
                raise self.fail(f"missing field {key!r}")
            return self.child(key, default)
        return self.child(key, self.value[key])

    def items(self) -> Iterator[tuple[str, "Node"]]:
        if not isinstance(self.value, dict):
            raise self.fail("expected an object")
        for key in self.value:
            yield key, self.child(key, self.value[key])

    def elements(self) -> Iterator["Node"]:
        if not isinstance(self.value, list):
            raise self.fail("expected a list")
        for k, v in enumerate(self.value):
            yield self.child(k, v)

    def as_int(self, minimum: int | None = None) -> int:
        if isinstance(self.value, bool) or not isinstance(self.value, int):
            raise self.fail("expected an integer")
        if minimum is not None and self.value < minimum:
            raise self.fail(f"expected an integer >= {minimum}")
        return self.value

    def as_str(self) -> str:
        if not isinstance(self.value, str):
            raise self.fail("expected a string")
        return self.value

    def as_bool(self) -> bool:
        if not isinstance(self.value, bool):
            raise self.fail("expected true or false")
        return self.value

    def as_scalar(self) -> Fraction:
        try:
            return parse_scalar(self.value)
        except (TypeError, ValueError, ZeroDivisionError):
            raise self.fail(f"expected a scalar 'p/q', got {self.value!r}") from None

    def as_vector(self, length: int | None = None) -> tuple[Fraction, ...]:
        out = tuple(e.as_scalar() for e in self.elements())
        if length is not None and len(out) != length:
            raise self.fail(f"expected {length} entries, got {len(out)}")
        return out

    def as_matrix(self, rows: int, cols: int) -> LinearMap:
        """A row-major matrix of the given shape."""
        data = [[e.as_scalar() for e in row.elements()] for row in self.elements()]
        if len(data) != rows or any(len(r) != cols for r in data):
            got = (len(data), len(data[0]) if data else 0)
            raise self.fail(f"expected a {rows}x{cols} matrix, got {got[0]}x{got[1]}")
        return LinearMap.from_entries(
            {(i, j): v for i, row in enumerate(data) for j, v in enumerate(row) if v}, rows, cols
        )

    def as_int_key(self, key: str, minimum: int = 1) -> int:
        try:
            value = int(key)
        except ValueError:
            raise self.fail(f"key {key!r} is not an integer") from None
        if value < minimum:
            raise self.fail(f"key {key!r} is below {minimum}")
        return value

    def resolve(self, ref: str) -> Path:
        return (self.base / ref).resolve()


def read_document(path: Path | str) -> Node:
    logger = get_logger("opmodel.loaders")
    path = Path(path)
    if not path.exists():
        raise InputError("file not found", str(path))
    logger.debug(f"Reading {path}")
    try:
        value = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}", str(path)) from None
    return Node(value, str(path), "$", path.parent)


def reference(node: Node) -> Node:
    """Follow a string reference to another document; objects are inline."""
    if isinstance(node.value, str):
        return read_document(node.resolve(node.value))
    if not isinstance(node.value, dict):
        raise node.fail("expected an object or a file reference")
    return node


def matrix_to_rows(m: LinearMap) -> list[list[str]]:
    return [[format_scalar(v) for v in row] for row in m.dense()]
