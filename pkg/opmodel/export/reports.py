"""Deterministic JSON report envelopes.

A report records the tool version, the verb, the flags and the SHA-256 of
every input file next to the result, so that two runs with identical inputs
and seeds are byte-identical.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path


def file_digest(path: Path | str) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _plain(value):
    if isinstance(value, Fraction):
        return str(value)
    if hasattr(value, "item"):
        # numpy scalars
        return value.item()
    if isinstance(value, (set, frozenset)):
        return sorted(value)
    return str(value)


@dataclass
class Report:
    command: str
    version: str
    flags: dict = field(default_factory=dict)
    inputs: list[str] = field(default_factory=list)
    result: dict = field(default_factory=dict)
    ok: bool = True

    def to_dict(self) -> dict:
        return {
            "tool": "opmodel",
            "version": self.version,
            "command": self.command,
            "flags": self.flags,
            "inputs": [{"path": str(p), "sha256": file_digest(p)} for p in self.inputs],
            "ok": self.ok,
            "result": self.result,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, ensure_ascii=False, default=_plain) + "\n"

    def write(self, path: Path | str) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.dumps(), encoding="utf-8")
        return path
