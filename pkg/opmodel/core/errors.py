"""Error hierarchy shared by every engine module.

Every error derives from ``OpmodelError`` (itself a ``ValueError``) so the
command line can map the whole family to the input-error exit code.
"""

from __future__ import annotations


class OpmodelError(ValueError):
    """Base class for all engine errors."""


class InputError(OpmodelError):
    """A file or flag could not be parsed into engine objects.

    ``where`` is the JSON path of the offending value, e.g. ``$.d.2[0][1]``.
    """

    def __init__(self, reason: str, file: str | None = None, where: str | None = None):
        parts = [str(p) for p in (file, where) if p]
        super().__init__(": ".join(parts + [reason]))
        self.reason = reason
        self.file = file
        self.where = where


class Inconsistent(OpmodelError):
    """A linear system has no solution."""


class DegreeMismatch(OpmodelError):
    """Maps or spaces with incompatible shapes or truncation degrees."""


class NotAComplex(OpmodelError):
    def __init__(self, degree: int):
        super().__init__(f"d∘d is not zero at degree {degree}")
        self.degree = degree


class NoLift(OpmodelError):
    def __init__(self, degree: int, reason: str = ""):
        msg = f"no chain lift at degree {degree}"
        super().__init__(f"{msg}: {reason}" if reason else msg)
        self.degree = degree


class NoLiftFound(OpmodelError):
    def __init__(self, degree: int, reason: str = ""):
        msg = f"no coalgebra lift found at degree {degree}"
        super().__init__(f"{msg}: {reason}" if reason else msg)
        self.degree = degree


class BadOperad(OpmodelError):
    """Operad data violates an axiom or a structural requirement."""


class NotCoreflexive(OpmodelError):
    """The common section of an equalizer pair fails s∘d0 = s∘d1 = id."""


class IllFormed(OpmodelError):
    """A constructed object fails its own closure or descent check."""


class ComparisonFailed(OpmodelError):
    def __init__(self, degree: int, reason: str = ""):
        msg = f"comparison map fails at degree {degree}"
        super().__init__(f"{msg}: {reason}" if reason else msg)
        self.degree = degree


class HypothesisFailed(OpmodelError):
    """An input does not satisfy the hypothesis of a checked statement."""


class StageBudgetExhausted(OpmodelError):
    def __init__(self, stages: int, remaining: list):
        super().__init__(
            f"small object argument stopped after {stages} stages "
            f"with {len(remaining)} unlifted squares"
        )
        self.stages = stages
        self.remaining = remaining


class LawInconsistent(OpmodelError):
    """The distributive law recursion produced conflicting values."""
