"""Result containers for exact property checks."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Violation:
    rule: str
    witness: dict


@dataclass
class CheckReport:
    subject: str
    violations: list[Violation] = field(default_factory=list)
    checked: int = 0

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def tick(self, count: int = 1) -> None:
        self.checked += count

    def add(self, rule: str, **witness) -> None:
        self.violations.append(Violation(rule, witness))

    def extend(self, other: "CheckReport") -> None:
        self.violations.extend(other.violations)
        self.checked += other.checked

    def first(self) -> Violation | None:
        return self.violations[0] if self.violations else None

    def to_dict(self) -> dict:
        return {
            "subject": self.subject,
            "ok": self.ok,
            "checked": self.checked,
            "violations": [
                {"rule": v.rule, "witness": v.witness} for v in self.violations
            ],
        }
