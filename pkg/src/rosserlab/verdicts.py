"""Three-valued probe verdicts shared by the reduction and separation suites.

A Fail is always a hard signal (an implementation bug or a broken claim);
Unknown records fuel or budget starvation together with the starving probe,
and never stands in for a definitive answer.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

PASS = "pass"
FAIL = "fail"
UNKNOWN = "unknown"


@dataclass(frozen=True)
class Check:
    clause: str
    point: tuple[int, ...]
    verdict: str
    note: str = ""

    def to_dict(self) -> dict:
        return {
            "clause": self.clause,
            "point": list(self.point),
            "verdict": self.verdict,
            "note": self.note,
        }


@dataclass
class Report:
    name: str
    checks: list[Check] = field(default_factory=list)

    def add(self, check: Check) -> None:
        self.checks.append(check)

    def extend(self, checks: Sequence[Check]) -> None:
        self.checks.extend(checks)

    @property
    def failed(self) -> list[Check]:
        return [c for c in self.checks if c.verdict == FAIL]

    @property
    def unknown(self) -> list[Check]:
        return [c for c in self.checks if c.verdict == UNKNOWN]

    @property
    def passed(self) -> bool:
        return not self.failed

    @property
    def unknown_rate(self) -> float:
        return len(self.unknown) / len(self.checks) if self.checks else 0.0

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "counts": {
                "total": len(self.checks),
                "fail": len(self.failed),
                "unknown": len(self.unknown),
            },
            "checks": [c.to_dict() for c in self.checks],
        }

    def summary(self) -> str:
        return (
            f"{self.name}: {'PASS' if self.passed else 'FAIL'} "
            f"({len(self.checks)} checks, {len(self.unknown)} unknown)"
        )


def membership_check(
    clause: str,
    point: Sequence[int],
    expected: bool,
    bounded_yes: bool,
    decider: Callable[[tuple[int, ...]], bool] | None = None,
) -> Check:
    """Combine a fuel-bounded membership answer with an optional decider.

    A bounded Yes is definitive.  Absence of a Yes refutes membership only
    when a decider vouches for it; otherwise the probe is starved.
    """
    pt = tuple(point)
    if expected:
        if bounded_yes:
            return Check(clause, pt, PASS)
        if decider is not None and not decider(pt):
            return Check(clause, pt, FAIL, "decider refutes expected membership")
        return Check(clause, pt, UNKNOWN, "membership search starved")
    if bounded_yes:
        return Check(clause, pt, FAIL, "member found where none was expected")
    if decider is not None:
        if decider(pt):
            return Check(clause, pt, FAIL, "decider affirms forbidden membership")
        return Check(clause, pt, PASS)
    return Check(clause, pt, UNKNOWN, "non-membership has only bounded evidence")
