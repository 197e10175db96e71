"""Outcomes of checks: certified, certified-false with witness, or budget-limited.

Every decision procedure in this package that quantifies over an enumerated
set returns a :class:`Verdict`.  A ``FALSE`` verdict always carries a concrete
witness that re-validates; a ``NO_VIOLATION`` verdict is an honest
"searched up to the stated budget and found nothing" answer, never silently
upgraded to a certification.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any

__all__ = ["Status", "Verdict", "MonotonicityWitness"]


class Status(enum.Enum):
    TRUE = "true"
    FALSE = "false"
    NO_VIOLATION = "no-violation-found"


@dataclass(frozen=True)
class MonotonicityWitness:
    """Two parameters in one domain component where a composite decreases."""

    t1: Any
    t2: Any
    v1: Any
    v2: Any
    function: Any = None

    def describe(self) -> str:
        fn = f" under {self.function.label}" if getattr(self.function, "label", "") else ""
        return f"value drops from {self.v1} at t={self.t1} to {self.v2} at t={self.t2}{fn}"

    def to_json(self) -> dict:
        out = {
            "t1": str(self.t1),
            "t2": str(self.t2),
            "v1": str(self.v1),
            "v2": str(self.v2),
        }
        if self.function is not None:
            out["function"] = getattr(self.function, "label", str(self.function))
        return out


@dataclass(frozen=True)
class Verdict:
    status: Status
    witness: Any = None
    detail: str = ""
    budget: int | None = field(default=None)

    @classmethod
    def true(cls, detail: str = "") -> Verdict:
        return cls(Status.TRUE, detail=detail)

    @classmethod
    def false(cls, witness: Any = None, detail: str = "") -> Verdict:
        return cls(Status.FALSE, witness=witness, detail=detail)

    @classmethod
    def no_violation(cls, budget: int | None = None, detail: str = "") -> Verdict:
        return cls(Status.NO_VIOLATION, detail=detail, budget=budget)

    @property
    def accepting(self) -> bool:
        """True when no violation was found (certified or at budget)."""
        return self.status is not Status.FALSE

    @property
    def certified(self) -> bool:
        return self.status is not Status.NO_VIOLATION

    def describe(self) -> str:
        msg = self.status.value
        if self.status is Status.NO_VIOLATION and self.budget is not None:
            msg += f" (budget {self.budget})"
        if self.detail:
            msg += f": {self.detail}"
        if self.witness is not None and hasattr(self.witness, "describe"):
            msg += f" [{self.witness.describe()}]"
        return msg

    def to_json(self) -> dict:
        out: dict[str, Any] = {"status": self.status.value}
        if self.detail:
            out["detail"] = self.detail
        if self.budget is not None:
            out["budget"] = self.budget
        if self.witness is not None:
            out["witness"] = (
                self.witness.to_json()
                if hasattr(self.witness, "to_json")
                else str(self.witness)
            )
        return out
