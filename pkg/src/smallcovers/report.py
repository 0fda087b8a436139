"""Pass/fail reports shared by the validators and theorem checks."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass
class Report:
    name: str
    passed: bool = True
    message: str = ""
    details: dict[str, Any] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    def fail(self, message: str, **details) -> "Report":
        # first failure wins; later checks may still add details
        if self.passed:
            self.passed = False
            self.message = message
        self.details.update(details)
        return self

    def __bool__(self) -> bool:
        return self.passed

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"name": self.name, "passed": self.passed}
        if self.message:
            out["message"] = self.message
        if self.details:
            out["details"] = self.details
        if self.notes:
            out["notes"] = list(self.notes)
        return out
