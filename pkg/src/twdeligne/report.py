"""Structured check outcomes and the machine-readable report."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Any


@dataclass(frozen=True)
class Check:
    """One named pass/fail outcome. ``detail`` names what differs on failure."""

    name: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        s = f"{'PASS' if self.passed else 'FAIL'} {self.name}"
        return f"{s}: {self.detail}" if self.detail else s


def all_passed(checks) -> bool:
    return all(c.passed for c in checks)


@dataclass
class Report:
    """Everything one CLI invocation computed.

    ``groups`` maps ``twist -> ring -> [rendered H^0, H^1, ...]``;
    ``deligne`` maps ``twist -> [rendered descriptor per degree]``.
    """

    subject: dict[str, Any] = field(default_factory=dict)
    groups: dict[str, dict[str, list[str]]] = field(default_factory=dict)
    deligne: dict[str, list[str]] = field(default_factory=dict)
    checks: list[Check] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all_passed(self.checks)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["checks"] = [asdict(c) for c in self.checks]
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, ensure_ascii=False) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> "Report":
        return cls(subject=dict(d.get("subject", {})),
                   groups={t: {r: list(v) for r, v in rs.items()}
                           for t, rs in d.get("groups", {}).items()},
                   deligne={t: list(v) for t, v in d.get("deligne", {}).items()},
                   checks=[Check(**c) for c in d.get("checks", [])],
                   notes=list(d.get("notes", [])))

    @classmethod
    def from_json(cls, text: str) -> "Report":
        return cls.from_dict(json.loads(text))
