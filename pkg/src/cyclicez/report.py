"""Check records and reports.

A report is an ordered list of checks; each check names the identity it
verifies, the degrees it covered, a status and (on failure) a witness.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

PASS = "pass"
FAIL = "fail"
SKIP = "skip"
INFO = "info"


@dataclass
class Check:
    name: str
    ref: str
    window: Any = None
    status: str = PASS
    witness: dict | None = None
    detail: Any = None

    def to_json(self) -> dict:
        out = {"name": self.name, "paper_ref": self.ref, "window": self.window, "status": self.status}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.detail is not None:
            out["detail"] = self.detail
        return out


@dataclass
class Report:
    title: str
    checks: list[Check] = field(default_factory=list)

    def add(self, check: Check) -> Check:
        self.checks.append(check)
        return check

    def extend(self, other: "Report", prefix: str | None = None) -> None:
        for c in other.checks:
            if prefix:
                c = Check(f"{prefix}.{c.name}", c.ref, c.window, c.status, c.witness, c.detail)
            self.checks.append(c)

    @property
    def passed(self) -> bool:
        return all(c.status != FAIL for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if c.status == FAIL]

    def get(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_json(self) -> dict:
        return {
            "title": self.title,
            "status": PASS if self.passed else FAIL,
            "checks": [c.to_json() for c in self.checks],
        }

    def to_text(self) -> str:
        lines = [self.title, "=" * len(self.title)]
        width = max((len(c.name) for c in self.checks), default=10)
        for c in self.checks:
            line = f"[{c.status.upper():4}] {c.name:<{width}}  window={_fmt_window(c.window)}"
            if c.witness is not None:
                line += f"  witness={json.dumps(c.witness, sort_keys=True)}"
            lines.append(line)
            if c.detail is not None and c.status in (INFO, FAIL):
                lines.append(f"       {json.dumps(c.detail, sort_keys=True)}")
        lines.append(f"overall: {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines) + "\n"


def _fmt_window(w) -> str:
    if w is None:
        return "-"
    if isinstance(w, (list, tuple)) and w and all(isinstance(x, int) for x in w):
        return f"{min(w)}..{max(w)}" if list(w) == list(range(min(w), max(w) + 1)) else str(list(w))
    return json.dumps(w, sort_keys=True)
