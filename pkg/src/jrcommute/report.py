from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, List


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class Report:
    """Named pass/fail checks plus any scalars worth printing."""

    subject: str
    checks: List[Check] = field(default_factory=list)
    scalars: Dict[str, Any] = field(default_factory=dict)

    def add(self, name: str, passed, detail: str = "") -> Check:
        check = Check(name, bool(passed), detail)
        self.checks.append(check)
        return check

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_json(self) -> dict:
        from .serialization import scalar_to_json

        def conv(v):
            if isinstance(v, (list, tuple)):
                return [conv(x) for x in v]
            if isinstance(v, dict):
                return {k: conv(x) for k, x in v.items()}
            if v is None or isinstance(v, (bool, str, int)):
                return v
            try:
                return scalar_to_json(v)
            except TypeError:
                return str(v)

        return {
            "subject": self.subject,
            "ok": self.ok,
            "checks": [{"name": c.name, "status": "pass" if c.passed else "fail", "detail": c.detail}
                       for c in self.checks],
            "scalars": conv(self.scalars),
        }

    def format(self) -> str:
        lines = [f"== {self.subject}"]
        for c in self.checks:
            mark = "PASS" if c.passed else "FAIL"
            lines.append(f"  [{mark}] {c.name}" + (f": {c.detail}" if c.detail else ""))
        return "\n".join(lines)
