"""Pass/fail/skip records with witnesses, serialised deterministically."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

PASS = "pass"
FAIL = "fail"
SKIPPED = "skipped"


@dataclass
class Check:
    name: str
    status: str
    witness: dict | None = None
    reason: str | None = None
    stats: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.status == PASS

    def to_dict(self, key: str = "claim") -> dict:
        d = {key: self.name, "status": self.status}
        if self.witness is not None:
            d["witness"] = self.witness
        if self.reason is not None:
            d["reason"] = self.reason
        if self.stats:
            d["stats"] = self.stats
        return d


@dataclass
class Report:
    """An ordered list of checks. ``key`` names the identifier field in JSON."""

    checks: list[Check] = field(default_factory=list)
    key: str = "claim"
    meta: dict = field(default_factory=dict)

    def add(self, check: Check) -> Check:
        if any(c.name == check.name for c in self.checks):
            raise ValueError(f"duplicate check {check.name!r}")
        self.checks.append(check)
        return check

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def __contains__(self, name: str) -> bool:
        return any(c.name == name for c in self.checks)

    @property
    def ok(self) -> bool:
        """True when nothing failed. Skipped checks do not count as passes."""
        return all(c.status != FAIL for c in self.checks)

    @property
    def all_passed(self) -> bool:
        return all(c.ok for c in self.checks)

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if c.status == FAIL]

    def extend(self, other: "Report", prefix: str = "") -> None:
        for c in other.checks:
            self.add(Check(prefix + c.name, c.status, c.witness, c.reason, c.stats))

    def to_dict(self) -> dict:
        d = dict(self.meta)
        d["status"] = PASS if self.ok else FAIL
        d["checks"] = [c.to_dict(self.key) for c in self.checks]
        return d

    def to_json(self) -> str:
        return dumps(self.to_dict())

    def to_text(self) -> str:
        lines = []
        for c in self.checks:
            line = f"{c.status.upper():8} {c.name}"
            if c.reason:
                line += f"  ({c.reason})"
            lines.append(line)
            if c.witness is not None:
                lines.append(f"         witness: {json.dumps(c.witness, sort_keys=True)}")
        return "\n".join(lines)


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def verdict(name: str, failure: dict | None, **stats) -> Check:
    if failure is None:
        return Check(name, PASS, stats=stats)
    return Check(name, FAIL, witness=failure, stats=stats)
