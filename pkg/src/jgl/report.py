"""Check/report containers with deterministic JSON rendering.

Reports must be byte-identical across runs for a fixed command and seed, so
no wall-clock data ever enters one: the ``timing`` block carries exact work
counters (tuples checked, points enumerated) instead.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

TOOL_VERSION = "jgl 0.1.0"
SCHEMA = "jgl/1"


@dataclass
class Check:
    name: str
    status: str  # "pass" | "fail" | "error" | "skip"
    witness: Optional[dict] = None
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status in ("pass", "skip")

    def to_json(self) -> dict:
        out = {"name": self.name, "status": self.status}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.details:
            out["details"] = self.details
        return out


@dataclass
class Report:
    command: str = ""
    ring: str = ""
    checks: list = field(default_factory=list)
    timing: dict = field(default_factory=dict)  # deterministic counters only

    def add(self, check: Check) -> None:
        self.checks.append(check)

    def add_pass(self, name: str, **details) -> None:
        self.checks.append(Check(name, "pass", details=details))

    def add_fail(self, name: str, witness: Optional[dict] = None, **details) -> None:
        self.checks.append(Check(name, "fail", witness=witness, details=details))

    def add_verdict(self, name: str, verdict) -> None:
        self.checks.append(
            Check(
                name,
                verdict.status,
                witness=verdict.witness,
                details={"method": verdict.method, "checked": verdict.checked},
            )
        )

    def extend(self, other: "Report") -> None:
        self.checks.extend(other.checks)
        for k, v in other.timing.items():
            self.timing[k] = self.timing.get(k, 0) + v

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list:
        return [c for c in self.checks if not c.passed]

    def count(self, key: str, n: int = 1) -> None:
        self.timing[key] = self.timing.get(key, 0) + n

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA,
            "tool": TOOL_VERSION,
            "command": self.command,
            "ring": self.ring,
            "status": "pass" if self.passed else "fail",
            "checks": [c.to_json() for c in self.checks],
            "timing": dict(sorted(self.timing.items())),
            "witnesses": [
                {"check": c.name, "witness": c.witness}
                for c in self.checks
                if c.witness is not None
            ],
        }

    def json_bytes(self) -> bytes:
        return (
            json.dumps(self.to_json(), sort_keys=True, separators=(",", ":")) + "\n"
        ).encode()

    def text(self) -> str:
        lines = [f"{TOOL_VERSION}  command: {self.command}  ring: {self.ring}"]
        for c in self.checks:
            line = f"  [{c.status.upper():4}] {c.name}"
            if c.details:
                line += "  " + " ".join(f"{k}={v}" for k, v in sorted(c.details.items()))
            lines.append(line)
            if c.witness is not None:
                lines.append(f"         witness: {json.dumps(c.witness, sort_keys=True)}")
        lines.append("overall: " + ("PASS" if self.passed else "FAIL"))
        return "\n".join(lines) + "\n"
