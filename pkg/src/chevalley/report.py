"""Pass/fail reports produced by the verification suites."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from typing import Any

MAX_RECORDED_FAILURES = 50


@dataclass
class Failure:
    check: str
    input: dict
    detail: str = ""

    def to_json(self) -> dict:
        return {"check": self.check, "input": self.input, "detail": self.detail}


@dataclass
class Report:
    suite: str
    passed: int = 0
    failed: int = 0
    failures: list[Failure] = field(default_factory=list)
    meta: dict = field(default_factory=dict)
    sections: list["Report"] = field(default_factory=list)
    duration: float = 0.0
    result: Any = None
    _start: float = field(default_factory=time.perf_counter, repr=False)

    def record(self, ok: bool, check: str, inp: dict | None = None, detail: str = "") -> bool:
        if ok:
            self.passed += 1
        else:
            self.failed += 1
            if len(self.failures) < MAX_RECORDED_FAILURES:
                self.failures.append(Failure(check, inp or {}, detail))
        return ok

    def add_section(self, sub: "Report") -> None:
        self.sections.append(sub)
        self.passed += sub.passed
        self.failed += sub.failed

    def finish(self) -> "Report":
        self.duration = time.perf_counter() - self._start
        return self

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def first_failure(self) -> Failure | None:
        if self.failures:
            return self.failures[0]
        for s in self.sections:
            f = s.first_failure()
            if f is not None:
                return f
        return None

    def to_json(self, timing: bool = False) -> dict[str, Any]:
        out: dict[str, Any] = {"suite": self.suite, "ok": self.ok, "passed": self.passed,
                               "failed": self.failed}
        if self.meta:
            out["meta"] = self.meta
        out["failures"] = [f.to_json() for f in self.failures]
        if self.result is not None:
            out["result"] = self.result
        if self.sections:
            out["sections"] = [s.to_json(timing) for s in self.sections]
        if timing:
            out["duration_s"] = round(self.duration, 6)
        return out

    def dumps(self, timing: bool = False) -> str:
        return json.dumps(self.to_json(timing), indent=2, sort_keys=True)

    def summary(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        line = f"[{status}] {self.suite}: {self.passed} passed, {self.failed} failed ({self.duration:.2f}s)"
        lines = [line]
        for s in self.sections:
            lines.extend("  " + l for l in s.summary().splitlines())
        return "\n".join(lines)
