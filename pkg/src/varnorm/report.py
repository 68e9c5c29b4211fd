"""Verification report plumbing shared by the verify_* routines."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

__all__ = ["CheckResult", "VerificationReport"]


@dataclass(frozen=True)
class CheckResult:
    """One asserted inequality: slack >= -tol means pass."""

    name: str
    slack: float
    tol: float
    passed: bool

    def __str__(self) -> str:
        mark = "ok" if self.passed else "FAIL"
        return f"  [{mark}] {self.name}: slack {self.slack:.3e} (tol {self.tol:.1e})"


@dataclass
class VerificationReport:
    name: str
    checks: list[CheckResult] = field(default_factory=list)
    constants: dict[str, float] = field(default_factory=dict)

    def add_check(self, name: str, slack: float, tol: float) -> None:
        # NaN slack compares False and therefore fails
        self.checks.append(CheckResult(name, slack, tol, bool(slack >= -tol)))

    def record(self, name: str, value: float) -> None:
        self.constants[name] = float(value)

    @property
    def worst_slack(self) -> float:
        return min((c.slack for c in self.checks), default=math.inf)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def summary(self) -> str:
        lines = [f"{self.name}: {'PASS' if self.passed else 'FAIL'}"]
        lines += [str(c) for c in self.checks]
        for key in sorted(self.constants):
            lines.append(f"  {key} = {self.constants[key]:.6g}")
        return "\n".join(lines)
