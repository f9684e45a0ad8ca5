"""Deterministic JSON reports shared by the CLI and the check suite."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any

PASS, FAIL, OUT_OF_SCOPE = "PASS", "FAIL", "OUT OF SCOPE"


@dataclass
class Check:
    name: str
    passed: bool
    value: Any = None
    tolerance: float | None = None
    detail: Any = None
    status: str | None = None

    def __post_init__(self):
        if self.status is None:
            self.status = PASS if self.passed else FAIL

    @classmethod
    def out_of_scope(cls, name: str, reason: str) -> "Check":
        return cls(name, True, detail=reason, status=OUT_OF_SCOPE)

    @classmethod
    def residual(cls, name: str, value: float, tolerance: float, detail: Any = None) -> "Check":
        ok = bool(value <= tolerance) and not math.isnan(value)
        return cls(name, ok, float(value), tolerance, detail)

    def to_json(self) -> dict:
        out: dict = {"name": self.name, "status": self.status}
        if self.value is not None:
            out["value"] = _jsonable(self.value)
        if self.tolerance is not None:
            out["tolerance"] = self.tolerance
        if self.detail is not None:
            out["detail"] = _jsonable(self.detail)
        return out


@dataclass
class Report:
    command: str
    config: dict
    checks: list[Check] = field(default_factory=list)
    result: Any = None
    version: str = ""
    timestamp: str | None = None

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, check: Check) -> Check:
        self.checks.append(check)
        return check

    def to_json(self) -> dict:
        out: dict = {"tool": "nckit", "version": self.version, "command": self.command, "config": _jsonable(self.config)}
        if self.timestamp is not None:
            out["timestamp"] = self.timestamp
        if self.result is not None:
            out["result"] = _jsonable(self.result)
        if self.checks:
            out["checks"] = [c.to_json() for c in self.checks]
        out["overall"] = PASS if self.passed else FAIL
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, ensure_ascii=False) + "\n"


def _jsonable(x):
    """Convert tuples, frozensets, numpy scalars and Fractions for json.dumps."""
    from fractions import Fraction

    import numpy as np

    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (set, frozenset)):
        return sorted((_jsonable(v) for v in x), key=lambda v: json.dumps(v))
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else int(x)
    if isinstance(x, np.generic):
        return x.item()
    if isinstance(x, float) and (math.isnan(x) or math.isinf(x)):
        return str(x)
    return x
