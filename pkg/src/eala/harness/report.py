"""Check reports: exact pass/fail/inconclusive outcomes with witnesses and timings."""

from __future__ import annotations

import time
from contextlib import contextmanager
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional

from ..exact.scalars import format_scalar

PASS = "pass"
FAIL = "fail"
INCONCLUSIVE = "inconclusive"

WINDOW_NOTE = "verified in window; the full statement is not certified beyond it"


@dataclass
class Check:
    name: str
    params: Dict[str, Any]
    status: str
    witness: Optional[str] = None
    millis: float = 0.0
    detail: Optional[str] = None


@dataclass
class CheckReport:
    suite: str
    params: Dict[str, Any] = field(default_factory=dict)
    checks: List[Check] = field(default_factory=list)
    note: str = WINDOW_NOTE

    @property
    def status(self) -> str:
        states = {c.status for c in self.checks}
        if FAIL in states:
            return FAIL
        if INCONCLUSIVE in states:
            return INCONCLUSIVE
        return PASS

    def add(self, name: str, status: str, params: Optional[Dict[str, Any]] = None,
            witness: Optional[str] = None, millis: float = 0.0,
            detail: Optional[str] = None) -> Check:
        if status not in (PASS, FAIL, INCONCLUSIVE):
            raise ValueError(f"unknown status {status!r}")
        check = Check(name, dict(params or {}), status, witness, round(millis, 3), detail)
        self.checks.append(check)
        return check

    def to_dict(self) -> Dict[str, Any]:
        out = {"suite": self.suite, "status": self.status, "params": self.params,
               "note": self.note, "checks": []}
        for c in self.checks:
            d = {k: v for k, v in asdict(c).items() if v is not None}
            out["checks"].append(d)
        return out


@contextmanager
def stopwatch():
    """Yields a one-element list that holds the elapsed milliseconds on exit."""
    box = [0.0]
    start = time.perf_counter()
    try:
        yield box
    finally:
        box[0] = (time.perf_counter() - start) * 1000.0


def format_vec(v: Dict, limit: int = 6) -> str:
    """Short exact text form of a sparse vector for witnesses."""
    items = sorted(v.items(), key=lambda kv: repr(kv[0]))
    parts = [f"{format_scalar(x)}*{k!r}" for k, x in items[:limit]]
    if len(items) > limit:
        parts.append(f"... ({len(items) - limit} more terms)")
    return " + ".join(parts) if parts else "0"


def combine_status(statuses) -> str:
    statuses = set(statuses)
    if FAIL in statuses:
        return FAIL
    if INCONCLUSIVE in statuses:
        return INCONCLUSIVE
    return PASS
