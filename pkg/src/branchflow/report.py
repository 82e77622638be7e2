"""Pass/fail reports emitted by every verifier."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass
from typing import Optional

from .exact import rational_str

PASS = "PASS"
FAIL = "FAIL"
SKIPPED = "SKIPPED"


@dataclass(frozen=True)
class Mismatch:
    exponent: int
    lhs: str
    rhs: str


@dataclass(frozen=True)
class VerificationReport:
    identity: str
    order: int
    status: str
    first_mismatch: Optional[Mismatch]
    elapsed_ms: int

    def __post_init__(self):
        if (self.status == FAIL) != (self.first_mismatch is not None):
            raise ValueError("first_mismatch must be present exactly when status is FAIL")

    @property
    def ok(self) -> bool:
        return self.status != FAIL

    def to_dict(self) -> dict:
        mm = None
        if self.first_mismatch is not None:
            mm = {
                "exponent": self.first_mismatch.exponent,
                "lhs": self.first_mismatch.lhs,
                "rhs": self.first_mismatch.rhs,
            }
        return {
            "identity": self.identity,
            "order": self.order,
            "status": self.status,
            "first_mismatch": mm,
            "elapsed_ms": self.elapsed_ms,
        }

    def to_json_line(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def start_clock() -> float:
    return time.perf_counter()


def _elapsed_ms(t0: float) -> int:
    return int((time.perf_counter() - t0) * 1000)


def passed(identity: str, order: int, t0: float) -> VerificationReport:
    return VerificationReport(identity, order, PASS, None, _elapsed_ms(t0))


def skipped(identity: str, order: int, t0: float) -> VerificationReport:
    return VerificationReport(identity, order, SKIPPED, None, _elapsed_ms(t0))


def failed(identity: str, order: int, t0: float, exponent: int, lhs, rhs) -> VerificationReport:
    mm = Mismatch(exponent=exponent, lhs=str(lhs), rhs=str(rhs))
    return VerificationReport(identity, order, FAIL, mm, _elapsed_ms(t0))


def compare_series(identity, order, lhs, rhs, exponents, t0) -> VerificationReport:
    """PASS iff lhs and rhs agree at every listed exponent.

    The scan order of ``exponents`` fixes which mismatch is reported first,
    so callers list them from the leading term inward.  Reading an exponent
    outside either known window raises, which keeps a too-shallow
    computation from masquerading as a pass.
    """
    for e in exponents:
        lv = lhs.coefficient(e)
        rv = rhs.coefficient(e)
        if lv != rv:
            return failed(identity, order, t0, e, rational_str(lv), rational_str(rv))
    return passed(identity, order, t0)
