"""Verdict and check-result containers plus JSON-friendly conversion."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any

import numpy as np


class Verdict(str, Enum):
    YES = "yes"
    NO = "no"
    INCONCLUSIVE = "inconclusive_at_horizon"


def jsonable(obj: Any) -> Any:
    """Convert nested results to plain JSON-serialisable structures.

    Non-finite floats become None; exact rationals become ["num", "den"]
    string pairs so no precision is lost in transit.
    """
    if isinstance(obj, Verdict):
        return obj.value
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, Fraction):
        return [str(obj.numerator), str(obj.denominator)]
    if isinstance(obj, (np.floating, float)):
        f = float(obj)
        return f if math.isfinite(f) else None
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return [jsonable(x) for x in obj.tolist()]
    if isinstance(obj, (list, tuple)):
        return [jsonable(x) for x in obj]
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    return obj


@dataclass(frozen=True)
class VerdictWithEvidence:
    """A yes/no/inconclusive verdict with its numeric evidence payload."""

    verdict: Verdict
    evidence: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"verdict": self.verdict.value, "evidence": jsonable(self.evidence)}

    @classmethod
    def from_dict(cls, d: dict) -> "VerdictWithEvidence":
        return cls(verdict=Verdict(d["verdict"]), evidence=dict(d.get("evidence", {})))


@dataclass(frozen=True)
class CheckResult:
    """Outcome of an exhaustive inequality scan.

    ``witness`` is the first violating index (or index tuple) in the scan
    order documented by the operation; None when the check holds.
    """

    holds: bool
    witness: Any = None
    detail: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "holds": self.holds,
            "witness": jsonable(self.witness),
            "detail": jsonable(self.detail),
        }
