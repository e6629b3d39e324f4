"""Structured verification results."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional


@dataclass
class Report:
    """Outcome of one verification run, JSON-serializable via to_dict."""

    check: str
    algebra: str
    passed: bool
    samples: Optional[int] = None
    seed: Optional[int] = None
    first_counterexample: Optional[dict] = None
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {
            "check": self.check,
            "algebra": self.algebra,
            "pass": self.passed,
        }
        if self.samples is not None:
            out["samples"] = self.samples
        if self.seed is not None:
            out["seed"] = self.seed
        if self.first_counterexample is not None:
            out["first_counterexample"] = self.first_counterexample
        if self.details:
            out["details"] = self.details
        return out
