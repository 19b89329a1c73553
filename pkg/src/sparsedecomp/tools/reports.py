#!/usr/bin/env python3
"""
Clause Reports
Shared result type and report layout for every verifier in the package.
"""

from collections.abc import Mapping
from dataclasses import dataclass, field
from typing import Any


@dataclass
class ClauseResult:
    """Outcome of checking one named clause."""

    passed: bool
    measured: dict[str, Any] = field(default_factory=dict)
    issues: list[str] = field(default_factory=list)

    def to_dict(self) -> dict[str, Any]:
        return {"passed": self.passed, "measured": self.measured, "issues": self.issues}


def generate_report(results: Mapping[str, ClauseResult], **summary: Any) -> dict[str, Any]:
    """Report of the form {"summary": {...}, "clauses": {name: {...}}}."""
    report: dict[str, Any] = {
        "summary": {
            "total_issues": sum(len(r.issues) for r in results.values()),
            "all_passed": all(r.passed for r in results.values()),
            **summary,
        },
        "clauses": {},
    }
    for name, result in results.items():
        report["clauses"][name] = result.to_dict()
    return report
