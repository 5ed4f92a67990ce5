"""
Check records and the verification report
"""
import math
from dataclasses import dataclass, field
from typing import List, Optional

from core.io import from_number

EXACT = "exact"
RESIDUAL = "residual"
EVIDENCE = "evidence"

PASS = "pass"
FAIL = "fail"
SKIPPED = "skipped"


@dataclass
class Check:
    """One verdict. Evidence checks never prove anything; their notes say at what resolution they looked"""
    name: str
    kind: str
    residual: Optional[float]
    tol: float
    verdict: str
    notes: str = ""
    details: dict = field(default_factory=dict)

    @classmethod
    def from_residual(cls, name: str, residual: float, tol: float, kind: str = RESIDUAL, notes: str = "", details: dict = None) -> "Check":
        verdict = PASS if residual <= tol else FAIL
        return cls(name, kind, float(residual), float(tol), verdict, notes, details or {})

    @classmethod
    def skipped(cls, name: str, kind: str, notes: str) -> "Check":
        return cls(name, kind, None, math.nan, SKIPPED, notes)

    @property
    def failed(self) -> bool:
        return self.verdict == FAIL

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "kind": self.kind,
            "residual": self.residual,
            "tol": self.tol,
            "verdict": self.verdict,
            "notes": self.notes,
            "details": self.details,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "Check":
        residual = doc.get("residual")
        return cls(
            name=doc["name"],
            kind=doc["kind"],
            residual=None if residual is None else from_number(residual),
            tol=from_number(doc.get("tol")),
            verdict=doc["verdict"],
            notes=doc.get("notes", ""),
            details=doc.get("details", {}),
        )


@dataclass
class VerificationReport:
    checks: List[Check] = field(default_factory=list)
    model_name: str = ""

    def add(self, check: Check) -> Check:
        self.checks.append(check)
        return check

    def extend(self, checks: List[Check]):
        self.checks.extend(checks)

    @property
    def passed(self) -> bool:
        """True iff no exact or residual check failed"""
        return not any(c.failed for c in self.checks if c.kind != EVIDENCE)

    def failures(self) -> List[Check]:
        return [c for c in self.checks if c.failed and c.kind != EVIDENCE]

    def get(self, name: str) -> Optional[Check]:
        return next((c for c in self.checks if c.name == name), None)

    def to_dict(self) -> dict:
        return {
            "model": self.model_name,
            "passed": self.passed,
            "checks": [c.to_dict() for c in self.checks],
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "VerificationReport":
        return cls([Check.from_dict(c) for c in doc.get("checks", [])], doc.get("model", ""))

    def to_table(self) -> str:
        rows = [("check", "kind", "residual", "tol", "verdict", "notes")]
        for c in self.checks:
            residual = "n/a" if c.residual is None else f"{c.residual:.3e}"
            tol = "n/a" if c.tol is None or math.isnan(c.tol) else f"{c.tol:.1e}"
            rows.append((c.name, c.kind, residual, tol, c.verdict.upper(), c.notes))
        widths = [max(len(r[i]) for r in rows) for i in range(5)]
        lines = []
        for r in rows:
            lines.append("  ".join(cell.ljust(w) for cell, w in zip(r[:5], widths)) + "  " + r[5])
        lines.insert(1, "-" * (sum(widths) + 12))
        lines.append("")
        lines.append(f"overall: {'PASS' if self.passed else 'FAIL'} ({len(self.failures())} failing exact/residual checks)")
        return "\n".join(lines) + "\n"
