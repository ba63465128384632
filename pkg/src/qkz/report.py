"""Pass/fail records shared by every verification routine."""

from __future__ import annotations

from dataclasses import dataclass, field

from .linalg import SparseMatrix, format_rational, first_difference


@dataclass
class CheckResult:
    name: str
    case: str
    status: str
    witness: list | None = None
    detail: str | None = None

    @property
    def passed(self):
        return self.status == "PASS"

    def to_json(self):
        out = {"name": self.name, "case": self.case, "status": self.status}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.detail:
            out["detail"] = self.detail
        return out

    def line(self):
        extra = f"  ({self.detail})" if self.detail else ""
        return f"[{self.status}] {self.name} :: {self.case}{extra}"


@dataclass
class Report:
    checks: list = field(default_factory=list)

    def add(self, result: CheckResult):
        self.checks.append(result)
        return result

    def extend(self, other: "Report"):
        self.checks.extend(other.checks)
        return self

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    @property
    def failures(self):
        return [c for c in self.checks if not c.passed]

    def __len__(self):
        return len(self.checks)

    def to_json(self):
        return [c.to_json() for c in self.checks]


def vector_witness(v: dict) -> list:
    return [[i, format_rational(x)] for i, x in sorted(v.items())]


def compare_matrices(name, case, lhs: SparseMatrix, rhs: SparseMatrix, detail=None):
    """PASS when lhs == rhs, otherwise FAIL with a basis vector on which the
    two sides differ."""
    col = first_difference(lhs, rhs)
    if col is None:
        return CheckResult(name, case, "PASS", detail=detail)
    return CheckResult(name, case, "FAIL", witness=[[col, "1"]], detail=detail)


def compare_vectors(name, case, m: dict, lhs: dict, rhs: dict, detail=None):
    if lhs == rhs:
        return CheckResult(name, case, "PASS", detail=detail)
    return CheckResult(name, case, "FAIL", witness=vector_witness(m), detail=detail)
