"""Exhaustive search over supplier assignments."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterator

from .economics import CostBreakdown, evaluate
from .scenario import Assignment, Scenario


class EvaluationError(RuntimeError):
    def __init__(self, assignment: Assignment, cause: Exception):
        super().__init__(f"evaluation failed for {assignment}: {cause}")
        self.assignment = assignment


@dataclass(frozen=True)
class OptimizationResult:
    best: Assignment | None  # None when no assignment is feasible
    best_breakdown: CostBreakdown | None
    ranking: tuple[CostBreakdown, ...]  # every assignment, by (z_total, supplier tuple)
    infeasible_reasons: dict[Assignment, tuple[str, ...]]
    evaluated_count: int

    @property
    def feasible(self) -> bool:
        return self.best is not None


def enumerate_assignments(s: Scenario) -> Iterator[Assignment]:
    """All J**4 assignments in lexicographic order of (A, B, C, D)."""
    suppliers = range(1, s.n_suppliers + 1)
    for t in product(suppliers, repeat=4):
        yield Assignment(*t)


def optimize(s: Scenario) -> OptimizationResult:
    breakdowns = []
    for a in enumerate_assignments(s):
        try:
            breakdowns.append(evaluate(s, a))
        except (ArithmeticError, ValueError) as exc:
            raise EvaluationError(a, exc) from exc

    ranking = tuple(sorted(breakdowns, key=lambda b: (b.z_total, b.assignment.as_tuple())))
    reasons = {b.assignment: b.failed_constraints for b in breakdowns if not b.feasible}
    best = next((b for b in ranking if b.feasible), None)
    return OptimizationResult(
        best=best.assignment if best else None,
        best_breakdown=best,
        ranking=ranking,
        infeasible_reasons=reasons,
        evaluated_count=len(breakdowns),
    )
