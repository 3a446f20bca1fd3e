"""Named scenario variations and a side-by-side table of their optima."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Sequence

from .optimizer import OptimizationResult, optimize
from .scenario import Scenario, apply_override


@dataclass(frozen=True)
class SensitivityPreset:
    name: str
    transforms: tuple[Any, ...]  # items accepted by apply_override
    label: str = ""

    def apply(self, s: Scenario) -> Scenario:
        return apply_override(s, self.transforms)


_BUILTIN = (
    # no-discount run uses the larger budget; at 1100 it has no feasible plan
    SensitivityPreset("no_discount", ("no_discount", {"budget": 1200}), "Removing discount"),
    SensitivityPreset("fixed_lead", ("fixed_lead",), "Fixed delivery lead time"),
    SensitivityPreset("budget_1200", ({"budget": 1200},), "B=1200"),
    SensitivityPreset("penalty_100", ({"budget": 1200, "daily_penalty": 100},), "B=1200 & C^D=100"),
    SensitivityPreset("penalty_50", ({"budget": 1200, "daily_penalty": 50},), "B=1200 & C^D=50"),
    SensitivityPreset("penalty_500", ({"budget": 1200, "daily_penalty": 500},), "B=1200 & C^D=500"),
)

_EXTRA = (
    SensitivityPreset("no_discount_b1100", ("no_discount",), "Removing discount, B unchanged"),
)


def builtin_presets() -> list[SensitivityPreset]:
    return list(_BUILTIN)


def preset_by_name(name: str) -> SensitivityPreset:
    for p in _BUILTIN + _EXTRA:
        if p.name == name:
            return p
    raise KeyError(name)


def preset_names() -> list[str]:
    return [p.name for p in _BUILTIN + _EXTRA]


ROWS = (
    "R_1", "R_2", "R_3", "R_4", "Z", "R_e", "T^c",
    "A_1", "A_2", "A_3", "A_4", "P_0", "P_50", "P_100",
)


@dataclass
class SensitivityColumn:
    name: str
    label: str
    scenario: Scenario
    result: OptimizationResult | None = None
    error: str | None = None

    @property
    def feasible(self) -> bool:
        return self.result is not None and self.result.feasible

    @property
    def status(self) -> str:
        if self.error is not None:
            return "error"
        return "optimal" if self.feasible else "infeasible"

    def values(self) -> dict[str, float] | None:
        if not self.feasible:
            return None
        b = self.result.best_breakdown
        rel = b.rates.reliability
        return {
            "R_1": rel[0], "R_2": rel[1], "R_3": rel[2], "R_4": rel[3],
            "Z": b.z_total, "R_e": b.r_e, "T^c": b.schedule.tc_project,
            "A_1": b.a1_purchase, "A_2": b.a2_shutdown,
            "A_3": b.a3_half_capacity, "A_4": b.a4_delay,
            "P_0": b.steady.p0, "P_50": b.steady.p50, "P_100": b.steady.p100,
        }


@dataclass
class SensitivityTable:
    columns: list[SensitivityColumn] = field(default_factory=list)

    def column(self, name: str) -> SensitivityColumn:
        for c in self.columns:
            if c.name == name:
                return c
        raise KeyError(name)


def run_suite(s: Scenario, presets: Sequence[SensitivityPreset]) -> SensitivityTable:
    """Optimize the base scenario and every preset variant.

    A failing column records its error and the remaining columns still run.
    """
    table = SensitivityTable()
    jobs = [("base", "Optimal solution", s)]
    jobs += [(p.name, p.label or p.name, p.apply(s)) for p in presets]
    for name, label, scenario in jobs:
        col = SensitivityColumn(name, label, scenario)
        try:
            col.result = optimize(scenario)
        except Exception as exc:  # noqa: BLE001 - recorded per column
            col.error = str(exc)
        table.columns.append(col)
    return table
