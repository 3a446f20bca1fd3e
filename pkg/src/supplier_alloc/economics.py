"""Cost terms, construction schedule and feasibility of one assignment."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .markov import (
    ComponentRates,
    SteadyState,
    derive_component_rates,
    steady_state_for,
    system_availability,
)
from .scenario import Assignment, Scenario


@dataclass(frozen=True)
class Schedule:
    tc_series: float  # completion of A (days)
    bcd_lead: float  # delivery of B, C, D (days)
    tc_parallel: float  # completion of B, C, D (days)
    tc_project: float


@dataclass(frozen=True)
class CostBreakdown:
    assignment: Assignment
    a1_purchase: float
    a2_shutdown: float
    a3_half_capacity: float
    a4_delay: float
    z_total: float
    r_e: float
    schedule: Schedule
    steady: SteadyState
    rates: ComponentRates
    budget_ok: bool
    reliability_ok: bool

    @property
    def feasible(self) -> bool:
        return self.budget_ok and self.reliability_ok

    @property
    def failed_constraints(self) -> tuple[str, ...]:
        out = []
        if not self.budget_ok:
            out.append("budget")
        if not self.reliability_ok:
            out.append("reliability")
        return tuple(out)


def parallel_groups(a: Assignment) -> dict[int, int]:
    """Supplier index -> number of B/C/D units ordered from it."""
    return dict(sorted(Counter(a.parallel).items()))


def purchase_cost(s: Scenario, a: Assignment) -> float:
    a.check(s)
    cost = s.series_catalog[a.a - 1].price
    for j, n in parallel_groups(a).items():
        offer = s.parallel_catalog[j - 1]
        if not s.discount_enabled or n == 1:
            cost += n * offer.unit_price_single
        elif n == 2:
            cost += 2 * offer.unit_price_pair
        else:
            cost += 3 * offer.unit_price_triple
    return cost


def bcd_lead_time(s: Scenario, a: Assignment) -> float:
    """Delivery time of the parallel units, aggregated over supplier groups.

    ``max_over_groups`` takes the latest group delivery. ``sum_as_written``
    adds group contributions and counts a triple order three times.
    """
    a.check(s)
    literal = s.lead_policy == "sum_as_written"
    contributions = []
    for j, n in parallel_groups(a).items():
        offer = s.parallel_catalog[j - 1]
        if n == 1:
            contributions.append(offer.lead_single)
        elif n == 2:
            contributions.append(max(offer.lead_pair, offer.lead_single))
        else:
            contributions.append(3 * offer.lead_triple if literal else offer.lead_triple)
    if literal:
        return sum(contributions)
    return max(contributions)


def schedule(s: Scenario, a: Assignment) -> Schedule:
    tc_series = s.series_catalog[a.a - 1].lead_days + sum(s.process_times_series)
    lead = bcd_lead_time(s, a)
    # B, C, D assembly starts once A is installed and they have arrived
    tc_parallel = max(lead, tc_series) + sum(s.process_times_parallel)
    return Schedule(tc_series, lead, tc_parallel, max(tc_series, tc_parallel))


def delay_penalty(sch: Schedule, s: Scenario) -> float:
    return max(0.0, sch.tc_project - s.deadline) * s.daily_penalty


def operating_costs(ss: SteadyState, s: Scenario) -> tuple[float, float]:
    """Present value of shutdown and half-capacity losses over an infinite life.

    Annual cost is hours_per_year * hourly rate * occupancy; dividing by the
    MARR gives the perpetuity value.
    """
    if not s.marr > 0:
        raise ValueError("marr must be positive for the perpetuity factor")
    a2 = s.hours_per_year * s.alpha * ss.p0 / s.marr
    a3 = s.hours_per_year * s.beta * ss.p50 / s.marr
    return a2, a3


def evaluate(s: Scenario, a: Assignment) -> CostBreakdown:
    rates = derive_component_rates(s, a)
    ss = steady_state_for(rates)
    a1 = purchase_cost(s, a)
    sch = schedule(s, a)
    a4 = delay_penalty(sch, s)
    a2, a3 = operating_costs(ss, s)
    r_e = system_availability(ss)
    return CostBreakdown(
        assignment=a,
        a1_purchase=a1,
        a2_shutdown=a2,
        a3_half_capacity=a3,
        a4_delay=a4,
        z_total=a1 + a2 + a3 + a4,
        r_e=r_e,
        schedule=sch,
        steady=ss,
        rates=rates,
        budget_ok=a1 <= s.budget,
        reliability_ok=r_e >= s.min_reliability,
    )
