"""Fifteen-state repairable-system chain: one series unit A feeding three
half-capacity parallel units B, C, D.

States are numbered 1..15 in a fixed order. Transition rules:

* A up with at most two parallel units down: A fails at lambda_A, each working
  parallel unit fails at its own rate, each failed one is repaired at its own rate.
* A up with all three parallel units down: only the three repairs leave the
  state (A cannot fail there).
* A down: everything else is frozen; the only move is A's repair back to the
  matching A-up state.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations

import numpy as np

from .scenario import Assignment, Scenario

UNITS = ("B", "C", "D")

# (A up?, failed parallel units) in chain order, states 1..15
_STATE_TABLE: tuple[tuple[bool, frozenset[str]], ...] = (
    (True, frozenset()),
    (True, frozenset("B")),
    (True, frozenset("D")),
    (True, frozenset("C")),
    (True, frozenset("BD")),
    (True, frozenset("BC")),
    (True, frozenset("CD")),
    (False, frozenset("BD")),
    (False, frozenset("B")),
    (False, frozenset("BC")),
    (True, frozenset("BCD")),
    (False, frozenset("D")),
    (False, frozenset()),
    (False, frozenset("C")),
    (False, frozenset("CD")),
)
N_STATES = len(_STATE_TABLE)

ROW_SUM_TOL = 1e-12
NEGATIVE_CLAMP_TOL = 1e-12


class SteadyStateError(ArithmeticError):
    """The balance system could not be solved to a valid distribution."""


@dataclass(frozen=True)
class ComponentRates:
    """Per-hour failure and repair rates of A, B, C, D (in that order)."""

    lam: tuple[float, float, float, float]
    mu: tuple[float, float, float, float]
    reliability: tuple[float, float, float, float] = (float("nan"),) * 4

    def __post_init__(self):
        if len(self.lam) != 4 or len(self.mu) != 4:
            raise ValueError("rates need exactly four entries (A, B, C, D)")
        if any(x < 0 for x in self.lam):
            raise ValueError("failure rates must be nonnegative")
        if any(not x > 0 for x in self.mu):
            raise ValueError("repair rates must be positive")


@dataclass(frozen=True)
class SystemState:
    index: int
    a_up: bool
    down_set: frozenset[str]

    @property
    def capacity_class(self) -> str:
        if self.a_up and len(self.down_set) <= 1:
            return "FC"
        if self.a_up and len(self.down_set) == 2:
            return "HC"
        return "SD"

    def label(self) -> str:
        a = "A" if self.a_up else "a"
        down = "".join(sorted(self.down_set)) or "-"
        return f"S{self.index}[{a}|{down}]"


@dataclass(frozen=True)
class SteadyState:
    s: tuple[float, ...]
    p0: float
    p50: float
    p100: float

    @classmethod
    def from_vector(cls, s) -> "SteadyState":
        s = tuple(float(x) for x in s)
        # summed in the index order used by the occupancy formulas
        p0 = sum(s[k - 1] for k in SD_STATES)
        p50 = sum(s[k - 1] for k in HC_STATES)
        p100 = sum(s[k - 1] for k in FC_STATES)
        return cls(s, p0, p50, p100)


def build_state_space() -> list[SystemState]:
    return [SystemState(k + 1, up, down) for k, (up, down) in enumerate(_STATE_TABLE)]


_STATES = build_state_space()
_INDEX = {(st.a_up, st.down_set): st.index for st in _STATES}
FC_STATES = tuple(st.index for st in _STATES if st.capacity_class == "FC")
HC_STATES = tuple(st.index for st in _STATES if st.capacity_class == "HC")
SD_STATES = tuple(st.index for st in _STATES if st.capacity_class == "SD")


def state_index(a_up: bool, down: str | frozenset[str]) -> int:
    return _INDEX[(a_up, frozenset(down))]


def transitions(r: ComponentRates) -> list[tuple[int, int, float]]:
    """All (from, to, rate) triples with 1-based state indices."""
    lam = dict(zip(("A",) + UNITS, r.lam))
    mu = dict(zip(("A",) + UNITS, r.mu))
    out = []
    for st in _STATES:
        if not st.a_up:
            out.append((st.index, _INDEX[(True, st.down_set)], mu["A"]))
            continue
        if len(st.down_set) < 3:
            out.append((st.index, _INDEX[(False, st.down_set)], lam["A"]))
        for u in UNITS:
            if u in st.down_set:
                out.append((st.index, _INDEX[(True, st.down_set - {u})], mu[u]))
            else:
                out.append((st.index, _INDEX[(True, st.down_set | {u})], lam[u]))
    return out


def build_generator(r: ComponentRates) -> np.ndarray:
    """15x15 rate matrix; ``q[k, l]`` is the rate from state k+1 to l+1."""
    q = np.zeros((N_STATES, N_STATES))
    for i, j, rate in transitions(r):
        q[i - 1, j - 1] += rate
    np.fill_diagonal(q, 0.0)
    np.fill_diagonal(q, -q.sum(axis=1))
    return q


def solve_steady_state(q: np.ndarray) -> SteadyState:
    """Solve pi Q = 0, sum(pi) = 1.

    The balance equation of state 1 is replaced by the normalization row and
    the 15x15 system is solved by LU with partial pivoting.
    """
    q = np.asarray(q, dtype=float)
    if q.shape != (N_STATES, N_STATES):
        raise ValueError(f"expected a {N_STATES}x{N_STATES} generator")
    if np.any(q - np.diag(np.diag(q)) < 0) or np.max(np.abs(q.sum(axis=1))) > ROW_SUM_TOL:
        raise ValueError("not a valid generator matrix")
    a = q.T.copy()
    a[0, :] = 1.0
    b = np.zeros(N_STATES)
    b[0] = 1.0
    try:
        pi = np.linalg.solve(a, b)
    except np.linalg.LinAlgError as exc:
        raise SteadyStateError(f"balance system is singular: {exc}") from None
    if not np.all(np.isfinite(pi)) or np.linalg.cond(a) > 1e12:
        raise SteadyStateError("balance system is ill-conditioned")
    if pi.min() < -NEGATIVE_CLAMP_TOL:
        raise SteadyStateError(f"negative occupancy {pi.min():.3e} in solution")
    pi = np.where(pi < 0, 0.0, pi)
    return SteadyState.from_vector(pi)


def system_availability(ss: SteadyState) -> float:
    """Long-run fraction of time not shut down."""
    return 1.0 - ss.p0


def derive_component_rates(s: Scenario, a: Assignment) -> ComponentRates:
    a.check(s)
    series = s.series_catalog[a.a - 1]
    par = [s.parallel_catalog[j - 1] for j in a.parallel]
    return ComponentRates(
        lam=(series.failure_rate,) + tuple(o.failure_rate for o in par),
        mu=(series.repair_rate,) + tuple(o.repair_rate for o in par),
        reliability=(series.nominal_reliability,) + tuple(o.nominal_reliability for o in par),
    )


# --- memoized solve ----------------------------------------------------------
# Swapping the labels of B, C, D maps the chain onto itself, so one solve per
# rate multiset serves every assignment that uses the same suppliers.

def _relabel_map(perm: tuple[int, int, int]) -> list[int]:
    """Index map for unit relabeling ``UNITS[k] -> UNITS[perm[k]]``."""
    rename = {UNITS[k]: UNITS[perm[k]] for k in range(3)}
    return [
        _INDEX[(st.a_up, frozenset(rename[u] for u in st.down_set))] - 1 for st in _STATES
    ]


_RELABEL = {p: _relabel_map(p) for p in permutations(range(3))}


@lru_cache(maxsize=4096)
def _solve_canonical(lam_a: float, mu_a: float, units: tuple[tuple[float, float], ...]):
    r = ComponentRates(
        lam=(lam_a,) + tuple(u[0] for u in units), mu=(mu_a,) + tuple(u[1] for u in units)
    )
    return solve_steady_state(build_generator(r)).s


def steady_state_for(r: ComponentRates) -> SteadyState:
    """Same result as ``solve_steady_state(build_generator(r))``, cached on the
    multiset of parallel-unit rates."""
    units = list(zip(r.lam[1:], r.mu[1:]))
    order = sorted(range(3), key=lambda k: units[k])
    canon = _solve_canonical(r.lam[0], r.mu[0], tuple(units[k] for k in order))
    # canonical position p holds actual unit order[p]; rename actual -> canonical
    inverse = tuple(order.index(q) for q in range(3))
    back = _RELABEL[inverse]
    return SteadyState.from_vector([canon[back[k]] for k in range(N_STATES)])
