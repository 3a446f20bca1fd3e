"""Monte Carlo occupancy estimator for the fifteen-state chain.

Used as an independent check on the linear steady-state solve. The random
stream is SplitMix64 (Steele, Lea & Flood 2014), implemented here so that
results are bit-identical across platforms and numpy versions.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .markov import (
    FC_STATES, HC_STATES, N_STATES, SD_STATES, ComponentRates, build_state_space,
)

N_BATCHES = 20
Z_99 = 2.5758293035489004  # two-sided 99% normal quantile

_MASK = (1 << 64) - 1


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def uniform(self) -> float:
        """Uniform on [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))


@dataclass(frozen=True)
class OccupancyEstimate:
    time_fraction: tuple[float, ...]
    p0_hat: float
    p50_hat: float
    p100_hat: float
    std_error: tuple[float, float, float]  # batch-means standard errors of (p0, p50, p100)
    half_width: tuple[float, float, float]  # 99% half-widths
    horizon_hours: float
    seed: int
    n_jumps: int

    def agrees_with(self, p0: float, p50: float, p100: float, k: float = 3.0) -> bool:
        """True when every aggregate lies within ``k`` standard errors."""
        return all(
            abs(hat - ref) <= k * se
            for hat, ref, se in zip(
                (self.p0_hat, self.p50_hat, self.p100_hat), (p0, p50, p100), self.std_error
            )
        )


def _jump_tables(r: ComponentRates):
    # Event lists are rebuilt from the state semantics rather than taken from
    # the generator, so a bug in one route does not silently carry over.
    states = build_state_space()
    where = {(st.a_up, st.down_set): st.index - 1 for st in states}
    lam_a, lam_b, lam_c, lam_d = r.lam
    mu_a, mu_b, mu_c, mu_d = r.mu
    unit_lam = {"B": lam_b, "C": lam_c, "D": lam_d}
    unit_mu = {"B": mu_b, "C": mu_c, "D": mu_d}
    targets: list[list[int]] = [[] for _ in range(N_STATES)]
    rates: list[list[float]] = [[] for _ in range(N_STATES)]

    def add(src, dst_key, rate):
        if rate > 0:
            targets[src].append(where[dst_key])
            rates[src].append(rate)

    for st in states:
        src = st.index - 1
        down = st.down_set
        if not st.a_up:
            add(src, (True, down), mu_a)
            continue
        if down != frozenset("BCD"):
            add(src, (False, down), lam_a)
        for u in sorted(down):
            add(src, (True, down - {u}), unit_mu[u])
        for u in sorted(set("BCD") - down):
            add(src, (True, down | {u}), unit_lam[u])
    totals = [sum(rs) for rs in rates]
    cumulative = []
    for rs, tot in zip(rates, totals):
        acc, cum = 0.0, []
        for x in rs:
            acc += x
            cum.append(acc / tot)
        cumulative.append(cum)
    return targets, cumulative, totals


def simulate(r: ComponentRates, horizon_hours: float, seed: int) -> OccupancyEstimate:
    """Simulate the chain from state 1 over ``horizon_hours``.

    Occupancy time is charged per state and per batch; the horizon is split
    into ``N_BATCHES`` equal slices for the batch-means error estimate. A state
    with no outgoing rate absorbs the rest of the horizon.
    """
    if not horizon_hours > 0:
        raise ValueError("horizon_hours must be positive")
    targets, cumulative, totals = _jump_tables(r)
    rng = SplitMix64(seed)
    slice_len = horizon_hours / N_BATCHES
    occ = [[0.0] * N_STATES for _ in range(N_BATCHES)]

    def charge(state: int, start: float, end: float) -> None:
        b = min(int(start / slice_len), N_BATCHES - 1)
        while start < end:
            stop = min(end, (b + 1) * slice_len) if b < N_BATCHES - 1 else end
            occ[b][state] += stop - start
            start = stop
            b += 1

    t = 0.0
    state = 0
    jumps = 0
    while t < horizon_hours:
        total = totals[state]
        if total <= 0.0:
            charge(state, t, horizon_hours)
            break
        hold = -math.log(1.0 - rng.uniform()) / total
        end = min(t + hold, horizon_hours)
        charge(state, t, end)
        t = end
        if t >= horizon_hours:
            break
        u = rng.uniform()
        cum = cumulative[state]
        k = 0
        while k < len(cum) - 1 and u >= cum[k]:
            k += 1
        state = targets[state][k]
        jumps += 1

    totals_by_state = [sum(batch[k] for batch in occ) for k in range(N_STATES)]
    grand = sum(totals_by_state)
    fractions = tuple(x / grand for x in totals_by_state)

    def group(frac, idx):
        return sum(frac[k - 1] for k in idx)

    per_batch = []
    for batch in occ:
        w = sum(batch)
        f = [x / w for x in batch]
        per_batch.append((group(f, SD_STATES), group(f, HC_STATES), group(f, FC_STATES)))

    se = []
    for col in range(3):
        xs = [row[col] for row in per_batch]
        m = sum(xs) / N_BATCHES
        var = sum((x - m) ** 2 for x in xs) / (N_BATCHES - 1)
        se.append(math.sqrt(var / N_BATCHES))

    return OccupancyEstimate(
        time_fraction=fractions,
        p0_hat=group(fractions, SD_STATES),
        p50_hat=group(fractions, HC_STATES),
        p100_hat=group(fractions, FC_STATES),
        std_error=tuple(se),
        half_width=tuple(Z_99 * x for x in se),
        horizon_hours=float(horizon_hours),
        seed=seed,
        n_jumps=jumps,
    )
