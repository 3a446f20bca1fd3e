"""Independent reference computations used by the tests.

None of these call into the code paths they check.
"""
from __future__ import annotations

from itertools import product


def balance_residuals(S, lam, mu):
    """Inflow minus outflow for each of the fifteen balance equations, written
    out term by term. ``S`` is 1-indexed via ``S[k-1]``."""
    s = [None] + list(S)
    l1, l2, l3, l4 = lam
    m1, m2, m3, m4 = mu
    eqs = [
        (l1 + l2 + l3 + l4) * s[1] - (m2 * s[2] + m4 * s[3] + m3 * s[4] + m1 * s[13]),
        (l1 + m2 + l3 + l4) * s[2] - (l2 * s[1] + m4 * s[5] + m3 * s[6] + m1 * s[9]),
        (l1 + m4 + l3 + l2) * s[3] - (l4 * s[1] + m2 * s[5] + m1 * s[12] + m3 * s[7]),
        (l1 + m3 + l2 + l4) * s[4] - (l3 * s[1] + m4 * s[7] + m2 * s[6] + m1 * s[14]),
        (l1 + m2 + l3 + m4) * s[5] - (l4 * s[2] + l2 * s[3] + m3 * s[11] + m1 * s[8]),
        (l1 + m2 + l4 + m3) * s[6] - (l3 * s[2] + l2 * s[4] + m4 * s[11] + m1 * s[10]),
        (l1 + m3 + l2 + m4) * s[7] - (l4 * s[4] + l3 * s[3] + m2 * s[11] + m1 * s[15]),
        m1 * s[8] - l1 * s[5],
        m1 * s[9] - l1 * s[2],
        m1 * s[10] - l1 * s[6],
        (m2 + m3 + m4) * s[11] - (l4 * s[6] + l2 * s[7] + l3 * s[5]),
        m1 * s[12] - l1 * s[3],
        m1 * s[13] - l1 * s[1],
        m1 * s[14] - l1 * s[4],
        m1 * s[15] - l1 * s[7],
    ]
    return eqs


def purchase_cost_binary(s, assignment):
    """Purchase cost evaluated through 0/1 decision variables y[i][j], summing
    the triple/pair/single indicator products over every supplier."""
    J = s.n_suppliers
    picks = assignment.as_tuple()
    y = [[1 if picks[i] == j + 1 else 0 for j in range(J)] for i in range(4)]
    total = 0.0
    for j in range(J):
        o = s.parallel_catalog[j]
        y2, y3, y4 = y[1][j], y[2][j], y[3][j]
        triple = y2 * y3 * y4
        pair = y2 * y3 * (1 - y4) + y2 * y4 * (1 - y3) + y3 * y4 * (1 - y2)
        single = (y2 * (1 - y3) * (1 - y4) + y3 * (1 - y2) * (1 - y4)
                  + y4 * (1 - y2) * (1 - y3))
        if s.discount_enabled:
            total += 3 * triple * o.unit_price_triple + 2 * pair * o.unit_price_pair
        else:
            total += 3 * triple * o.unit_price_single + 2 * pair * o.unit_price_single
        total += single * o.unit_price_single
        total += y[0][j] * s.series_catalog[j].price
    return total


def all_assignments(J):
    return list(product(range(1, J + 1), repeat=4))
