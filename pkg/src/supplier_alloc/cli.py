"""Command-line front end.

Examples::

    supplier-alloc solve examples/paper.json
    supplier-alloc evaluate examples/paper.json --assignment A=3,B=1,C=2,D=1 --output csv
    supplier-alloc simulate examples/paper.json --assignment A=3,B=1,C=2,D=1 --seed 42
    supplier-alloc sensitivity examples/paper.json --presets all

Exit status: 0 success, 1 input error, 2 no feasible assignment.
"""
from __future__ import annotations

import argparse
import csv
import io
import sys
from typing import Sequence

from . import economics, markov, mc_oracle, optimizer, sensitivity
from .scenario import (
    Assignment,
    ScenarioError,
    apply_override,
    hard_violations,
    load_scenario,
    parse_key_value,
    validate_scenario,
)

EXIT_OK, EXIT_INPUT, EXIT_INFEASIBLE = 0, 1, 2


class InputError(Exception):
    pass


# --- number formatting -------------------------------------------------------

def fmt_prob(x: float) -> str:
    return f"{x:.6f}"


def fmt_money(x: float) -> str:
    return f"{x:.2f}"


def fmt_days(x: float) -> str:
    return str(int(x)) if float(x).is_integer() else f"{x:.2f}"


_ROW_FORMAT = {
    "R_1": fmt_prob, "R_2": fmt_prob, "R_3": fmt_prob, "R_4": fmt_prob,
    "Z": fmt_money, "R_e": fmt_prob, "T^c": fmt_days,
    "A_1": fmt_money, "A_2": fmt_money, "A_3": fmt_money, "A_4": fmt_money,
    "P_0": fmt_prob, "P_50": fmt_prob, "P_100": fmt_prob,
}


def render_table(header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    widths = [max(len(str(r[k])) for r in [header, *rows]) for k in range(len(header))]
    lines = ["  ".join(str(h).ljust(w) for h, w in zip(header, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    for r in rows:
        lines.append("  ".join(str(c).rjust(w) for c, w in zip(r, widths)).rstrip())
    return "\n".join(lines)


def render_csv(header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def emit(args, header, rows) -> None:
    if args.output == "csv":
        sys.stdout.write(render_csv(header, rows))
    else:
        print(render_table(header, rows))


# --- shared plumbing ---------------------------------------------------------

def _scenario(args):
    try:
        s = load_scenario(args.scenario)
    except OSError as exc:
        raise InputError(f"cannot read {args.scenario}: {exc.strerror or exc}") from None
    except ScenarioError as exc:
        raise InputError(f"invalid scenario: {exc}") from None
    overrides = {}
    if args.lead_policy:
        overrides["lead_policy"] = args.lead_policy
    try:
        for item in args.set or ():
            key, value = parse_key_value(item)
            overrides[key] = value
        s = apply_override(s, overrides)
    except ScenarioError as exc:
        raise InputError(f"bad override: {exc}") from None
    errors = hard_violations(validate_scenario(s))
    if errors:
        raise InputError("; ".join(f"{v.path}: {v.message}" for v in errors))
    return s


def _assignment(text: str, s) -> Assignment:
    try:
        a = Assignment.parse(text)
        a.check(s)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    return a


BREAKDOWN_FIELDS = (
    "assignment", "A_1", "A_2", "A_3", "A_4", "Z", "R_e", "P_0", "P_50", "P_100",
    "tc_series", "bcd_lead", "tc_parallel", "T^c", "budget_ok", "reliability_ok",
)


def breakdown_row(b: economics.CostBreakdown, states: bool = False) -> list[str]:
    sch = b.schedule
    row = [
        str(b.assignment),
        fmt_money(b.a1_purchase), fmt_money(b.a2_shutdown),
        fmt_money(b.a3_half_capacity), fmt_money(b.a4_delay), fmt_money(b.z_total),
        fmt_prob(b.r_e), fmt_prob(b.steady.p0), fmt_prob(b.steady.p50), fmt_prob(b.steady.p100),
        fmt_days(sch.tc_series), fmt_days(sch.bcd_lead), fmt_days(sch.tc_parallel),
        fmt_days(sch.tc_project),
        str(b.budget_ok).lower(), str(b.reliability_ok).lower(),
    ]
    if states:
        row += [fmt_prob(x) for x in b.steady.s]
    return row


def _print_breakdown(b: economics.CostBreakdown, s, states: bool) -> None:
    sch = b.schedule
    print(f"assignment        {b.assignment}")
    print(f"reliabilities     " + " ".join(fmt_prob(x) for x in b.rates.reliability))
    print(f"A_1 purchase      {fmt_money(b.a1_purchase)}")
    print(f"A_2 shutdown      {fmt_money(b.a2_shutdown)}")
    print(f"A_3 half capacity {fmt_money(b.a3_half_capacity)}")
    print(f"A_4 delay         {fmt_money(b.a4_delay)}")
    print(f"Z total           {fmt_money(b.z_total)}")
    print(f"P_0 / P_50 / P_100 {fmt_prob(b.steady.p0)} / {fmt_prob(b.steady.p50)} / "
          f"{fmt_prob(b.steady.p100)}")
    print(f"R_e               {fmt_prob(b.r_e)}  (minimum {fmt_prob(s.min_reliability)}: "
          f"{'ok' if b.reliability_ok else 'VIOLATED'})")
    print(f"budget            {fmt_money(b.a1_purchase)} of {fmt_money(s.budget)}: "
          f"{'ok' if b.budget_ok else 'VIOLATED'}")
    print(f"schedule          A done {fmt_days(sch.tc_series)} d, B/C/D lead "
          f"{fmt_days(sch.bcd_lead)} d, B/C/D done {fmt_days(sch.tc_parallel)} d, "
          f"project {fmt_days(sch.tc_project)} d (deadline {fmt_days(s.deadline)})")
    if states:
        print()
        rows = [
            [st.label(), st.capacity_class, fmt_prob(p)]
            for st, p in zip(markov.build_state_space(), b.steady.s)
        ]
        print(render_table(["state", "class", "probability"], rows))


# --- commands ----------------------------------------------------------------

def cmd_solve(args) -> int:
    s = _scenario(args)
    res = optimizer.optimize(s)
    if args.output == "csv":
        header = ["status", *BREAKDOWN_FIELDS]
        if res.feasible:
            rows = [["optimal", *breakdown_row(res.best_breakdown)]]
        else:
            rows = [["infeasible"] + [""] * len(BREAKDOWN_FIELDS)]
        emit(args, header, rows)
    elif res.feasible:
        print(f"optimal assignment over {res.evaluated_count} candidates\n")
        _print_breakdown(res.best_breakdown, s, states=False)
        print()
        top = res.ranking[: args.top]
        print(render_table(
            ["rank", "assignment", "Z", "A_1", "R_e", "feasible"],
            [[str(k + 1), str(b.assignment), fmt_money(b.z_total), fmt_money(b.a1_purchase),
              fmt_prob(b.r_e), "yes" if b.feasible else "/".join(b.failed_constraints)]
             for k, b in enumerate(top)],
        ))
    else:
        print(f"infeasible: none of {res.evaluated_count} assignments satisfies the constraints")
        failed = {"budget": 0, "reliability": 0}
        for reasons in res.infeasible_reasons.values():
            for r in reasons:
                failed[r] += 1
        for k, n in failed.items():
            print(f"  {k} constraint violated by {n} assignments")
    return EXIT_OK if res.feasible else EXIT_INFEASIBLE


def cmd_evaluate(args) -> int:
    s = _scenario(args)
    a = _assignment(args.assignment, s)
    b = economics.evaluate(s, a)
    if args.output == "csv":
        header = [*BREAKDOWN_FIELDS, *(f"S_{k}" for k in range(1, markov.N_STATES + 1))]
        emit(args, header, [breakdown_row(b, states=True)])
    else:
        _print_breakdown(b, s, states=True)
    return EXIT_OK


def cmd_simulate(args) -> int:
    s = _scenario(args)
    if not args.horizon_hours > 0:
        raise InputError("--horizon-hours must be positive")
    if args.assignment:
        a = _assignment(args.assignment, s)
    else:
        res = optimizer.optimize(s)
        a = res.best or Assignment(1, 1, 1, 1)
    rates = markov.derive_component_rates(s, a)
    exact = markov.steady_state_for(rates)
    est = mc_oracle.simulate(rates, args.horizon_hours, args.seed)
    verdict = "agree" if est.agrees_with(exact.p0, exact.p50, exact.p100) else "disagree"
    header = ["quantity", "exact", "estimate", "std_error", "half_width_99", "z_score"]
    rows = []
    for name, ex, hat, se, hw in zip(
        ("P_0", "P_50", "P_100"),
        (exact.p0, exact.p50, exact.p100),
        (est.p0_hat, est.p50_hat, est.p100_hat),
        est.std_error, est.half_width,
    ):
        z = (hat - ex) / se if se > 0 else 0.0
        rows.append([name, fmt_prob(ex), fmt_prob(hat), fmt_prob(se), fmt_prob(hw), f"{z:.3f}"])
    if args.output == "csv":
        emit(args, header + ["verdict"], [r + [verdict] for r in rows])
    else:
        print(f"assignment {a}, horizon {args.horizon_hours:g} h, seed {args.seed}, "
              f"{est.n_jumps} jumps\n")
        print(render_table(header, rows))
        print(f"\nverdict: {verdict} (3 sigma)")
    return EXIT_OK


def cmd_sensitivity(args) -> int:
    s = _scenario(args)
    names = [n.strip() for n in args.presets.split(",") if n.strip()]
    if names == ["all"]:
        presets = sensitivity.builtin_presets()
    else:
        presets = []
        for n in names:
            try:
                presets.append(sensitivity.preset_by_name(n))
            except KeyError:
                raise InputError(
                    f"unknown preset {n!r}; valid: all, {', '.join(sensitivity.preset_names())}"
                ) from None
    table = sensitivity.run_suite(s, presets)
    header = ["variable", *(c.name for c in table.columns)]
    rows = [["assignment", *(
        str(c.result.best) if c.feasible else c.status for c in table.columns
    )]]
    for var in sensitivity.ROWS:
        row = [var]
        for c in table.columns:
            vals = c.values()
            row.append(_ROW_FORMAT[var](vals[var]) if vals else c.status)
        rows.append(row)
    emit(args, header, rows)
    return EXIT_OK


def cmd_validate(args) -> int:
    try:
        s = load_scenario(args.scenario)
    except OSError as exc:
        raise InputError(f"cannot read {args.scenario}: {exc.strerror or exc}") from None
    except ScenarioError as exc:
        raise InputError(f"invalid scenario: {exc}") from None
    findings = validate_scenario(s, notes=True)
    emit(args, ["severity", "path", "message"],
         [[v.severity, v.path, v.message] for v in findings])
    return EXIT_INPUT if hard_violations(findings) else EXIT_OK


# --- argument parsing --------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("scenario", help="scenario JSON file")
    common.add_argument("--output", choices=("table", "csv"), default="table")
    common.add_argument("--lead-policy", choices=("max", "sum-as-written"), default=None,
                        help="how B/C/D group lead times combine (default: from the file)")
    common.add_argument("--set", action="append", metavar="KEY=VALUE",
                        help="override a scenario field; repeatable")
    common.add_argument("--seed", type=int, default=42)
    common.add_argument("--horizon-hours", type=float, default=1e6)

    ap = argparse.ArgumentParser(prog="supplier-alloc", description=__doc__.split("\n")[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", parents=[common], help="find the minimum-cost feasible plan")
    p.add_argument("--top", type=int, default=5, help="ranking rows to print")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("evaluate", parents=[common], help="cost breakdown of one assignment")
    p.add_argument("--assignment", required=True, help="e.g. A=3,B=1,C=2,D=1")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("simulate", parents=[common],
                       help="Monte Carlo check of the steady-state occupancies")
    p.add_argument("--assignment", default=None, help="default: the optimal assignment")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sensitivity", parents=[common], help="run preset scenario variations")
    p.add_argument("--presets", default="all",
                   help="'all' or comma-separated names: " + ", ".join(sensitivity.preset_names()))
    p.set_defaults(func=cmd_sensitivity)

    p = sub.add_parser("validate", parents=[common], help="check a scenario file")
    p.set_defaults(func=cmd_validate)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    raise SystemExit(main())
