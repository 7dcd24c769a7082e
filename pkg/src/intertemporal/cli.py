"""Command-line front end.

    intertemporal <command> SCENARIO [--format table|csv|json] [--output PATH]

SCENARIO is a JSON file (``-`` reads standard input). Exit status is 0 on
success, 2 for parse/validation errors and 3 for domain errors raised while
running. Diagnostics go to standard error; nothing is written to the report
destination when a command fails.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from typing import Any, Callable, Optional, Sequence

from intertemporal import discounting as dsc
from intertemporal import planning as pln
from intertemporal import problems as prb
from intertemporal import relativity as rel
from intertemporal import reversal as rev
from intertemporal.scenario import (
    E_INVARIANT,
    E_MISSING_FIELD,
    FORMATS,
    ConsistencySpec,
    ReversalSpec,
    Scenario,
    ScenarioError,
    parse_scenario,
    scenario_to_dict,
)

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_DOMAIN = 3

E_DOMAIN = "E_DOMAIN"
E_IO = "E_IO"


class DomainError(Exception):
    pass


@dataclass
class Report:
    command: str
    columns: list[str]
    rows: list[list[Any]]
    result: dict
    notes: list[str] = field(default_factory=list)


# --------------------------------------------------------------------------
# Formatting


def _cell(v: Any) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _table_cell(v: Any) -> str:
    if isinstance(v, float):
        return f"{v:.6g}"
    return _cell(v)


def _plan_str(plan: Sequence) -> str:
    return " ".join(str(a) for a in plan)


def render(report: Report, scenario: Scenario, fmt: str) -> str:
    if fmt == "json":
        doc = {"command": report.command, "scenario": scenario_to_dict(scenario), "result": report.result}
        return json.dumps(doc, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(report.columns)
        for row in report.rows:
            w.writerow([_cell(v) for v in row])
        return buf.getvalue()
    cells = [report.columns] + [[_table_cell(v) for v in row] for row in report.rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(report.columns))]
    lines = [f"# {n}" for n in report.notes]
    for i, r in enumerate(cells):
        lines.append("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip())
        if i == 0:
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# Commands


def _need(sc: Scenario, name: str) -> Any:
    value = getattr(sc, name)
    if value is None:
        raise ScenarioError(E_MISSING_FIELD, name, "this command requires the section")
    return value


def _staged_problem(sc: Scenario) -> prb.StagedProblem:
    p = _need(sc, "problem")
    if isinstance(p, prb.BinaryChoice):
        raise ScenarioError(E_INVARIANT, "problem.kind", "binary_choice is handled by the choose command")
    return p


def cmd_choose(sc: Scenario) -> Report:
    f = _need(sc, "discount")
    p = _need(sc, "problem")
    if not isinstance(p, prb.BinaryChoice):
        raise ScenarioError(E_INVARIANT, "problem.kind", "choose needs a binary_choice problem")
    vantages = sc.vantages if sc.vantages is not None else (p.decided_at,)
    rows, out = [], []
    for v in vantages:
        c = prb.choose(p, f, v)
        rows.append([v, c.value_a, c.value_b, c.selection])
        out.append({"vantage": v, "value_a": c.value_a, "value_b": c.value_b, "selection": c.selection})
    return Report(
        "choose",
        ["vantage", "value_a", "value_b", "selection"],
        rows,
        {"choices": out},
        notes=[
            f"discount: {f.describe()}",
            f"A = {p.option_a.amount} @ {p.option_a.at}, B = {p.option_b.amount} @ {p.option_b.at}, decided at {p.decided_at}",
        ],
    )


def _resolve_problem(sc: Scenario, f: dsc.DiscountFunction):
    """The problem to simulate, with any commitment penalty applied."""
    problem = _staged_problem(sc)
    if sc.commitment is None:
        return problem, None
    ref = sc.commitment.reference
    if ref == "committed":
        ref = pln.optimal_plan(problem, f, 0).actions
    penalized = pln.apply_commitment_penalty(problem, ref, sc.commitment.penalty)
    return penalized, {"reference_plan": list(ref), "penalty": sc.commitment.penalty}


def _trajectory_dict(tr: pln.Trajectory) -> dict:
    return {
        "kind": tr.kind,
        "actions": list(tr.actions),
        "periods": [
            {
                "period": s,
                "action": a,
                "acting_value": tr.realized_value_from[s],
                "intended_plan": list(tr.per_period_plans[s]),
                "discount": tr.discount_used[s].describe(),
            }
            for s, a in enumerate(tr.actions)
        ],
    }


def cmd_run(sc: Scenario) -> Report:
    f = _need(sc, "discount")
    problem, commitment = _resolve_problem(sc, f)
    kind = sc.agent if sc.agent is not None else pln.Naive()
    tr = pln.simulate(problem, f, kind)
    rows = [
        [s, a, tr.realized_value_from[s], _plan_str(tr.per_period_plans[s]), tr.discount_used[s].describe()]
        for s, a in enumerate(tr.actions)
    ]
    result = {"trajectory": _trajectory_dict(tr)}
    notes = [f"agent: {kind.name}", f"discount: {f.describe()}"]
    if commitment is not None:
        result["commitment"] = commitment
        notes.append(f"commitment: penalty {commitment['penalty']} off reference {_plan_str(commitment['reference_plan'])}")
    return Report(
        "run",
        ["period", "action", "acting_value", "intended_plan", "discount"],
        rows,
        result,
        notes,
    )


AGENT_ORDER = ("naive", "sophisticated", "committed", "self_modifying")


def cmd_compare_agents(sc: Scenario) -> Report:
    f = _need(sc, "discount")
    problem, commitment = _resolve_problem(sc, f)
    modifier = sc.agent if isinstance(sc.agent, pln.SelfModifying) else pln.SelfModifying(0)
    kinds = (pln.Naive(), pln.Sophisticated(), pln.Committed(), modifier)
    trs = [pln.simulate(problem, f, k) for k in kinds]
    rows, differing = [], []
    for s in range(problem.horizon):
        acts = [t.actions[s] for t in trs]
        agree = all(a == acts[0] for a in acts)
        if not agree:
            differing.append(s)
        rows.append([s, *acts, agree])
    result = {
        "trajectories": {t.kind: _trajectory_dict(t) for t in trs},
        "self_modifying_at": modifier.modify_at,
        "identical": not differing,
        "differing_periods": differing,
    }
    if commitment is not None:
        result["commitment"] = commitment
    return Report(
        "compare-agents",
        ["period", *AGENT_ORDER, "agree"],
        rows,
        result,
        notes=[f"discount: {f.describe()}", f"self_modifying modifies at period {modifier.modify_at}"],
    )


def cmd_check_consistency(sc: Scenario) -> Report:
    f = _need(sc, "discount")
    spec = sc.consistency or ConsistencySpec()
    v = dsc.check_consistency(f, spec.horizon, spec.tol)
    w = v.witness
    row = [
        "consistent" if v.consistent else "inconsistent",
        v.horizon,
        v.tol,
        v.max_deviation,
        w.a if w else None,
        w.b if w else None,
        w.ratio_a if w else None,
        w.ratio_b if w else None,
        w.deviation if w else None,
    ]
    result = {
        "verdict": row[0],
        "consistent": v.consistent,
        "horizon": v.horizon,
        "tol": v.tol,
        "max_deviation": v.max_deviation,
        "witness": None
        if w is None
        else {"a": w.a, "b": w.b, "ratio_a": w.ratio_a, "ratio_b": w.ratio_b, "deviation": w.deviation},
    }
    return Report(
        "check-consistency",
        ["verdict", "horizon", "tol", "max_deviation", "witness_a", "witness_b", "ratio_a", "ratio_b", "deviation"],
        [row],
        result,
        notes=[f"discount: {f.describe()}"],
    )


REVERSAL_COLUMNS = [
    "found",
    "small_amount",
    "small_at",
    "large_amount",
    "large_at",
    "early_vantage",
    "late_vantage",
    "early_small",
    "early_large",
    "late_small",
    "late_large",
]


def cmd_find_reversal(sc: Scenario) -> Report:
    f = _need(sc, "discount")
    spec = sc.reversal or ReversalSpec()
    w = rev.find_reversal(f, spec.amounts, spec.delay_bound, spec.vantage_bound)
    if w is None:
        row = [False] + [None] * (len(REVERSAL_COLUMNS) - 1)
        witness = None
    else:
        row = [
            True,
            w.small.amount,
            w.small.at,
            w.large.amount,
            w.large.at,
            w.early_vantage,
            w.late_vantage,
            w.early_small,
            w.early_large,
            w.late_small,
            w.late_large,
        ]
        witness = dict(zip(REVERSAL_COLUMNS[1:], row[1:]))
        witness["verified"] = rev.verify_witness(w, f)
    return Report(
        "find-reversal",
        REVERSAL_COLUMNS,
        [row],
        {"found": w is not None, "witness": witness},
        notes=[
            f"discount: {f.describe()}",
            f"grid: {len(spec.amounts)} amounts, dates <= {spec.delay_bound}, vantages <= {spec.vantage_bound}",
        ],
    )


def cmd_dilate(sc: Scenario) -> Report:
    r = _need(sc, "relativity")
    rows, out = [], {}
    for name, it in (("home", r.home), ("traveler", r.traveler)):
        if it is None:
            continue
        segs = []
        for i, s in enumerate(it.segments):
            tau = rel.proper_time(s)
            rows.append([name, i, s.coordinate_duration, s.beta, s.gravity_ratio, tau])
            segs.append(
                {
                    "coordinate_duration": s.coordinate_duration,
                    "beta": s.beta,
                    "gravity_ratio": s.gravity_ratio,
                    "proper_time": tau,
                }
            )
        total = rel.elapsed_proper_time(it)
        rows.append([name, "total", it.coordinate_duration, None, None, total])
        out[name] = {"segments": segs, "coordinate_duration": it.coordinate_duration, "proper_time": total}
    return Report(
        "dilate",
        ["itinerary", "segment", "coordinate_duration", "beta", "gravity_ratio", "proper_time"],
        rows,
        {"itineraries": out},
    )


def _view_dict(v: rel.CloneView) -> dict:
    return {
        "elapsed": v.elapsed,
        "offset": v.offset,
        "value_a": v.choice.value_a,
        "value_b": v.choice.value_b,
        "selection": v.choice.selection,
    }


def cmd_clone_compare(sc: Scenario) -> Report:
    f = _need(sc, "discount")
    r = _need(sc, "relativity")
    if r.home is None:
        raise ScenarioError(E_MISSING_FIELD, "relativity.home", "clone-compare needs both itineraries")
    if r.traveler is None:
        raise ScenarioError(E_MISSING_FIELD, "relativity.traveler", "clone-compare needs both itineraries")
    if r.probe is None and r.search is None:
        raise ScenarioError(E_MISSING_FIELD, "relativity.probe", "give a probe or a search grid")
    reports = []
    if r.probe is not None:
        reports.append(("probe", rel.clone_divergence(f, r.home, r.traveler, r.probe, r.clock)))
    search_result: Optional[dict] = None
    if r.search is not None:
        found = rel.find_diverging_probe(f, r.home, r.traveler, r.search.amounts, r.search.delay_bound, r.clock)
        search_result = {"found": found is not None}
        if found is not None:
            reports.append(("search", found))
    rows, out = [], []
    for source, rep in reports:
        p = rep.probe
        probe_str = f"{p.option_a.amount}@{p.option_a.at} vs {p.option_b.amount}@{p.option_b.at}"
        for name, view in (("home", rep.home), ("traveler", rep.traveler)):
            rows.append(
                [source, probe_str, name, view.elapsed, view.offset, view.choice.value_a, view.choice.value_b,
                 view.choice.selection, rep.diverges]
            )
        out.append(
            {
                "source": source,
                "probe": {
                    "option_a": {"amount": p.option_a.amount, "at": p.option_a.at},
                    "option_b": {"amount": p.option_b.amount, "at": p.option_b.at},
                    "decided_at": p.decided_at,
                },
                "home": _view_dict(rep.home),
                "traveler": _view_dict(rep.traveler),
                "diverges": rep.diverges,
            }
        )
    result = {"clock": r.clock, "comparisons": out}
    if search_result is not None:
        result["search"] = search_result
    notes = [f"discount: {f.describe()} keyed to {r.clock} time"]
    if search_result is not None and not search_result["found"]:
        notes.append("search: no diverging probe on the grid")
    return Report(
        "clone-compare",
        ["source", "probe", "clone", "elapsed", "offset", "value_a", "value_b", "selection", "diverges"],
        rows,
        result,
        notes,
    )


COMMANDS: dict[str, tuple[Callable[[Scenario], Report], str]] = {
    "run": (cmd_run, "simulate one agent on a consumption or task problem"),
    "choose": (cmd_choose, "evaluate a binary choice from one or more vantages"),
    "check-consistency": (cmd_check_consistency, "certify or refute time consistency of the discount function"),
    "find-reversal": (cmd_find_reversal, "search a grid for a preference-reversal witness"),
    "dilate": (cmd_dilate, "proper time along the scenario's itineraries"),
    "clone-compare": (cmd_clone_compare, "compare two clones' choices after different itineraries"),
    "compare-agents": (cmd_compare_agents, "run all four agent kinds on one problem and diff their actions"),
}


def execute(command: str, text: str, fmt: Optional[str] = None) -> tuple[Scenario, str]:
    """Parse ``text`` and run ``command``; returns the scenario and rendered report.

    Raises ScenarioError (validation) or DomainError (runtime).
    """
    sc = parse_scenario(text)
    handler = COMMANDS[command][0]
    try:
        report = handler(sc)
    except ScenarioError:
        raise
    except ValueError as exc:
        raise DomainError(str(exc)) from exc
    return sc, render(report, sc, fmt or sc.output.format)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="intertemporal",
        description="Simulate and analyse agents with time-consistent and time-inconsistent discounting.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text, description=help_text)
        p.add_argument("scenario", help="scenario JSON file, or - for standard input")
        p.add_argument("--format", choices=FORMATS, help="report format (overrides output.format)")
        p.add_argument("--output", metavar="PATH", help="write the report here (overrides output.path)")
    return parser


def _diagnose(code: str, field: str, message: str) -> None:
    where = f" at {field}" if field else ""
    print(f"error[{code}]{where}: {message}", file=sys.stderr)


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.scenario == "-":
            text = sys.stdin.read()
        else:
            with open(args.scenario, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        _diagnose(E_IO, "", f"cannot read scenario: {exc}")
        return EXIT_INVALID
    try:
        sc, rendered = execute(args.command, text, args.format)
    except ScenarioError as exc:
        _diagnose(exc.code, exc.field, exc.message)
        return EXIT_INVALID
    except DomainError as exc:
        _diagnose(E_DOMAIN, "", str(exc))
        return EXIT_DOMAIN
    dest = args.output or sc.output.path
    if dest:
        try:
            with open(dest, "w", encoding="utf-8", newline="") as fh:
                fh.write(rendered)
        except OSError as exc:
            _diagnose(E_IO, "output.path", f"cannot write report: {exc}")
            return EXIT_DOMAIN
    else:
        sys.stdout.write(rendered)
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
