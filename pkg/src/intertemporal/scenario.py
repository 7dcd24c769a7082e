"""Strict JSON scenario files.

Every section is a JSON object; unknown keys are rejected. Parse failures raise
:class:`ScenarioError` carrying one of the codes below and the dotted path of
the offending field.

    E_SYNTAX         not valid JSON, or the document is not an object
    E_UNKNOWN_FIELD  a key outside the schema
    E_MISSING_FIELD  a required key (or a section the subcommand needs) is absent
    E_TYPE           a value has the wrong JSON type
    E_INVARIANT      a value violates a domain constraint (e.g. delta >= 1)

See README.md for the full schema.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Any, Optional, Union

from intertemporal import discounting as dsc
from intertemporal import planning as pln
from intertemporal import problems as prb
from intertemporal import relativity as rel

E_SYNTAX = "E_SYNTAX"
E_UNKNOWN_FIELD = "E_UNKNOWN_FIELD"
E_MISSING_FIELD = "E_MISSING_FIELD"
E_TYPE = "E_TYPE"
E_INVARIANT = "E_INVARIANT"


class ScenarioError(Exception):
    def __init__(self, code: str, field: str, message: str):
        super().__init__(f"{code} at {field or '<root>'}: {message}")
        self.code = code
        self.field = field
        self.message = message


# --------------------------------------------------------------------------
# Resolved scenario


@dataclass(frozen=True)
class Commitment:
    penalty: float
    reference: Union[str, tuple]  # "committed" or an explicit plan


@dataclass(frozen=True)
class ConsistencySpec:
    horizon: int = 100
    tol: float = dsc.DEFAULT_TOL


@dataclass(frozen=True)
class ReversalSpec:
    amounts: tuple = tuple(range(1, 31))
    delay_bound: int = 4
    vantage_bound: int = 3


@dataclass(frozen=True)
class ProbeSearch:
    amounts: tuple = tuple(range(1, 41))
    delay_bound: int = 4


@dataclass(frozen=True)
class RelativitySpec:
    home: Optional[rel.Itinerary] = None
    traveler: Optional[rel.Itinerary] = None
    clock: str = "proper"
    probe: Optional[prb.BinaryChoice] = None
    search: Optional[ProbeSearch] = None


@dataclass(frozen=True)
class OutputSpec:
    format: str = "table"
    path: Optional[str] = None


@dataclass(frozen=True)
class Scenario:
    description: Optional[str] = None
    discount: Optional[dsc.DiscountFunction] = None
    problem: Optional[Union[prb.BinaryChoice, prb.ConsumptionProblem, prb.TaskProblem]] = None
    vantages: Optional[tuple] = None
    agent: Optional[pln.AgentKind] = None
    commitment: Optional[Commitment] = None
    consistency: Optional[ConsistencySpec] = None
    reversal: Optional[ReversalSpec] = None
    relativity: Optional[RelativitySpec] = None
    output: OutputSpec = OutputSpec()


FORMATS = ("table", "csv", "json")


# --------------------------------------------------------------------------
# Reading helpers


class _Obj:
    """A JSON object being consumed key by key; leftovers are unknown fields."""

    def __init__(self, data: Any, path: str):
        if not isinstance(data, dict):
            raise ScenarioError(E_TYPE, path, f"expected an object, got {_jtype(data)}")
        self.data = dict(data)
        self.path = path

    def sub(self, key: str) -> str:
        return f"{self.path}.{key}" if self.path else key

    def has(self, key: str) -> bool:
        return key in self.data

    def take(self, key: str, required: bool = True, default: Any = None) -> Any:
        if key not in self.data:
            if required:
                raise ScenarioError(E_MISSING_FIELD, self.sub(key), "required field is missing")
            return default
        return self.data.pop(key)

    def done(self) -> None:
        if self.data:
            key = sorted(self.data)[0]
            raise ScenarioError(E_UNKNOWN_FIELD, self.sub(key), "unknown field")


def _jtype(v: Any) -> str:
    if v is None:
        return "null"
    if isinstance(v, bool):
        return "boolean"
    if isinstance(v, (int, float)):
        return "number"
    if isinstance(v, str):
        return "string"
    if isinstance(v, list):
        return "array"
    return "object"


def _int(v: Any, path: str, minimum: Optional[int] = None) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        if isinstance(v, float) and v.is_integer():
            v = int(v)
        else:
            raise ScenarioError(E_TYPE, path, f"expected an integer, got {_jtype(v)}")
    if minimum is not None and v < minimum:
        raise ScenarioError(E_INVARIANT, path, f"must be >= {minimum}, got {v}")
    return v


def _num(v: Any, path: str) -> Union[int, float]:
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ScenarioError(E_TYPE, path, f"expected a number, got {_jtype(v)}")
    if not math.isfinite(v):
        raise ScenarioError(E_INVARIANT, path, "must be finite")
    return v


def _str(v: Any, path: str, choices: Optional[tuple] = None) -> str:
    if not isinstance(v, str):
        raise ScenarioError(E_TYPE, path, f"expected a string, got {_jtype(v)}")
    if choices is not None and v not in choices:
        raise ScenarioError(E_INVARIANT, path, f"must be one of {', '.join(choices)}; got {v!r}")
    return v


def _list(v: Any, path: str) -> list:
    if not isinstance(v, list):
        raise ScenarioError(E_TYPE, path, f"expected an array, got {_jtype(v)}")
    return v


def _build(path: str, ctor, *args, **kwargs):
    try:
        return ctor(*args, **kwargs)
    except ValueError as exc:
        raise ScenarioError(E_INVARIANT, path, str(exc)) from None


# --------------------------------------------------------------------------
# Sections


def _discount(data: Any, path: str) -> dsc.DiscountFunction:
    o = _Obj(data, path)
    family = _str(
        o.take("family"),
        o.sub("family"),
        ("exponential", "hyperbolic", "shifted_hyperbolic", "tabulated"),
    )
    if family == "exponential":
        if o.has("delta") and o.has("interest_rate"):
            raise ScenarioError(E_INVARIANT, o.sub("interest_rate"), "give delta or interest_rate, not both")
        if o.has("interest_rate"):
            i = _num(o.take("interest_rate"), o.sub("interest_rate"))
            f = _build(o.sub("interest_rate"), dsc.delta_from_interest_rate, i)
        else:
            delta = _num(o.take("delta"), o.sub("delta"))
            f = _build(o.sub("delta"), dsc.Exponential, float(delta))
    elif family == "hyperbolic":
        f = dsc.Hyperbolic()
    elif family == "shifted_hyperbolic":
        m = _int(o.take("m"), o.sub("m"), 0)
        f = dsc.ShiftedHyperbolic(m)
    else:
        p = o.sub("weights")
        ws = [_num(w, f"{p}[{i}]") for i, w in enumerate(_list(o.take("weights"), p))]
        f = _build(p, dsc.Tabulated, tuple(ws))
    o.done()
    return f


def _reward(data: Any, path: str) -> prb.DatedReward:
    o = _Obj(data, path)
    amount = _num(o.take("amount"), o.sub("amount"))
    at = _int(o.take("at"), o.sub("at"), 0)
    o.done()
    return prb.DatedReward(amount, at)


def _binary(o: _Obj, decided_default: bool = False) -> prb.BinaryChoice:
    a = _reward(o.take("option_a"), o.sub("option_a"))
    b = _reward(o.take("option_b"), o.sub("option_b"))
    if decided_default:
        decided = _int(o.take("decided_at", required=False, default=0), o.sub("decided_at"), 0)
    else:
        decided = _int(o.take("decided_at"), o.sub("decided_at"), 0)
    return _build(o.sub("decided_at"), prb.BinaryChoice, a, b, decided)


def _utility(data: Any, path: str) -> prb.UtilityFunction:
    o = _Obj(data, path)
    kind = _str(o.take("kind"), o.sub("kind"), ("linear", "log", "power"))
    if kind == "linear":
        u = prb.Linear()
    elif kind == "log":
        u = prb.Log()
    else:
        e = _num(o.take("exponent"), o.sub("exponent"))
        u = _build(o.sub("exponent"), prb.Power, float(e))
    o.done()
    return u


def _problem(data: Any, path: str):
    o = _Obj(data, path)
    kind = _str(o.take("kind"), o.sub("kind"), ("binary_choice", "consumption", "task"))
    vantages = None
    if kind == "binary_choice":
        problem = _binary(o)
        if o.has("vantages"):
            p = o.sub("vantages")
            vs = _list(o.take("vantages"), p)
            if not vs:
                raise ScenarioError(E_INVARIANT, p, "must list at least one vantage")
            vantages = tuple(_int(v, f"{p}[{i}]", 0) for i, v in enumerate(vs))
            for i, v in enumerate(vantages):
                if v > problem.decided_at:
                    raise ScenarioError(
                        E_INVARIANT, f"{p}[{i}]", f"vantage {v} is after decided_at={problem.decided_at}"
                    )
    elif kind == "consumption":
        horizon = _int(o.take("horizon"), o.sub("horizon"), 1)
        endowment = _int(o.take("endowment"), o.sub("endowment"), 0)
        utility = prb.Linear()
        if o.has("utility"):
            utility = _utility(o.take("utility"), o.sub("utility"))
        problem = prb.ConsumptionProblem(horizon, endowment, utility)
    else:
        deadline = _int(o.take("deadline"), o.sub("deadline"), 1)
        cost = _num(o.take("cost"), o.sub("cost"))
        if cost <= 0:
            raise ScenarioError(E_INVARIANT, o.sub("cost"), f"must be positive, got {cost}")
        benefit = _num(o.take("benefit"), o.sub("benefit"))
        if benefit <= 0:
            raise ScenarioError(E_INVARIANT, o.sub("benefit"), f"must be positive, got {benefit}")
        delay = o.take("benefit_delay", required=False)
        if delay is not None:
            delay = _int(delay, o.sub("benefit_delay"), 0)
        problem = prb.TaskProblem(deadline, cost, benefit, delay)
    o.done()
    return problem, vantages


def _agent(data: Any, path: str) -> pln.AgentKind:
    o = _Obj(data, path)
    kind = _str(
        o.take("kind"), o.sub("kind"), ("naive", "sophisticated", "committed", "self_modifying")
    )
    if kind == "naive":
        agent = pln.Naive()
    elif kind == "sophisticated":
        agent = pln.Sophisticated()
    elif kind == "committed":
        agent = pln.Committed()
    else:
        k = _int(o.take("modify_at"), o.sub("modify_at"), 0)
        before = _str(
            o.take("before", required=False, default="naive"),
            o.sub("before"),
            ("naive", "sophisticated"),
        )
        agent = pln.SelfModifying(k, before)
    o.done()
    return agent


def _action(v: Any, path: str, problem) -> Any:
    if isinstance(problem, prb.TaskProblem):
        return _str(v, path, (prb.DO, prb.WAIT))
    return _int(v, path, 0)


def _commitment(data: Any, path: str, problem) -> Commitment:
    o = _Obj(data, path)
    penalty = _num(o.take("penalty"), o.sub("penalty"))
    if penalty < 0:
        raise ScenarioError(E_INVARIANT, o.sub("penalty"), f"must be nonnegative, got {penalty}")
    ref = o.take("reference", required=False, default="committed")
    p = o.sub("reference")
    if isinstance(ref, str):
        ref = _str(ref, p, ("committed",))
    else:
        ref = tuple(_action(a, f"{p}[{i}]", problem) for i, a in enumerate(_list(ref, p)))
        if problem is not None and not problem.is_feasible(ref):
            raise ScenarioError(E_INVARIANT, p, f"reference plan {list(ref)} is infeasible")
    o.done()
    return Commitment(float(penalty), ref)


def _amounts(v: Any, path: str) -> tuple:
    if isinstance(v, dict):
        o = _Obj(v, path)
        lo = _int(o.take("from"), o.sub("from"))
        hi = _int(o.take("to"), o.sub("to"))
        o.done()
        out = tuple(range(lo, hi + 1))
    else:
        out = tuple(_num(a, f"{path}[{i}]") for i, a in enumerate(_list(v, path)))
    if not out:
        raise ScenarioError(E_INVARIANT, path, "amount grid is empty")
    return out


def _consistency(data: Any, path: str) -> ConsistencySpec:
    o = _Obj(data, path)
    spec = ConsistencySpec()
    horizon = _int(o.take("horizon", required=False, default=spec.horizon), o.sub("horizon"), 2)
    tol = _num(o.take("tol", required=False, default=spec.tol), o.sub("tol"))
    if tol < 0:
        raise ScenarioError(E_INVARIANT, o.sub("tol"), f"must be nonnegative, got {tol}")
    o.done()
    return ConsistencySpec(horizon, float(tol))


def _reversal(data: Any, path: str) -> ReversalSpec:
    o = _Obj(data, path)
    d = ReversalSpec()
    amounts = d.amounts
    if o.has("amounts"):
        amounts = _amounts(o.take("amounts"), o.sub("amounts"))
    db = _int(o.take("delay_bound", required=False, default=d.delay_bound), o.sub("delay_bound"), 0)
    vb = _int(o.take("vantage_bound", required=False, default=d.vantage_bound), o.sub("vantage_bound"), 0)
    o.done()
    return ReversalSpec(amounts, db, vb)


def _itinerary(data: Any, path: str) -> rel.Itinerary:
    segs = []
    for i, s in enumerate(_list(data, path)):
        sp = f"{path}[{i}]"
        o = _Obj(s, sp)
        dt = _num(o.take("coordinate_duration"), o.sub("coordinate_duration"))
        beta = _num(o.take("beta", required=False, default=0.0), o.sub("beta"))
        g = _num(o.take("gravity_ratio", required=False, default=0.0), o.sub("gravity_ratio"))
        o.done()
        segs.append(_build(sp, rel.ClockSegment, dt, beta, g))
    return _build(path, rel.Itinerary, tuple(segs))


def _relativity(data: Any, path: str) -> RelativitySpec:
    o = _Obj(data, path)
    home = traveler = probe = search = None
    if o.has("home"):
        home = _itinerary(o.take("home"), o.sub("home"))
    if o.has("traveler"):
        traveler = _itinerary(o.take("traveler"), o.sub("traveler"))
    clock = _str(o.take("clock", required=False, default="proper"), o.sub("clock"), rel.CLOCKS)
    if o.has("probe"):
        po = _Obj(o.take("probe"), o.sub("probe"))
        probe = _binary(po, decided_default=True)
        po.done()
    if o.has("search"):
        so = _Obj(o.take("search"), o.sub("search"))
        d = ProbeSearch()
        amounts = d.amounts
        if so.has("amounts"):
            amounts = _amounts(so.take("amounts"), so.sub("amounts"))
        db = _int(so.take("delay_bound", required=False, default=d.delay_bound), so.sub("delay_bound"), 0)
        so.done()
        search = ProbeSearch(amounts, db)
    if home is None and traveler is None:
        raise ScenarioError(E_MISSING_FIELD, o.sub("home"), "at least one itinerary is required")
    if home is not None and traveler is not None:
        a, b = home.coordinate_duration, traveler.coordinate_duration
        if not math.isclose(a, b, rel_tol=1e-12, abs_tol=1e-12):
            raise ScenarioError(
                E_INVARIANT, o.sub("traveler"), f"coordinate span {b} differs from home span {a}"
            )
    o.done()
    return RelativitySpec(home, traveler, clock, probe, search)


def _output(data: Any, path: str) -> OutputSpec:
    o = _Obj(data, path)
    fmt = _str(o.take("format", required=False, default="table"), o.sub("format"), FORMATS)
    dest = o.take("path", required=False)
    if dest is not None:
        dest = _str(dest, o.sub("path"))
    o.done()
    return OutputSpec(fmt, dest)


def scenario_from_dict(data: Any) -> Scenario:
    o = _Obj(data, "")
    kw: dict[str, Any] = {}
    if o.has("description"):
        kw["description"] = _str(o.take("description"), "description")
    if o.has("discount"):
        kw["discount"] = _discount(o.take("discount"), "discount")
    if o.has("problem"):
        kw["problem"], kw["vantages"] = _problem(o.take("problem"), "problem")
    if o.has("agent"):
        kw["agent"] = _agent(o.take("agent"), "agent")
        problem = kw.get("problem")
        k = kw["agent"]
        if isinstance(k, pln.SelfModifying) and problem is not None and not isinstance(problem, prb.BinaryChoice):
            if k.modify_at >= problem.horizon:
                raise ScenarioError(
                    E_INVARIANT, "agent.modify_at", f"must be below the horizon {problem.horizon}, got {k.modify_at}"
                )
    if o.has("commitment"):
        kw["commitment"] = _commitment(o.take("commitment"), "commitment", kw.get("problem"))
    if o.has("consistency"):
        kw["consistency"] = _consistency(o.take("consistency"), "consistency")
    if o.has("reversal"):
        kw["reversal"] = _reversal(o.take("reversal"), "reversal")
    if o.has("relativity"):
        kw["relativity"] = _relativity(o.take("relativity"), "relativity")
    if o.has("output"):
        kw["output"] = _output(o.take("output"), "output")
    o.done()
    return Scenario(**kw)


def parse_scenario(text: str) -> Scenario:
    """Parse and validate a scenario document."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(E_SYNTAX, "", f"invalid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ScenarioError(E_SYNTAX, "", f"document must be a JSON object, got {_jtype(data)}")
    return scenario_from_dict(data)


# --------------------------------------------------------------------------
# Canonical serialisation (embedded in JSON reports)


def discount_to_dict(f: dsc.DiscountFunction) -> dict:
    if isinstance(f, dsc.Exponential):
        return {"family": "exponential", "delta": f.delta}
    if isinstance(f, dsc.Hyperbolic):
        return {"family": "hyperbolic"}
    if isinstance(f, dsc.ShiftedHyperbolic):
        return {"family": "shifted_hyperbolic", "m": f.m}
    if isinstance(f, dsc.Tabulated):
        return {"family": "tabulated", "weights": list(f.weights)}
    raise TypeError(f"no scenario form for {f!r}")


def _reward_dict(r: prb.DatedReward) -> dict:
    return {"amount": r.amount, "at": r.at}


def _utility_dict(u: prb.UtilityFunction) -> dict:
    if isinstance(u, prb.Power):
        return {"kind": "power", "exponent": u.exponent}
    return {"kind": u.describe()}


def _itinerary_list(it: rel.Itinerary) -> list:
    return [
        {"coordinate_duration": s.coordinate_duration, "beta": s.beta, "gravity_ratio": s.gravity_ratio}
        for s in it.segments
    ]


def scenario_to_dict(sc: Scenario) -> dict:
    out: dict[str, Any] = {}
    if sc.description is not None:
        out["description"] = sc.description
    if sc.discount is not None:
        out["discount"] = discount_to_dict(sc.discount)
    p = sc.problem
    if isinstance(p, prb.BinaryChoice):
        d = {
            "kind": "binary_choice",
            "option_a": _reward_dict(p.option_a),
            "option_b": _reward_dict(p.option_b),
            "decided_at": p.decided_at,
        }
        if sc.vantages is not None:
            d["vantages"] = list(sc.vantages)
        out["problem"] = d
    elif isinstance(p, prb.ConsumptionProblem):
        out["problem"] = {
            "kind": "consumption",
            "horizon": p.horizon,
            "endowment": p.endowment,
            "utility": _utility_dict(p.utility),
        }
    elif isinstance(p, prb.TaskProblem):
        d = {"kind": "task", "deadline": p.deadline, "cost": p.cost, "benefit": p.benefit}
        if p.benefit_delay is not None:
            d["benefit_delay"] = p.benefit_delay
        out["problem"] = d
    if sc.agent is not None:
        d = {"kind": sc.agent.name}
        if isinstance(sc.agent, pln.SelfModifying):
            d.update(modify_at=sc.agent.modify_at, before=sc.agent.before)
        out["agent"] = d
    if sc.commitment is not None:
        ref = sc.commitment.reference
        out["commitment"] = {
            "penalty": sc.commitment.penalty,
            "reference": ref if isinstance(ref, str) else list(ref),
        }
    if sc.consistency is not None:
        out["consistency"] = {"horizon": sc.consistency.horizon, "tol": sc.consistency.tol}
    if sc.reversal is not None:
        out["reversal"] = {
            "amounts": list(sc.reversal.amounts),
            "delay_bound": sc.reversal.delay_bound,
            "vantage_bound": sc.reversal.vantage_bound,
        }
    r = sc.relativity
    if r is not None:
        d = {}
        if r.home is not None:
            d["home"] = _itinerary_list(r.home)
        if r.traveler is not None:
            d["traveler"] = _itinerary_list(r.traveler)
        d["clock"] = r.clock
        if r.probe is not None:
            d["probe"] = {
                "option_a": _reward_dict(r.probe.option_a),
                "option_b": _reward_dict(r.probe.option_b),
                "decided_at": r.probe.decided_at,
            }
        if r.search is not None:
            d["search"] = {"amounts": list(r.search.amounts), "delay_bound": r.search.delay_bound}
        out["relativity"] = d
    out["output"] = {"format": sc.output.format, "path": sc.output.path}
    return out
