"""Agent behaviour over staged problems.

Each period is acted by a separate self. The agent kinds differ in how those
selves coordinate:

* ``Naive``: each self re-optimises from its own vantage, assumes its future
  selves will follow the plan, then executes only today's action.
* ``Sophisticated``: consistent planning by backward induction. The last self
  acts myopically in every reachable state and each earlier self best-responds,
  under its own discounting, to the fixed policies of its successors.
* ``Committed``: the period-0 optimal plan is executed verbatim.
* ``SelfModifying(k)``: selves before ``k`` act as ``before`` (naive by
  default). At ``k`` the discount function is rewritten so that the self at
  ``s >= k`` weights delay ``d`` as the original weights ``d + s - k``; for
  hyperbolic discounting that is 1/(1 + d + m) with ``m = s - k``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Hashable, Optional, Sequence, Union

from intertemporal._compare import first_best
from intertemporal.discounting import DiscountFunction, shift
from intertemporal.problems import ProblemError, StagedProblem, plan_flows

Plan = tuple


@dataclass(frozen=True)
class Naive:
    name = "naive"


@dataclass(frozen=True)
class Sophisticated:
    name = "sophisticated"


@dataclass(frozen=True)
class Committed:
    name = "committed"


@dataclass(frozen=True)
class SelfModifying:
    modify_at: int
    before: str = "naive"
    name = "self_modifying"

    def __post_init__(self) -> None:
        if isinstance(self.modify_at, bool) or not isinstance(self.modify_at, int) or self.modify_at < 0:
            raise ProblemError(f"modify_at must be a nonnegative integer, got {self.modify_at!r}")
        if self.before not in ("naive", "sophisticated"):
            raise ProblemError(f"before must be 'naive' or 'sophisticated', got {self.before!r}")


AgentKind = Union[Naive, Sophisticated, Committed, SelfModifying]


@dataclass(frozen=True)
class Trajectory:
    """Realised path of one simulation.

    ``per_period_plans[s]`` is the plan for periods s..T-1 that the self at
    ``s`` intended when it acted; ``realized_value_from[s]`` evaluates the
    realised path from vantage ``s`` with ``discount_used[s]``, the discount
    function in force for that self.
    """

    kind: str
    actions: Plan
    per_period_plans: tuple[Plan, ...]
    realized_value_from: tuple[float, ...]
    discount_used: tuple[DiscountFunction, ...]


def _flows_value(flows, f: DiscountFunction, vantage: int) -> float:
    total = 0.0
    for date, amount in flows:
        if date >= vantage:
            total += amount * f.weight(date - vantage)
    return total


def _value_from(plan: Sequence, problem: StagedProblem, f: DiscountFunction, vantage: int) -> float:
    return _flows_value(plan_flows(plan, problem), f, vantage)


@dataclass(frozen=True)
class PlanResult:
    actions: Plan  # periods vantage..T-1
    value: float
    vantage: int


def optimal_plan(
    problem: StagedProblem,
    f: DiscountFunction,
    vantage: int = 0,
    prefix: Sequence = (),
) -> PlanResult:
    """Best completion of ``prefix`` as judged from period ``vantage``.

    Dynamic programming over (period, state) with the vantage's weights held
    fixed. Near-ties (relative 1e-12) go to the action listed first by the
    problem, which makes the result the lexicographically preferred optimum.
    ``value`` covers the whole plan, prefix flows dated at or after the
    vantage included.
    """
    prefix = tuple(prefix)
    if len(prefix) != vantage:
        raise ProblemError(f"prefix has {len(prefix)} actions but vantage is {vantage}")
    if vantage > problem.horizon - 1:
        raise ProblemError(f"vantage {vantage} beyond last period {problem.horizon - 1}")
    start = problem.state_after(prefix)
    T = problem.horizon
    memo: dict[tuple[int, Hashable], tuple[float, Plan]] = {}

    def solve(t: int, state: Hashable) -> tuple[float, Plan]:
        if t == T:
            return 0.0, ()
        key = (t, state)
        if key in memo:
            return memo[key]

        def total(a):
            stage = _flows_value(problem.flows(t, a), f, vantage)
            return stage + solve(t + 1, problem.transition(state, a))[0]

        best, v = first_best(problem.actions(t, state), total)
        memo[key] = (v, (best,) + solve(t + 1, problem.transition(state, best))[1])
        return memo[key]

    completion = solve(vantage, start)[1]
    value = _value_from(prefix + completion, problem, f, vantage)
    return PlanResult(actions=completion, value=value, vantage=vantage)


def reachable_states(problem: StagedProblem) -> list[list[Hashable]]:
    """States reachable at each period 0..T-1, in first-seen order."""
    layers = [[problem.initial_state()]]
    for t in range(problem.horizon - 1):
        seen: dict[Hashable, None] = {}
        for s in layers[-1]:
            for a in problem.actions(t, s):
                seen.setdefault(problem.transition(s, a), None)
        layers.append(list(seen))
    return layers


@dataclass(frozen=True)
class SophisticatedPolicy:
    """Backward-induction policy: the action and induced continuation per (period, state)."""

    problem: StagedProblem
    action_at: dict
    continuation: dict

    def action(self, t: int, state: Hashable) -> Any:
        return self.action_at[(t, state)]

    def path(self, t: int, state: Hashable) -> Plan:
        """Actions for periods t..T-1 produced by following the policy from ``state``."""
        return self.continuation[(t, state)]


def sophisticated_policy(problem: StagedProblem, f: DiscountFunction) -> SophisticatedPolicy:
    T = problem.horizon
    layers = reachable_states(problem)
    action_at: dict = {}
    continuation: dict = {}
    for t in range(T - 1, -1, -1):
        for state in layers[t]:
            def path_for(a, t=t, state=state) -> Plan:
                if t == T - 1:
                    return (a,)
                return (a,) + continuation[(t + 1, problem.transition(state, a))]

            def value(a, t=t) -> float:
                flows = []
                for i, b in enumerate(path_for(a)):
                    flows.extend(problem.flows(t + i, b))
                return _flows_value(flows, f, t)

            best, _ = first_best(problem.actions(t, state), value)
            action_at[(t, state)] = best
            continuation[(t, state)] = path_for(best)
    return SophisticatedPolicy(problem=problem, action_at=action_at, continuation=continuation)


def _finish(kind: str, problem, actions, plans, discounts) -> Trajectory:
    actions = tuple(actions)
    values = tuple(
        _value_from(actions, problem, discounts[s], s) for s in range(problem.horizon)
    )
    return Trajectory(
        kind=kind,
        actions=actions,
        per_period_plans=tuple(plans),
        realized_value_from=values,
        discount_used=tuple(discounts),
    )


def _naive_step(problem, f, realized):
    plan = optimal_plan(problem, f, len(realized), realized).actions
    return plan[0], plan


def simulate(problem: StagedProblem, f: DiscountFunction, kind: AgentKind) -> Trajectory:
    T = problem.horizon
    realized: list = []
    plans: list[Plan] = []
    discounts: list[DiscountFunction] = []

    if isinstance(kind, Committed):
        plan = optimal_plan(problem, f, 0).actions
        for s in range(T):
            plans.append(plan[s:])
            discounts.append(f)
        return _finish(kind.name, problem, plan, plans, discounts)

    if isinstance(kind, SelfModifying) and kind.modify_at >= T:
        raise ProblemError(f"modify_at={kind.modify_at} must be below horizon {T}")

    policy: Optional[SophisticatedPolicy] = None
    if isinstance(kind, Sophisticated) or (
        isinstance(kind, SelfModifying) and kind.before == "sophisticated" and kind.modify_at > 0
    ):
        policy = sophisticated_policy(problem, f)

    state = problem.initial_state()
    for s in range(T):
        if isinstance(kind, Naive):
            f_s = f
            a, plan = _naive_step(problem, f_s, tuple(realized))
        elif isinstance(kind, Sophisticated):
            f_s = f
            plan = policy.path(s, state)
            a = plan[0]
        elif isinstance(kind, SelfModifying):
            if s < kind.modify_at:
                f_s = f
                if policy is not None:
                    plan = policy.path(s, state)
                    a = plan[0]
                else:
                    a, plan = _naive_step(problem, f_s, tuple(realized))
            else:
                f_s = shift(f, s - kind.modify_at)
                a, plan = _naive_step(problem, f_s, tuple(realized))
        else:
            raise TypeError(f"unknown agent kind {kind!r}")
        realized.append(a)
        plans.append(tuple(plan))
        discounts.append(f_s)
        state = problem.transition(state, a)
    return _finish(kind.name, problem, realized, plans, discounts)


# --------------------------------------------------------------------------
# Commitment device


@dataclass(frozen=True)
class PenalizedProblem(StagedProblem):
    """``base`` with ``penalty`` utility subtracted in every period that deviates from ``reference``."""

    base: StagedProblem
    reference: Plan
    penalty: float

    @property
    def horizon(self) -> int:  # type: ignore[override]
        return self.base.horizon

    def initial_state(self):
        return self.base.initial_state()

    def actions(self, t, state):
        return self.base.actions(t, state)

    def transition(self, state, action):
        return self.base.transition(state, action)

    def flows(self, t, action):
        flows = self.base.flows(t, action)
        if self.penalty and action != self.reference[t]:
            flows = flows + ((t, -float(self.penalty)),)
        return flows

    def utility_span(self) -> float:
        return self.base.utility_span()


def apply_commitment_penalty(
    problem: StagedProblem, reference_plan: Sequence, penalty: float
) -> PenalizedProblem:
    """Attach a per-period deviation penalty to ``problem``.

    A penalty of zero leaves every plan value unchanged. A penalty above
    ``problem.utility_span()`` makes every self follow ``reference_plan``.
    """
    reference = tuple(reference_plan)
    if not problem.is_feasible(reference):
        raise ProblemError(f"reference plan {reference!r} is infeasible")
    if not (isinstance(penalty, (int, float)) and math.isfinite(penalty)) or penalty < 0:
        raise ProblemError(f"penalty must be a nonnegative finite number, got {penalty!r}")
    return PenalizedProblem(base=problem, reference=reference, penalty=float(penalty))
