"""Decision problems: dated-reward binary choices, consumption allocation, one-shot tasks.

Consumption and task problems share a small stage protocol used by the
planners in :mod:`intertemporal.planning`:

    horizon                      number of decision periods T (periods 0..T-1)
    initial_state()              state before period 0
    actions(t, state)            feasible actions, in tie-break preference order
    transition(state, action)    next state
    flows(t, action)             ((date, utility), ...) produced by the action
    utility_span()               bound on the undiscounted spread between plans

A plan is a tuple with one action per period. Its value from vantage ``s``
sums every flow dated ``s`` or later, each weighted by its delay from ``s``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Hashable, Optional, Sequence

from intertemporal._compare import strictly_greater
from intertemporal.discounting import DiscountFunction

DO = "do"
WAIT = "wait"


class ProblemError(ValueError):
    """Malformed problem, infeasible plan or an evaluation from an impossible vantage."""


def _nonneg_int(name: str, value: Any, minimum: int = 0) -> None:
    if isinstance(value, bool) or not isinstance(value, int) or value < minimum:
        raise ProblemError(f"{name} must be an integer >= {minimum}, got {value!r}")


# --------------------------------------------------------------------------
# Binary choices between dated rewards


@dataclass(frozen=True)
class DatedReward:
    amount: float
    at: int

    def __post_init__(self) -> None:
        if not isinstance(self.amount, (int, float)) or not math.isfinite(self.amount):
            raise ProblemError(f"amount must be finite, got {self.amount!r}")
        _nonneg_int("at", self.at)


@dataclass(frozen=True)
class BinaryChoice:
    """Pick one of two dated rewards; the pick is irrevocable at ``decided_at``."""

    option_a: DatedReward
    option_b: DatedReward
    decided_at: int

    def __post_init__(self) -> None:
        _nonneg_int("decided_at", self.decided_at)
        if self.decided_at > min(self.option_a.at, self.option_b.at):
            raise ProblemError(
                f"decided_at={self.decided_at} is after a reward date "
                f"({self.option_a.at}, {self.option_b.at})"
            )


@dataclass(frozen=True)
class Choice:
    selection: str  # "A" or "B"
    value_a: float
    value_b: float
    vantage: int


def evaluate_dated(reward: DatedReward, f: DiscountFunction, now: int) -> float:
    if now > reward.at:
        raise ProblemError(f"reward at period {reward.at} is in the past at period {now}")
    return f.present_value(reward.amount, reward.at - now)


def choose(choice: BinaryChoice, f: DiscountFunction, now: int) -> Choice:
    """Preferred option from vantage ``now``.

    Strictly larger discounted value wins; ties go to the earlier reward
    date, then to option A. When ``now < decided_at`` this is the option the
    current self would like its future self to pick, not a binding decision.
    """
    if now > choice.decided_at:
        raise ProblemError(f"vantage {now} is after the decision time {choice.decided_at}")
    va = evaluate_dated(choice.option_a, f, now)
    vb = evaluate_dated(choice.option_b, f, now)
    pick = select(va, vb, choice.option_a.at, choice.option_b.at)
    return Choice(selection=pick, value_a=va, value_b=vb, vantage=now)


def select(value_a: float, value_b: float, at_a: int, at_b: int) -> str:
    """Selection rule shared by every binary comparison: "A" or "B"."""
    if strictly_greater(value_a, value_b):
        return "A"
    if strictly_greater(value_b, value_a):
        return "B"
    return "B" if at_b < at_a else "A"


# --------------------------------------------------------------------------
# Per-period utility


class UtilityFunction:
    def __call__(self, r: float) -> float:
        raise NotImplementedError

    def describe(self) -> str:
        return repr(self)


@dataclass(frozen=True)
class Linear(UtilityFunction):
    def __call__(self, r: float) -> float:
        return float(r)

    def describe(self) -> str:
        return "linear"


@dataclass(frozen=True)
class Log(UtilityFunction):
    """u(r) = ln(1 + r)."""

    def __call__(self, r: float) -> float:
        return math.log1p(r)

    def describe(self) -> str:
        return "log"


@dataclass(frozen=True)
class Power(UtilityFunction):
    exponent: float

    def __post_init__(self) -> None:
        if not (isinstance(self.exponent, (int, float)) and 0.0 < self.exponent <= 1.0):
            raise ProblemError(f"exponent must satisfy 0 < exponent <= 1, got {self.exponent!r}")

    def __call__(self, r: float) -> float:
        return float(r) ** self.exponent

    def describe(self) -> str:
        return f"power(exponent={self.exponent!r})"


# --------------------------------------------------------------------------
# Staged problems


class StagedProblem:
    """Mixin with the plan bookkeeping shared by staged problems."""

    horizon: int

    def initial_state(self) -> Hashable:
        raise NotImplementedError

    def actions(self, t: int, state: Hashable) -> tuple:
        raise NotImplementedError

    def transition(self, state: Hashable, action: Any) -> Hashable:
        raise NotImplementedError

    def flows(self, t: int, action: Any) -> tuple[tuple[int, float], ...]:
        raise NotImplementedError

    def utility_span(self) -> float:
        raise NotImplementedError

    def state_after(self, prefix: Sequence) -> Hashable:
        """State reached by executing ``prefix`` from period 0; raises if infeasible."""
        if len(prefix) > self.horizon:
            raise ProblemError(f"plan has {len(prefix)} periods, horizon is {self.horizon}")
        state = self.initial_state()
        for t, a in enumerate(prefix):
            if a not in self.actions(t, state):
                raise ProblemError(f"action {a!r} infeasible at period {t} in state {state!r}")
            state = self.transition(state, a)
        return state

    def is_feasible(self, plan: Sequence) -> bool:
        if len(plan) != self.horizon:
            return False
        try:
            self.state_after(plan)
        except ProblemError:
            return False
        return True


@dataclass(frozen=True)
class ConsumptionProblem(StagedProblem):
    """Split ``endowment`` integer units over periods 0..horizon-1.

    State is the remaining endowment. Actions run from the largest feasible
    allocation down to zero, so ties favour consuming earlier.
    """

    horizon: int
    endowment: int
    utility: UtilityFunction = Linear()

    def __post_init__(self) -> None:
        _nonneg_int("horizon", self.horizon, 1)
        _nonneg_int("endowment", self.endowment)

    def initial_state(self) -> int:
        return self.endowment

    def actions(self, t: int, state: int) -> tuple[int, ...]:
        return tuple(range(state, -1, -1))

    def transition(self, state: int, action: int) -> int:
        return state - action

    def flows(self, t: int, action: int) -> tuple[tuple[int, float], ...]:
        return ((t, self.utility(action)),)

    def utility_span(self) -> float:
        return self.horizon * self.utility(self.endowment)


@dataclass(frozen=True)
class TaskProblem(StagedProblem):
    """Do a costly task once in periods 0..deadline-1, or never.

    Doing it at ``t`` costs ``cost`` at ``t`` and pays ``benefit`` at the
    fixed period ``deadline``; with ``benefit_delay`` set the benefit is paid
    ``benefit_delay`` periods after the task instead. State is whether the
    task is done. ``do`` precedes ``wait`` in tie-break order.
    """

    deadline: int
    cost: float
    benefit: float
    benefit_delay: Optional[int] = None

    def __post_init__(self) -> None:
        _nonneg_int("deadline", self.deadline, 1)
        for name in ("cost", "benefit"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
                raise ProblemError(f"{name} must be positive and finite, got {v!r}")
        if self.benefit_delay is not None:
            _nonneg_int("benefit_delay", self.benefit_delay)

    @property
    def horizon(self) -> int:  # type: ignore[override]
        return self.deadline

    def benefit_date(self, done_at: int) -> int:
        if self.benefit_delay is None:
            return self.deadline
        return done_at + self.benefit_delay

    def initial_state(self) -> bool:
        return False

    def actions(self, t: int, state: bool) -> tuple[str, ...]:
        return (WAIT,) if state else (DO, WAIT)

    def transition(self, state: bool, action: str) -> bool:
        return state or action == DO

    def flows(self, t: int, action: str) -> tuple[tuple[int, float], ...]:
        if action == DO:
            return ((t, -float(self.cost)), (self.benefit_date(t), float(self.benefit)))
        return ()

    def utility_span(self) -> float:
        return float(self.cost + self.benefit)


def plan_flows(plan: Sequence, problem: StagedProblem) -> list[tuple[int, float]]:
    out: list[tuple[int, float]] = []
    for t, a in enumerate(plan):
        out.extend(problem.flows(t, a))
    return out


def plan_value(
    plan: Sequence, problem: StagedProblem, f: DiscountFunction, vantage: int = 0
) -> float:
    """Discounted value of a full plan from period ``vantage``.

    For consumption this is sum_{t >= vantage} weight(t - vantage) * U(r_t).
    Flows dated before the vantage are sunk and ignored.
    """
    if not problem.is_feasible(plan):
        raise ProblemError(f"infeasible plan {tuple(plan)!r}")
    _nonneg_int("vantage", vantage)
    if vantage > problem.horizon - 1:
        raise ProblemError(f"vantage {vantage} beyond last period {problem.horizon - 1}")
    total = 0.0
    for date, amount in plan_flows(plan, problem):
        if date >= vantage:
            total += amount * f.weight(date - vantage)
    return total
