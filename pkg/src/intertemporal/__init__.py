"""Agents with time-consistent and time-inconsistent discounting."""

from intertemporal.discounting import (
    ConsistencyVerdict,
    DiscountError,
    DiscountFunction,
    Exponential,
    Hyperbolic,
    Shifted,
    ShiftedHyperbolic,
    Tabulated,
    check_consistency,
    delta_from_interest_rate,
    present_value,
    shift,
    weight,
)
from intertemporal.planning import (
    Committed,
    Naive,
    SelfModifying,
    Sophisticated,
    Trajectory,
    apply_commitment_penalty,
    optimal_plan,
    simulate,
    sophisticated_policy,
)
from intertemporal.problems import (
    DO,
    WAIT,
    BinaryChoice,
    ConsumptionProblem,
    DatedReward,
    Linear,
    Log,
    Power,
    ProblemError,
    TaskProblem,
    choose,
    evaluate_dated,
    plan_value,
)
from intertemporal.relativity import (
    ClockSegment,
    Itinerary,
    clone_divergence,
    elapsed_proper_time,
    find_diverging_probe,
    proper_time,
)
from intertemporal.reversal import ReversalWitness, find_reversal, verify_witness

__version__ = "0.1.0"
