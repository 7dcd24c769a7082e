"""Proper time along travel itineraries, and clones whose discounting runs on their own clocks.

A segment of coordinate duration dt at speed beta (c = 1) at radius r from a
mass with Schwarzschild radius r_s elapses

    tau = dt * sqrt(1 - beta**2) * sqrt(1 - r_s / r)

of proper time. Acceleration phases are ignored.

Clone scenario: two copies share a discount function keyed to elapsed time
since a common reference event (the departure). After reunion each copy is
offset by its own elapsed time ``m``, rounded to the period grid, and weighs
a reward ``d`` periods ahead with ``weight(d + m)``. Both copies sit together
after reunion, so remaining delays are the same on either clock.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional

from intertemporal.discounting import DiscountFunction, shift
from intertemporal.problems import BinaryChoice, Choice, DatedReward, choose, select


class RelativityError(ValueError):
    pass


@dataclass(frozen=True)
class ClockSegment:
    coordinate_duration: float
    beta: float = 0.0
    gravity_ratio: float = 0.0

    def __post_init__(self) -> None:
        dt = self.coordinate_duration
        if not (isinstance(dt, (int, float)) and math.isfinite(dt) and dt > 0):
            raise RelativityError(f"coordinate_duration must be positive, got {dt!r}")
        if not (isinstance(self.beta, (int, float)) and 0.0 <= self.beta < 1.0):
            raise RelativityError(f"beta must lie in [0, 1), got {self.beta!r}")
        if not (isinstance(self.gravity_ratio, (int, float)) and 0.0 <= self.gravity_ratio < 1.0):
            raise RelativityError(f"gravity_ratio must lie in [0, 1), got {self.gravity_ratio!r}")


@dataclass(frozen=True)
class Itinerary:
    segments: tuple[ClockSegment, ...]

    def __post_init__(self) -> None:
        segs = tuple(self.segments)
        if not segs:
            raise RelativityError("itinerary must contain at least one segment")
        object.__setattr__(self, "segments", segs)

    @property
    def coordinate_duration(self) -> float:
        return math.fsum(s.coordinate_duration for s in self.segments)


def proper_time(seg: ClockSegment) -> float:
    return (
        seg.coordinate_duration
        * math.sqrt(1.0 - seg.beta * seg.beta)
        * math.sqrt(1.0 - seg.gravity_ratio)
    )


def elapsed_proper_time(it: Itinerary) -> float:
    # fsum is correctly rounded, so the total does not depend on segment order.
    return math.fsum(proper_time(s) for s in it.segments)


def round_half_away(x: float) -> int:
    return int(math.copysign(math.floor(abs(x) + 0.5), x))


@dataclass(frozen=True)
class CloneView:
    elapsed: float  # time on the clock the discounting is keyed to
    offset: int  # elapsed rounded to the period grid
    choice: Choice


@dataclass(frozen=True)
class DivergenceReport:
    probe: BinaryChoice
    home: CloneView
    traveler: CloneView
    clock: str

    @property
    def diverges(self) -> bool:
        return self.home.choice.selection != self.traveler.choice.selection


CLOCKS = ("proper", "coordinate")


def _clock(it: Itinerary, clock: str) -> tuple[float, int]:
    elapsed = elapsed_proper_time(it) if clock == "proper" else it.coordinate_duration
    return elapsed, round_half_away(elapsed)


def _check_spans(home: Itinerary, traveler: Itinerary) -> None:
    a, b = home.coordinate_duration, traveler.coordinate_duration
    if not math.isclose(a, b, rel_tol=1e-12, abs_tol=1e-12):
        raise RelativityError(f"itineraries span different coordinate durations ({a} vs {b})")


def clone_divergence(
    f: DiscountFunction,
    home: Itinerary,
    traveler: Itinerary,
    probe: BinaryChoice,
    clock: str = "proper",
) -> DivergenceReport:
    """Evaluate ``probe`` at reunion from each clone's standpoint.

    Probe dates are coordinate periods counted from the reunion. ``clock``
    selects what the discounting is keyed to; with ``"coordinate"`` both
    clones share one offset and can never disagree.
    """
    return _comparer(f, home, traveler, clock)(probe)


def _comparer(f: DiscountFunction, home: Itinerary, traveler: Itinerary, clock: str):
    if clock not in CLOCKS:
        raise RelativityError(f"clock must be one of {CLOCKS}, got {clock!r}")
    _check_spans(home, traveler)
    clones = []
    for it in (home, traveler):
        elapsed, offset = _clock(it, clock)
        clones.append((elapsed, offset, shift(f, offset)))

    def compare(probe: BinaryChoice) -> DivergenceReport:
        home_view, traveler_view = (
            CloneView(elapsed, offset, choose(probe, g, probe.decided_at)) for elapsed, offset, g in clones
        )
        return DivergenceReport(probe=probe, home=home_view, traveler=traveler_view, clock=clock)

    compare.clones = clones
    return compare


def find_diverging_probe(
    f: DiscountFunction,
    home: Itinerary,
    traveler: Itinerary,
    amounts: Iterable[float],
    delay_bound: int,
    clock: str = "proper",
) -> Optional[DivergenceReport]:
    """First probe (a_amount, b_amount, a_delay, b_delay ascending) on which the clones disagree."""
    grid = sorted(set(amounts))
    if not grid:
        raise RelativityError("amount grid is empty")
    compare = _comparer(f, home, traveler, clock)
    delays = range(delay_bound + 1)
    # Screen with cached weights; only a hit is rebuilt as a full report.
    tables = [[g.weight(d) for d in delays] for _, _, g in compare.clones]
    for xa in grid:
        for xb in grid:
            for da in delays:
                for db in delays:
                    home_pick, traveler_pick = (select(xa * w[da], xb * w[db], da, db) for w in tables)
                    if home_pick != traveler_pick:
                        return compare(BinaryChoice(DatedReward(xa, da), DatedReward(xb, db), 0))
    return None
