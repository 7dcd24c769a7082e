"""Preference-reversal witnesses: search and verification."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Optional

from intertemporal._compare import strictly_greater
from intertemporal.discounting import DiscountFunction
from intertemporal.problems import DatedReward


class ReversalError(ValueError):
    pass


@dataclass(frozen=True)
class ReversalWitness:
    """``large`` (later) strictly wins from ``early_vantage``; ``small`` (sooner) strictly wins from ``late_vantage``."""

    small: DatedReward
    large: DatedReward
    early_vantage: int
    late_vantage: int
    early_small: float
    early_large: float
    late_small: float
    late_large: float


def _structurally_valid(small: DatedReward, large: DatedReward, s1: int, s2: int) -> bool:
    return 0 <= s1 < s2 <= small.at < large.at


def _values(f: DiscountFunction, small: DatedReward, large: DatedReward, s1: int, s2: int):
    return (
        f.present_value(small.amount, small.at - s1),
        f.present_value(large.amount, large.at - s1),
        f.present_value(small.amount, small.at - s2),
        f.present_value(large.amount, large.at - s2),
    )


def _flips(early_small, early_large, late_small, late_large) -> bool:
    return strictly_greater(early_large, early_small) and strictly_greater(late_small, late_large)


def witness_for(
    f: DiscountFunction, small: DatedReward, large: DatedReward, s1: int, s2: int
) -> ReversalWitness:
    """Build a witness with its four values computed under ``f`` (no flip check)."""
    es, el, ls, ll = _values(f, small, large, s1, s2)
    return ReversalWitness(small, large, s1, s2, es, el, ls, ll)


def verify_witness(w: ReversalWitness, f: DiscountFunction) -> bool:
    """True iff ``f`` reproduces the flip with strict inequalities at both vantages.

    The stored values are ignored; everything is recomputed from ``f``.
    """
    if not _structurally_valid(w.small, w.large, w.early_vantage, w.late_vantage):
        return False
    try:
        vals = _values(f, w.small, w.large, w.early_vantage, w.late_vantage)
    except ValueError:
        return False
    return _flips(*vals)


def _candidates(amounts: list[float], delay_bound: int, vantage_bound: int) -> Iterator[tuple]:
    # Search order: X, Y, t1, t2, s1, s2 all ascending.
    for x in amounts:
        for y in amounts:
            for t1 in range(delay_bound + 1):
                for t2 in range(t1 + 1, delay_bound + 1):
                    top = min(t1, vantage_bound)
                    for s1 in range(top):
                        for s2 in range(s1 + 1, top + 1):
                            yield x, y, t1, t2, s1, s2


def find_reversal(
    f: DiscountFunction,
    amount_grid: Iterable[float],
    delay_bound: int,
    vantage_bound: int,
) -> Optional[ReversalWitness]:
    """First reversal on the grid, or None.

    Reward dates range over 0..delay_bound and vantages over 0..vantage_bound,
    so every delay evaluated is at most ``delay_bound``. Candidates are
    ordered by small amount, large amount, sooner date, later date, early
    vantage, late vantage, each ascending.
    """
    amounts = sorted(set(amount_grid))
    if not amounts:
        raise ReversalError("amount grid is empty")
    for name, v in (("delay_bound", delay_bound), ("vantage_bound", vantage_bound)):
        if isinstance(v, bool) or not isinstance(v, int) or v < 0:
            raise ReversalError(f"{name} must be a nonnegative integer, got {v!r}")
    for x, y, t1, t2, s1, s2 in _candidates(amounts, delay_bound, vantage_bound):
        small, large = DatedReward(x, t1), DatedReward(y, t2)
        vals = _values(f, small, large, s1, s2)
        if _flips(*vals):
            return ReversalWitness(small, large, s1, s2, *vals)
    return None
