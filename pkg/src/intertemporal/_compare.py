"""Float comparison helpers shared by every argmax in the package."""

from __future__ import annotations

from typing import Callable, Sequence, TypeVar

# Relative margin below which two discounted values are treated as tied.
MARGIN = 1e-12

T = TypeVar("T")


def strictly_greater(a: float, b: float, margin: float = MARGIN) -> bool:
    return a - b > margin * max(abs(a), abs(b), 1.0)


def near_equal(a: float, b: float, margin: float = MARGIN) -> bool:
    return not strictly_greater(a, b, margin) and not strictly_greater(b, a, margin)


def first_best(candidates: Sequence[T], value: Callable[[T], float]) -> tuple[T, float]:
    """Return the first candidate whose value is within MARGIN of the maximum.

    ``candidates`` must already be in tie-break preference order.
    """
    if not candidates:
        raise ValueError("no candidates to choose from")
    values = [value(c) for c in candidates]
    top = max(values)
    for c, v in zip(candidates, values):
        if not strictly_greater(top, v):
            return c, v
    raise AssertionError("unreachable")
