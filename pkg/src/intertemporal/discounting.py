"""Discount functions on an integer delay grid, present values and consistency checks.

Four families are built in:

    Exponential(delta)     weight(t) = delta**t
    Hyperbolic()           weight(t) = 1 / (1 + t)
    ShiftedHyperbolic(m)   weight(t) = 1 / (1 + t + m)
    Tabulated(weights)     weight(t) = weights[t], t <= len(weights) - 1

``Shifted(base, offset)`` is the generic delay shift used by self-modifying
agents and by the clone scenario; ``shift`` picks the tidiest representation.
"""

from __future__ import annotations

import math
import operator
from dataclasses import dataclass
from typing import Optional, Sequence

DEFAULT_TOL = 1e-9


class DiscountError(ValueError):
    """Invalid discount parameters or a delay outside the function's domain."""


def _as_delay(t) -> int:
    if isinstance(t, bool):
        raise DiscountError(f"delay must be an integer, got {t!r}")
    try:
        t = operator.index(t)
    except TypeError:
        raise DiscountError(f"delay must be an integer, got {t!r}") from None
    if t < 0:
        raise DiscountError(f"delay must be nonnegative, got {t}")
    return t


class DiscountFunction:
    """Base class for weightings of future delays."""

    #: Largest delay with a defined weight; None means unbounded.
    max_delay: Optional[int] = None

    def _weight(self, t: int) -> float:
        raise NotImplementedError

    def weight(self, t: int) -> float:
        t = _as_delay(t)
        if self.max_delay is not None and t > self.max_delay:
            raise DiscountError(
                f"delay {t} outside table range 0..{self.max_delay}"
            )
        return self._weight(t)

    def present_value(self, amount: float, t: int) -> float:
        return amount * self.weight(t)

    def describe(self) -> str:
        return repr(self)


@dataclass(frozen=True)
class Exponential(DiscountFunction):
    delta: float

    def __post_init__(self) -> None:
        if not (isinstance(self.delta, (int, float)) and 0.0 < self.delta < 1.0):
            raise DiscountError(f"delta must satisfy 0 < delta < 1, got {self.delta!r}")

    def _weight(self, t: int) -> float:
        return self.delta**t

    def describe(self) -> str:
        return f"exponential(delta={self.delta!r})"


@dataclass(frozen=True)
class Hyperbolic(DiscountFunction):
    def _weight(self, t: int) -> float:
        return 1.0 / (1 + t)

    def describe(self) -> str:
        return "hyperbolic"


@dataclass(frozen=True)
class ShiftedHyperbolic(DiscountFunction):
    """Hyperbolic weights offset by ``m`` periods already elapsed: 1/(1+t+m)."""

    m: int

    def __post_init__(self) -> None:
        if isinstance(self.m, bool) or not isinstance(self.m, int) or self.m < 0:
            raise DiscountError(f"m must be a nonnegative integer, got {self.m!r}")

    def _weight(self, t: int) -> float:
        return 1.0 / (1 + t + self.m)

    def describe(self) -> str:
        return f"shifted_hyperbolic(m={self.m})"


@dataclass(frozen=True)
class Tabulated(DiscountFunction):
    """Explicit weights for delays 0..H; validated positive and nonincreasing."""

    weights: tuple[float, ...]

    def __post_init__(self) -> None:
        ws = tuple(float(w) for w in self.weights)
        if not ws:
            raise DiscountError("weights must be nonempty")
        for i, w in enumerate(ws):
            if not math.isfinite(w) or w <= 0.0:
                raise DiscountError(f"weights[{i}] must be positive and finite, got {w!r}")
            if i and w > ws[i - 1]:
                raise DiscountError(
                    f"weights must be nonincreasing: weights[{i}]={w!r} > weights[{i - 1}]={ws[i - 1]!r}"
                )
        object.__setattr__(self, "weights", ws)

    @property
    def max_delay(self) -> int:  # type: ignore[override]
        return len(self.weights) - 1

    def _weight(self, t: int) -> float:
        return self.weights[t]

    def describe(self) -> str:
        return f"tabulated(H={self.max_delay})"


@dataclass(frozen=True)
class Shifted(DiscountFunction):
    """``base`` evaluated ``offset`` periods further out: weight(t) = base(t + offset)."""

    base: DiscountFunction
    offset: int

    def __post_init__(self) -> None:
        if isinstance(self.offset, bool) or not isinstance(self.offset, int) or self.offset < 0:
            raise DiscountError(f"offset must be a nonnegative integer, got {self.offset!r}")
        if self.base.max_delay is not None and self.offset > self.base.max_delay:
            raise DiscountError(
                f"offset {self.offset} exceeds table range 0..{self.base.max_delay}"
            )

    @property
    def max_delay(self) -> Optional[int]:  # type: ignore[override]
        if self.base.max_delay is None:
            return None
        return self.base.max_delay - self.offset

    def _weight(self, t: int) -> float:
        return self.base.weight(t + self.offset)

    def describe(self) -> str:
        return f"{self.base.describe()} shifted by {self.offset}"


def shift(f: DiscountFunction, m: int) -> DiscountFunction:
    """Discount function whose delay-``t`` weight is ``f``'s delay-``t + m`` weight.

    Hyperbolic families stay closed under shifting (1/(1+t) -> 1/(1+t+m)).
    """
    m = _as_delay(m)
    if m == 0:
        return f
    if isinstance(f, Hyperbolic):
        return ShiftedHyperbolic(m)
    if isinstance(f, ShiftedHyperbolic):
        return ShiftedHyperbolic(f.m + m)
    if isinstance(f, Tabulated):
        if m > f.max_delay:
            raise DiscountError(f"offset {m} exceeds table range 0..{f.max_delay}")
        return Tabulated(f.weights[m:])
    if isinstance(f, Shifted):
        return Shifted(f.base, f.offset + m)
    return Shifted(f, m)


def weight(f: DiscountFunction, t: int) -> float:
    return f.weight(t)


def present_value(f: DiscountFunction, amount: float, t: int) -> float:
    """Value now of receiving ``amount`` reward units ``t`` periods from now."""
    return f.present_value(amount, t)


def delta_from_interest_rate(i: float) -> Exponential:
    """The exponential discounter implied by borrowing/lending at rate ``i``."""
    if not (isinstance(i, (int, float)) and math.isfinite(i)) or i <= 0:
        raise DiscountError(f"interest rate must be positive, got {i!r}")
    return Exponential(1.0 / (1.0 + i))


@dataclass(frozen=True)
class RatioWitness:
    """Two delays whose one-step weight ratios differ by more than the tolerance."""

    a: int
    b: int
    ratio_a: float
    ratio_b: float
    deviation: float


@dataclass(frozen=True)
class ConsistencyVerdict:
    consistent: bool
    tol: float
    horizon: int
    max_deviation: float
    witness: Optional[RatioWitness] = None


def one_step_ratios(f: DiscountFunction, horizon: int) -> list[float]:
    return [f.weight(a + 1) / f.weight(a) for a in range(horizon)]


def check_consistency(
    f: DiscountFunction, horizon: int, tol: float = DEFAULT_TOL
) -> ConsistencyVerdict:
    """Certify or refute time consistency on delays 0..horizon.

    Consistent iff every one-step ratio weight(a+1)/weight(a) matches the
    first one to relative tolerance ``tol``. On failure the witness is the
    first offending delay ``b`` paired with ``a = 0``.
    """
    if isinstance(horizon, bool) or not isinstance(horizon, int) or horizon < 2:
        raise DiscountError(f"horizon must be an integer >= 2, got {horizon!r}")
    if not (tol >= 0):
        raise DiscountError(f"tol must be nonnegative, got {tol!r}")
    if f.max_delay is not None and f.max_delay < horizon:
        raise DiscountError(
            f"table covers delays 0..{f.max_delay}, shorter than horizon {horizon}"
        )
    ratios = one_step_ratios(f, horizon)
    r0 = ratios[0]
    deviations = [abs(r - r0) / r0 for r in ratios]
    max_dev = max(deviations)
    witness = None
    for b, dev in enumerate(deviations):
        if dev > tol:
            witness = RatioWitness(a=0, b=b, ratio_a=r0, ratio_b=ratios[b], deviation=dev)
            break
    return ConsistencyVerdict(
        consistent=witness is None,
        tol=tol,
        horizon=horizon,
        max_deviation=max_dev,
        witness=witness,
    )
