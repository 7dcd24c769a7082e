import math

import pytest
from hypothesis import given, strategies as st

from intertemporal.discounting import (
    DiscountError,
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

deltas = st.floats(min_value=0.01, max_value=0.99)
delays = st.integers(min_value=0, max_value=50)


def families():
    return [
        Exponential(0.9),
        Exponential(0.3),
        Hyperbolic(),
        ShiftedHyperbolic(0),
        ShiftedHyperbolic(5),
        Tabulated([1.0, 0.5, 0.5, 0.2, 0.1]),
        Shifted(Exponential(0.8), 3),
    ]


class TestWeight:
    def test_hyperbolic_two_days(self):
        assert weight(Hyperbolic(), 2) == pytest.approx(1 / 3, abs=1e-12)

    @pytest.mark.parametrize(
        "f", [Exponential(0.9), Hyperbolic(), ShiftedHyperbolic(0), Tabulated([1.0, 0.5])]
    )
    def test_zero_delay_is_one(self, f):
        assert weight(f, 0) == 1.0

    def test_exponential_cubed(self):
        # 0.9 ** 3 by hand
        assert weight(Exponential(0.9), 3) == pytest.approx(0.729, abs=1e-12)

    def test_shifted_hyperbolic(self):
        assert weight(ShiftedHyperbolic(5), 0) == pytest.approx(1 / 6)
        assert weight(ShiftedHyperbolic(5), 2) == pytest.approx(1 / 8)

    def test_tabulated_out_of_range(self):
        f = Tabulated([1.0, 0.5])
        assert weight(f, 1) == 0.5
        with pytest.raises(DiscountError, match="outside table range"):
            weight(f, 2)

    @pytest.mark.parametrize("t", [-1, 1.5, "2", True])
    def test_bad_delay(self, t):
        with pytest.raises(DiscountError):
            weight(Hyperbolic(), t)


class TestConstruction:
    @pytest.mark.parametrize("delta", [0, 1, 1.5, -0.2, float("nan")])
    def test_exponential_bounds(self, delta):
        with pytest.raises(DiscountError, match="delta"):
            Exponential(delta)

    @pytest.mark.parametrize(
        "weights", [[], [1.0, 0.0], [1.0, -0.5], [0.5, 1.0], [1.0, float("inf")]]
    )
    def test_tabulated_rejects(self, weights):
        with pytest.raises(DiscountError):
            Tabulated(weights)

    def test_tabulated_is_hashable_tuple(self):
        f = Tabulated([1, 0.5])
        assert f.weights == (1.0, 0.5)
        assert hash(f) == hash(Tabulated((1.0, 0.5)))

    def test_negative_m(self):
        with pytest.raises(DiscountError):
            ShiftedHyperbolic(-1)


class TestPresentValue:
    def test_weekday_values(self):
        assert present_value(Hyperbolic(), 30, 2) == pytest.approx(10, abs=1e-12)
        assert present_value(Hyperbolic(), 16, 1) == pytest.approx(8, abs=1e-12)

    @pytest.mark.parametrize("f", families())
    def test_zero_amount(self, f):
        assert present_value(f, 0, 3) == 0

    @given(st.floats(-1e6, 1e6), st.floats(-100, 100), st.integers(0, 4))
    def test_linear_in_amount(self, x, alpha, t):
        for f in families():
            lhs = present_value(f, alpha * x, t)
            rhs = alpha * present_value(f, x, t)
            assert lhs == pytest.approx(rhs, rel=1e-15, abs=1e-300)


class TestInterestRate:
    def test_unit_rate(self):
        assert delta_from_interest_rate(1.0) == Exponential(0.5)

    def test_quarter_rate(self):
        # 1 / 1.25 by hand
        assert delta_from_interest_rate(0.25).delta == pytest.approx(0.8, abs=1e-15)

    @pytest.mark.parametrize("i", [0, -0.1, float("inf")])
    def test_nonpositive(self, i):
        with pytest.raises(DiscountError):
            delta_from_interest_rate(i)

    @given(st.floats(min_value=1e-3, max_value=100))
    def test_always_consistent(self, i):
        assert check_consistency(delta_from_interest_rate(i), 100).consistent


class TestConsistency:
    def test_exponential(self):
        v = check_consistency(Exponential(0.7), 50, 1e-9)
        assert v.consistent and v.witness is None

    def test_hyperbolic_witness(self):
        v = check_consistency(Hyperbolic(), 3)
        assert not v.consistent
        w = v.witness
        assert (w.a, w.b) == (0, 1)
        assert w.ratio_a == pytest.approx(1 / 2, abs=1e-12)
        assert w.ratio_b == pytest.approx(2 / 3, abs=1e-12)

    def test_shifted_hyperbolic(self):
        v = check_consistency(ShiftedHyperbolic(5), 10)
        assert not v.consistent
        assert v.witness.ratio_a == pytest.approx(6 / 7, abs=1e-12)
        assert v.witness.ratio_b == pytest.approx(7 / 8, abs=1e-12)

    @pytest.mark.parametrize("horizon", [2, 3, 10, 100])
    def test_hyperbolic_any_horizon(self, horizon):
        assert not check_consistency(Hyperbolic(), horizon).consistent

    def test_witness_reproduces(self):
        for f in (Hyperbolic(), ShiftedHyperbolic(3), Tabulated([1, 0.9, 0.5, 0.4])):
            v = check_consistency(f, 3)
            w = v.witness
            r = [f.weight(a + 1) / f.weight(a) for a in (w.a, w.b)]
            assert abs(r[1] - r[0]) / r[0] > v.tol

    def test_tabulated_geometric_is_consistent(self):
        assert check_consistency(Tabulated([0.5**t for t in range(11)]), 10).consistent

    def test_scaled_weights_do_not_matter(self):
        f = Tabulated([3 * 0.8**t for t in range(6)])
        assert check_consistency(f, 5).consistent

    def test_errors(self):
        with pytest.raises(DiscountError, match="horizon"):
            check_consistency(Hyperbolic(), 1)
        with pytest.raises(DiscountError, match="shorter than horizon"):
            check_consistency(Tabulated([1, 0.5, 0.25]), 3)

    def test_tolerance_is_respected(self):
        f = Tabulated([1.0, 0.5, 0.25 * (1 + 1e-6)])
        assert not check_consistency(f, 2, tol=1e-9).consistent
        assert check_consistency(f, 2, tol=1e-5).consistent


class TestProperties:
    @given(deltas, delays, delays)
    def test_exponential_multiplicative(self, delta, a, b):
        f = Exponential(delta)
        assert math.isclose(f.weight(a + b), f.weight(a) * f.weight(b), rel_tol=1e-12)

    @given(delays)
    def test_nonincreasing(self, t):
        for f in families():
            if f.max_delay is not None and t + 1 > f.max_delay:
                continue
            assert f.weight(t + 1) <= f.weight(t)

    @given(delays)
    def test_positive(self, t):
        for f in families():
            if f.max_delay is None or t <= f.max_delay:
                assert f.weight(t) > 0

    def test_hyperbolic_not_multiplicative(self):
        f = Hyperbolic()
        assert f.weight(2) == pytest.approx(1 / 3)
        assert f.weight(1) * f.weight(1) == pytest.approx(1 / 4)


class TestShift:
    @pytest.mark.parametrize("m", [0, 1, 4])
    @pytest.mark.parametrize("f", families())
    def test_shift_matches_offset_weights(self, f, m):
        g = shift(f, m)
        for d in range(3):
            if f.max_delay is not None and d + m > f.max_delay:
                continue
            assert g.weight(d) == f.weight(d + m)

    def test_hyperbolic_shift_is_closed_form(self):
        assert shift(Hyperbolic(), 3) == ShiftedHyperbolic(3)
        assert shift(ShiftedHyperbolic(2), 3) == ShiftedHyperbolic(5)
        assert shift(Tabulated([1, 0.5, 0.25]), 1) == Tabulated([0.5, 0.25])

    def test_shift_past_table(self):
        with pytest.raises(DiscountError):
            shift(Tabulated([1, 0.5]), 2)
