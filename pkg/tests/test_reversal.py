import pytest
from hypothesis import given, settings, strategies as st

import oracles
from sweep import EXPONENTIALS
from intertemporal import (
    DatedReward,
    Exponential,
    Hyperbolic,
    ReversalWitness,
    ShiftedHyperbolic,
    Tabulated,
    check_consistency,
    find_reversal,
    verify_witness,
)
from intertemporal.reversal import ReversalError, witness_for

H = Hyperbolic()
WEEKDAY = witness_for(H, DatedReward(16, 1), DatedReward(30, 2), 0, 1)


class TestVerify:
    def test_weekday_flip(self):
        assert verify_witness(WEEKDAY, H)
        assert (WEEKDAY.early_small, WEEKDAY.early_large) == pytest.approx((8, 10), abs=1e-12)
        assert (WEEKDAY.late_small, WEEKDAY.late_large) == pytest.approx((16, 15), abs=1e-12)

    def test_exponential_half_does_not_flip(self):
        # 8 vs 7.5 at day 0, 16 vs 15 at day 1: small wins both times
        assert not verify_witness(WEEKDAY, Exponential(0.5))

    def test_degenerate(self):
        w = witness_for(H, DatedReward(5, 2), DatedReward(5, 2), 0, 1)
        assert not verify_witness(w, H)

    def test_bad_vantage_order(self):
        w = ReversalWitness(DatedReward(16, 1), DatedReward(30, 2), 1, 0, 0, 0, 0, 0)
        assert not verify_witness(w, H)

    def test_out_of_table(self):
        assert not verify_witness(WEEKDAY, Tabulated([1.0, 0.5]))


class TestFind:
    def test_hyperbolic_small_grid(self):
        w = find_reversal(H, range(1, 31), 3, 2)
        assert w is not None and verify_witness(w, H)
        expected = oracles.reversals(H, range(1, 31), 3, 2)
        assert (16, 30, 1, 2, 0, 1) in expected
        first = expected[0]
        assert (w.small.amount, w.large.amount, w.small.at, w.large.at, w.early_vantage, w.late_vantage) == first

    def test_exponential_none(self):
        assert find_reversal(Exponential(0.9), range(1, 31), 3, 2) is None
        assert oracles.reversals(Exponential(0.9), range(1, 31), 3, 2) == []

    @pytest.mark.parametrize("f", [H, Exponential(0.9), ShiftedHyperbolic(2)])
    def test_single_future_period(self, f):
        assert find_reversal(f, range(1, 31), 1, 5) is None

    def test_empty_grid(self):
        with pytest.raises(ReversalError):
            find_reversal(H, [], 3, 2)

    def test_negative_bound(self):
        with pytest.raises(ReversalError):
            find_reversal(H, [1, 2], -1, 2)

    def test_grid_order_irrelevant(self):
        assert find_reversal(H, [30, 16, 16], 2, 1) == find_reversal(H, [16, 30], 2, 1)

    def test_witness_on_minimal_grid(self):
        w = find_reversal(H, [16, 30], 2, 1)
        assert (w.small, w.large) == (DatedReward(16, 1), DatedReward(30, 2))


class TestProperties:
    @settings(max_examples=30, deadline=None)
    @given(
        st.lists(st.integers(1, 40), min_size=1, max_size=6),
        st.integers(0, 4),
        st.integers(0, 3),
        st.sampled_from([H, ShiftedHyperbolic(1), Tabulated([1, 0.7, 0.6, 0.55, 0.3]), *EXPONENTIALS]),
    )
    def test_sound_and_complete(self, amounts, db, vb, f):
        w = find_reversal(f, amounts, db, vb)
        expected = oracles.reversals(f, sorted(set(amounts)), db, vb)
        if w is None:
            assert expected == []
        else:
            assert verify_witness(w, f)
            assert expected[0] == (w.small.amount, w.large.amount, w.small.at, w.large.at,
                                   w.early_vantage, w.late_vantage)

    @pytest.mark.parametrize("f", EXPONENTIALS)
    def test_consistent_means_no_reversal(self, f):
        assert check_consistency(f, 5).consistent
        assert find_reversal(f, range(1, 31), 4, 3) is None

    def test_rich_hyperbolic_grid(self):
        for db in (2, 3, 4):
            assert find_reversal(H, [16, 30], db, 3) is not None
