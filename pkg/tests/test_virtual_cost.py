import pytest
from hypothesis import given
from hypothesis import strategies as st

from sfcdispatch.domain import SingularityError, ValidationError
from sfcdispatch.virtual_cost import (
    VcParams,
    VcState,
    advance,
    record_purchase,
    update_coefficient,
    virtual_cost,
)


class TestVirtualCost:
    @pytest.mark.parametrize("a, soc, expected", [(250, 5, 50), (250, 10, 25), (100, 4, 25)])
    def test_examples(self, a, soc, expected):
        assert virtual_cost(a, soc) == expected

    def test_doubling_soc_halves_cost(self):
        assert virtual_cost(250, 10) == virtual_cost(250, 5) / 2

    @pytest.mark.parametrize("soc", [0.0, -1.0])
    def test_singular(self, soc):
        with pytest.raises(SingularityError):
            virtual_cost(250, soc)

    @given(st.floats(0.1, 1000), st.floats(0.5, 20), st.floats(1e-3, 5))
    def test_monotone(self, a, soc, d):
        assert virtual_cost(a, soc + d) < virtual_cost(a, soc)
        assert virtual_cost(a + d, soc) > virtual_cost(a, soc)


class TestUpdateCoefficient:
    @pytest.mark.parametrize("prev, prev_prev, step, expected", [
        (10, 4, 1, 256), (5, 5, 7, 250), (0, 6, 10, 190),
    ])
    def test_examples(self, prev, prev_prev, step, expected):
        state = VcState(a=250, prev_purchase=prev, prev_prev_purchase=prev_prev)
        assert update_coefficient(state, VcParams(step=step)) == expected

    def test_floor(self):
        state = VcState(a=5, prev_purchase=0, prev_prev_purchase=20)
        assert update_coefficient(state, VcParams(step=1, a_floor=1)) == 1

    @given(st.floats(1, 500), st.floats(0, 50), st.floats(0, 50), st.floats(0.01, 10),
           st.floats(0.01, 10))
    def test_monotone_in_step(self, a, prev, prev_prev, mu1, mu2):
        lo, hi = sorted((mu1, mu2))
        state = VcState(a=a, prev_purchase=prev, prev_prev_purchase=prev_prev)
        a_lo = update_coefficient(state, VcParams(step=lo))
        a_hi = update_coefficient(state, VcParams(step=hi))
        if prev > prev_prev:
            assert a_hi >= a_lo
        elif prev < prev_prev:
            assert a_hi <= a_lo
        assert min(a_lo, a_hi) >= 1.0

    def test_advance_keeps_history(self):
        state = advance(VcState(250, 10, 4), VcParams())
        assert (state.a, state.prev_purchase, state.prev_prev_purchase) == (256, 10, 4)

    def test_params_validated(self):
        with pytest.raises(ValidationError):
            VcParams(step=0)


class TestRecordPurchase:
    def test_shift(self):
        s = record_purchase(VcState(250, 10, 4), 7)
        assert (s.a, s.prev_purchase, s.prev_prev_purchase) == (250, 7, 10)

    def test_zero(self):
        s = record_purchase(VcState(250, 10, 4), 0)
        assert (s.prev_purchase, s.prev_prev_purchase) == (0, 10)

    def test_composition(self):
        s = record_purchase(record_purchase(VcState.initial(VcParams()), 3.0), 8.0)
        assert (s.prev_purchase, s.prev_prev_purchase) == (8.0, 3.0)

    def test_negative_rejected(self):
        with pytest.raises(ValidationError):
            record_purchase(VcState(250), -0.1)

    def test_initial_state(self):
        s = VcState.initial(VcParams(a_initial=150))
        assert (s.a, s.prev_purchase, s.prev_prev_purchase) == (150, 0, 0)
