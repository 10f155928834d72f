from dataclasses import replace

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import unit_slot
from sfcdispatch.baselines import (
    BaselineKind,
    baseline_slot,
    compare,
    panel_sweep,
    percent_savings,
    toy_example,
)
from sfcdispatch.domain import PriceTriple, ValidationError
from sfcdispatch.scenario import ScenarioConfig
from sfcdispatch.scheduler import run_day

TOY_PRICES = PriceTriple(grid_sell=60.0, sfc_sell=24.0, grid_buy=8.54)


class TestBaselineSlot:
    def test_fit_surplus(self):
        _, cost = baseline_slot(BaselineKind.FIT, unit_slot(100, 80, 10, TOY_PRICES), 100)
        assert cost == pytest.approx(-170.8, abs=1e-9)

    def test_fit_deficit(self):
        d, cost = baseline_slot(BaselineKind.FIT, unit_slot(90, 100, 10, TOY_PRICES), 90)
        assert cost == 600 and d.buy_grid == 10

    def test_modified_households_absorb_all(self):
        d, cost = baseline_slot(BaselineKind.MODIFIED, unit_slot(100, 80, 25, TOY_PRICES), 100)
        assert cost == -480 and d.sell_grid == 0

    def test_grid_tie_equals_fit(self):
        inp = unit_slot(100, 80, 10, TOY_PRICES)
        assert baseline_slot("grid_tie", inp, 100) == baseline_slot("fit", inp, 100)

    @given(st.floats(0, 100), st.floats(0, 100), st.floats(0, 50))
    def test_modified_never_worse(self, gen, req, hh):
        inp = unit_slot(gen, req, hh, TOY_PRICES)
        _, fit = baseline_slot(BaselineKind.FIT, inp, gen)
        _, mod = baseline_slot(BaselineKind.MODIFIED, inp, gen)
        assert mod <= fit + 1e-9


class TestPercentSavings:
    @pytest.mark.parametrize("base, prop, expected", [(100, 60, 40), (100, 100, 0)])
    def test_examples(self, base, prop, expected):
        assert percent_savings(base, prop) == expected

    def test_toy_headline(self):
        assert round(percent_savings(429.2, 100.0), 1) == 76.7

    def test_zero_baseline(self):
        with pytest.raises(ValidationError):
            percent_savings(0.0, 10.0)


class TestToy:
    def test_totals(self):
        toy = toy_example()
        assert toy.fit == pytest.approx(429.2, abs=1e-9)
        assert toy.modified == pytest.approx(274.6, abs=1e-9)
        assert toy.proposed <= toy.modified <= toy.fit

    def test_slot_split(self):
        toy = toy_example()
        assert sum(toy.proposed_slots) == pytest.approx(toy.proposed)


class TestDayComparison:
    def test_compare_consistent(self):
        cfg = ScenarioConfig()
        cmp = compare(cfg, run_day(cfg))
        assert cmp.fit == cmp.grid_tie
        assert cmp.modified <= cmp.fit
        assert cmp.slot_count == 28
        assert cmp.average_savings("fit") == pytest.approx((cmp.fit - cmp.proposed) / 28)

    def test_sweep_grid(self):
        pts = panel_sweep(ScenarioConfig(), [65, 90], scenarios=(1, 2), a_values=[150, 250])
        assert len(pts) == 8
        assert {(p.scenario, p.a_initial, p.panels) for p in pts} == {
            (s, a, n) for s in (1, 2) for a in (150.0, 250.0) for n in (65, 90)
        }

    def test_sweep_uses_common_demand(self):
        cfg = ScenarioConfig()
        one = replace(cfg, demand=replace(cfg.demand, household_scale=1.0)).slot_inputs()
        two = replace(cfg, demand=replace(cfg.demand, household_scale=2.0)).slot_inputs()
        assert [i.sfc_demand for i in one] == [i.sfc_demand for i in two]
        assert [2 * i.household_demand for i in one] == [i.household_demand for i in two]
