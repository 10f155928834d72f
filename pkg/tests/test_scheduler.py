from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import UNIT_ARRAY, unit_slot
from sfcdispatch.domain import CaseLabel, EsdState, InvariantViolation, ValidationError
from sfcdispatch.scenario import IrradianceSpec, ScenarioConfig
from sfcdispatch.scheduler import run_day, soc_update, step
from sfcdispatch.virtual_cost import VcParams, VcState


def _unit_config(esd, initial_soc=1.0):
    return ScenarioConfig(slot_count=3, slot_duration=1.0, array=UNIT_ARRAY, esd=esd,
                          grid_prices=(60.0, 60.0, 60.0), initial_soc=initial_soc)


class TestSocUpdate:
    def test_discharge(self):
        assert soc_update(5, 0, 3.19853, 0.9) == pytest.approx(2.121323, abs=1e-6)

    def test_charge(self):
        assert soc_update(1, 1.346254, 0, 0.9) == pytest.approx(2.211629, abs=1e-6)

    @pytest.mark.parametrize("nu", [0.5, 0.9, 1.0])
    def test_idle(self, nu):
        assert soc_update(4.2, 0, 0, nu) == 4.2

    def test_out_of_bounds(self, esd):
        with pytest.raises(InvariantViolation):
            soc_update(1.0, 0, 1.0, 0.9, esd)
        with pytest.raises(InvariantViolation):
            soc_update(1.0, 1.0, 1.0, 0.9)


class TestStep:
    def test_case3_slot(self, esd, prices60):
        inp = unit_slot(20, 8, 5, prices60)
        rec, soc, vc = step(EsdState(1.0), VcState(250), inp, _unit_config(esd))
        assert rec.case is CaseLabel.CASE3
        assert rec.cost.total == pytest.approx(-160.73, abs=5e-3)
        assert rec.soc_after == pytest.approx(2.834733, abs=1e-6)
        assert soc.soc == rec.soc_after
        assert (vc.prev_purchase, vc.prev_prev_purchase) == (0.0, 0.0)

    def test_idle_slot(self, esd, prices60):
        inp = unit_slot(0, 0, 0, prices60)
        rec, soc, _ = step(EsdState(0.75), VcState(250), inp, _unit_config(esd, initial_soc=0.75))
        assert rec.decision.charge == rec.decision.discharge == rec.decision.buy_grid == 0
        assert rec.cost.total == 250 / 0.75 and soc.soc == 0.75

    def test_coefficient_frozen_before_third_slot(self, esd, prices60):
        cfg = _unit_config(esd)
        vc = VcState(250, prev_purchase=10, prev_prev_purchase=4)
        rec, _, _ = step(EsdState(1.0), vc, unit_slot(0, 5, 0, prices60, index=2), cfg)
        assert rec.a_after == 250
        rec, _, _ = step(EsdState(1.0), vc, unit_slot(0, 5, 0, prices60, index=3), cfg)
        assert rec.a_after == 256

    def test_purchase_recorded(self, esd, prices60):
        _, _, vc = step(EsdState(1.0), VcState(250, 3.0, 1.0), unit_slot(2, 7, 0, prices60),
                        _unit_config(esd))
        assert (vc.prev_purchase, vc.prev_prev_purchase) == (5.0, 3.0)


class TestRunDay:
    def test_default_runs(self):
        trace = run_day(ScenarioConfig())
        assert len(trace) == 28
        assert [r.input.index for r in trace.records] == list(range(1, 29))

    def test_zero_irradiance_is_all_case1(self):
        cfg = ScenarioConfig(irradiance=IrradianceSpec(series=(0.0,) * 28))
        assert {r.case for r in run_day(cfg).records} == {CaseLabel.CASE1}

    def test_deterministic(self):
        a, b = run_day(ScenarioConfig(rng_seed=3)), run_day(ScenarioConfig(rng_seed=3))
        assert a == b

    def test_seed_matters(self):
        assert run_day(ScenarioConfig(rng_seed=3)) != run_day(ScenarioConfig(rng_seed=4))

    def test_invalid_scenario_rejected(self):
        with pytest.raises(ValidationError):
            run_day(ScenarioConfig(initial_soc=0.1))
        with pytest.raises(ValidationError):
            run_day(ScenarioConfig(slot_count=2, grid_prices=(30.0, 30.0)))

    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 10_000), st.integers(30, 200), st.floats(0.5, 3),
           st.floats(0.5, 15), st.floats(50, 500))
    def test_invariants(self, seed, panels, scale, soc0, a):
        base = ScenarioConfig()
        cfg = replace(base, rng_seed=seed, array=replace(base.array, panel_count=panels),
                      demand=replace(base.demand, household_scale=scale),
                      initial_soc=max(soc0, base.esd.floor), vc=VcParams(a_initial=a))
        trace = run_day(cfg)
        for r in trace.records:
            d = r.decision
            assert abs(d.balance_residual(r.generation, r.input.sfc_demand)) <= 1e-9
            assert cfg.esd.floor <= r.soc_after <= cfg.esd.capacity
            assert d.charge * d.discharge == 0 and d.buy_grid * d.sell_grid == 0
            c = r.cost
            parts = c.buy + c.sell_users + c.sell_grid + c.storage_cycle + c.virtual
            assert abs(c.total - parts) <= 1e-9
        assert np.isfinite(trace.total_cost)
