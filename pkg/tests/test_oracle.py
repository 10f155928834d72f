import numpy as np
import pytest

from conftest import unit_slot
from sfcdispatch.domain import CaseLabel, EsdParams
from sfcdispatch.oracle import (
    brute_force_slot,
    full_cost,
    random_instance,
    search_grid,
    verify,
)
from sfcdispatch.policy import CASE_COST


class TestBruteForce:
    def test_case1_example(self, esd, prices60):
        inp = unit_slot(10, 15, 5, prices60)
        res = brute_force_slot(CaseLabel.CASE1, inp, 10.0, 5.0, 250.0, esd, 1e-3)
        assert res.best_decision == pytest.approx(3.19853, abs=1e-3)
        assert res.best_cost == pytest.approx(257.92, abs=5e-3)
        assert res.grid_resolution == 1e-3

    def test_degenerate_interval(self, esd, prices60):
        inp = unit_slot(10, 15, 5, prices60)
        res = brute_force_slot(CaseLabel.CASE1, inp, 10.0, esd.floor, 250.0, esd)
        assert res.best_decision == 0.0 and res.evaluations == 1

    def test_grid_includes_endpoints(self):
        g = search_grid(2.5, 1e-3)
        assert g[0] == 0.0 and g[-1] == 2.5
        assert np.max(np.diff(g)) <= 1e-3 + 1e-15

    def test_rejects_bad_resolution(self, esd, prices60):
        with pytest.raises(ValueError):
            brute_force_slot(CaseLabel.CASE1, unit_slot(10, 15, 5, prices60), 10, 5, 250, esd, 0)

    @pytest.mark.parametrize("case", list(CaseLabel))
    def test_full_cost_agrees_with_reduced_form(self, case):
        rng = np.random.default_rng(11)
        for _ in range(50):
            ins = random_instance(rng, case)
            x = float(rng.uniform(0, 0.5))
            upper = min(ins.esd.rate_limit, ins.soc_prev - ins.esd.floor) if case is CaseLabel.CASE1 \
                else ins.esd.capacity - ins.soc_prev
            x = min(x, max(upper, 0.0))
            if case is not CaseLabel.CASE1:
                x = min(x, ins.generation - ins.inp.sfc_demand
                        - (ins.inp.household_demand if case is CaseLabel.CASE3 else 0.0))
            full = float(full_cost(x, case, ins.inp, ins.generation, ins.a, ins.soc_prev, ins.esd))
            reduced = CASE_COST[case](ins.inp, ins.generation, x, ins.a, ins.soc_prev, ins.esd)
            assert full == pytest.approx(reduced, rel=1e-12, abs=1e-9)

    @pytest.mark.parametrize("case", list(CaseLabel))
    def test_unimodal_along_grid(self, case):
        rng = np.random.default_rng(5)
        for _ in range(50):
            ins = random_instance(rng, case)
            upper = ins.esd.rate_limit
            grid = search_grid(upper, 1e-2)
            grid = grid[grid <= _feasible(ins)]
            costs = full_cost(grid, case, ins.inp, ins.generation, ins.a, ins.soc_prev, ins.esd)
            steps = np.sign(np.diff(costs))
            # once the cost starts rising it never falls again
            rising = np.flatnonzero(steps > 0)
            if rising.size:
                assert np.all(steps[rising[0]:] >= 0)

    def test_reverse_traversal_same_minimum(self, esd, prices60):
        inp = unit_slot(20, 8, 5, prices60)
        grid = search_grid(7.0, 1e-3)
        costs = full_cost(grid, CaseLabel.CASE3, inp, 20.0, 250.0, 1.0, esd)
        rev = full_cost(grid[::-1], CaseLabel.CASE3, inp, 20.0, 250.0, 1.0, esd)
        assert costs.min() == rev.min()
        assert grid[np.argmin(costs)] == grid[::-1][np.argmin(rev)]


def _feasible(ins):
    from sfcdispatch.oracle import feasible_upper
    return feasible_upper(ins.case, ins.inp, ins.generation, ins.soc_prev, ins.esd)


class TestVerify:
    def test_small_run_clean(self):
        rep = verify(instances=100, resolution=1e-3, seed=3)
        assert rep.ok and set(rep.cases) == set(CaseLabel)
        assert all(c.instances == 100 for c in rep.cases.values())

    def test_sampler_respects_case_and_bounds(self):
        rng = np.random.default_rng(0)
        for case in CaseLabel:
            for _ in range(100):
                ins = random_instance(rng, case)
                p = ins.inp.prices
                assert ins.esd.cycle_cost < (p.grid_sell - p.sfc_sell) / 2
                assert isinstance(ins.esd, EsdParams)
