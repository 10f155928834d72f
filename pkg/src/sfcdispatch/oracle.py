"""Exhaustive grid search over the single battery variable of a slot.

The search evaluates the full cost function, with its ``max(0, .)`` and
``min(., household demand)`` terms intact, rather than the per-case reduced
expressions used by :mod:`sfcdispatch.policy`. Agreement between the two is
evidence that the case reductions and the closed forms are right.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .domain import CaseLabel, EsdParams, PriceTriple, SlotInput, SolarArrayParams, solar_generation
from .policy import CASE_COST, plan_slot


@dataclass(frozen=True)
class OracleResult:
    best_decision: float
    best_cost: float
    grid_resolution: float
    evaluations: int


def full_cost(x, case: CaseLabel, inp: SlotInput, generation: float, a: float, soc_prev: float,
              esd: EsdParams):
    """Slot cost for battery action ``x`` (discharge in case 1, charge otherwise).

    Vectorised over ``x``.
    """
    x = np.asarray(x, dtype=float)
    zero = np.zeros_like(x)
    e_bs, e_sb = (x, zero) if case is CaseLabel.CASE1 else (zero, x)
    p = inp.prices
    req, hh = inp.sfc_demand, inp.household_demand
    j_buy = p.grid_sell * np.maximum(0.0, req - (generation + e_bs))
    j_user = -p.sfc_sell * np.minimum(np.maximum(0.0, generation - (req + e_sb)), hh)
    j_grid = -p.grid_buy * np.maximum(0.0, generation - req - (hh + e_sb))
    j_sd = esd.cycle_cost * np.maximum(e_bs, e_sb)
    j_v = a / (soc_prev + esd.efficiency * (e_sb - e_bs))
    return j_buy + j_user + j_grid + j_sd + j_v


def feasible_upper(case: CaseLabel, inp: SlotInput, generation: float, soc_prev: float,
                   esd: EsdParams) -> float:
    req, hh = inp.sfc_demand, inp.household_demand
    if case is CaseLabel.CASE1:
        bound = min(esd.rate_limit, soc_prev - esd.floor, req - generation)
    elif case is CaseLabel.CASE2:
        bound = min(esd.rate_limit, esd.capacity - soc_prev, generation - req)
    else:
        bound = min(esd.rate_limit, esd.capacity - soc_prev, generation - req - hh)
    return max(0.0, bound)


def search_grid(upper: float, resolution: float) -> np.ndarray:
    """Ascending grid over ``[0, upper]`` with spacing at most ``resolution``,
    both endpoints included."""
    if upper <= 0:
        return np.zeros(1)
    n = max(1, math.ceil(upper / resolution))
    return np.linspace(0.0, upper, n + 1)


def brute_force_slot(
    case: CaseLabel,
    inp: SlotInput,
    generation: float,
    soc_prev: float,
    a: float,
    esd: EsdParams,
    resolution: float = 1e-3,
) -> OracleResult:
    if not resolution > 0:
        raise ValueError("resolution must be > 0")
    grid = search_grid(feasible_upper(case, inp, generation, soc_prev, esd), resolution)
    costs = full_cost(grid, case, inp, generation, a, soc_prev, esd)
    i = int(np.argmin(costs))  # first minimum, i.e. the smallest decision on ties
    return OracleResult(
        best_decision=float(grid[i]),
        best_cost=float(costs[i]),
        grid_resolution=resolution,
        evaluations=int(grid.size),
    )


# -- randomised verification ---------------------------------------------------------


_UNIT_ARRAY = SolarArrayParams(panel_count=1, panel_area=1.0, efficiency=1.0)


@dataclass(frozen=True)
class Instance:
    case: CaseLabel
    inp: SlotInput
    generation: float
    soc_prev: float
    a: float
    esd: EsdParams


def random_instance(rng: np.random.Generator, case: CaseLabel) -> Instance:
    """Draw a slot whose generation falls in ``case``.

    Ranges are in the neighbourhood of a 65-panel array with a 10-20 kWh battery.
    """
    p = rng.uniform(20.0, 80.0)
    prices = PriceTriple(grid_sell=p, sfc_sell=0.6 * p, grid_buy=0.3 * p)
    capacity = rng.uniform(10.0, 20.0)
    esd = EsdParams(
        capacity=capacity,
        floor=rng.uniform(0.03, 0.10) * capacity,
        efficiency=rng.uniform(0.8, 1.0),
        rate_limit=rng.uniform(0.5, 5.0),
        cycle_cost=rng.uniform(0.5, 0.2 * p - 0.5),
    )
    soc = rng.uniform(esd.floor, esd.capacity)
    req = rng.uniform(5.0, 20.0)
    hh = rng.uniform(10.0, 25.0)
    if case is CaseLabel.CASE1:
        gen = rng.uniform(0.0, req)
    elif case is CaseLabel.CASE2:
        gen = req + rng.uniform(0.0, hh)
    else:
        gen = req + hh + rng.uniform(1e-6, 15.0)
    # Generation enters via irradiance on a unit array over a one-hour slot.
    inp = SlotInput(index=1, irradiance=gen * 1000.0, sfc_demand=req, household_demand=hh,
                    prices=prices)
    gen = solar_generation(inp.irradiance, _UNIT_ARRAY, 1.0)
    return Instance(case=case, inp=inp, generation=gen, soc_prev=soc,
                    a=rng.uniform(50.0, 500.0), esd=esd)


@dataclass
class CaseReport:
    case: CaseLabel
    instances: int = 0
    failures: int = 0
    max_gap: float = 0.0
    clamped: int = 0


@dataclass
class VerifyReport:
    resolution: float
    tolerance: float
    cases: dict = field(default_factory=dict)
    seconds: float = 0.0

    @property
    def failures(self) -> int:
        return sum(c.failures for c in self.cases.values())

    @property
    def ok(self) -> bool:
        return self.failures == 0


def verify(instances: int = 1000, resolution: float = 1e-3, seed: int = 0,
           tolerance: float = 1e-3) -> VerifyReport:
    """Compare the clamped closed form against the grid search on random slots."""
    rng = np.random.Generator(np.random.PCG64(seed))
    report = VerifyReport(resolution=resolution, tolerance=tolerance)
    start = time.perf_counter()
    for case in CaseLabel:
        cr = CaseReport(case)
        for _ in range(instances):
            ins = random_instance(rng, case)
            gen = ins.generation
            plan = plan_slot(ins.inp, gen, ins.soc_prev, ins.a, ins.esd)
            if plan.case is not case:
                raise AssertionError(f"sampler produced {plan.case} for {case}")
            closed = CASE_COST[case](ins.inp, gen, plan.clamped, ins.a, ins.soc_prev, ins.esd)
            found = brute_force_slot(case, ins.inp, gen, ins.soc_prev, ins.a, ins.esd, resolution)
            gap = abs(closed - found.best_cost)
            cr.instances += 1
            cr.max_gap = max(cr.max_gap, gap)
            cr.clamped += plan.clamped != plan.raw
            if gap > tolerance or closed > found.best_cost + tolerance:
                cr.failures += 1
        report.cases[case] = cr
    report.seconds = time.perf_counter() - start
    return report
