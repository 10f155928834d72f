"""Storage-free comparison schemes and the savings metric."""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from typing import Sequence

from .domain import (
    CaseLabel,
    EsdParams,
    EsdState,
    PriceTriple,
    SlotDecision,
    SlotInput,
    SolarArrayParams,
    ValidationError,
    solar_generation,
)
from .policy import classify_case, discharge_limit, settle_trades
from .scenario import ScenarioConfig
from .scheduler import DayTrace, run_day, step
from .virtual_cost import VcParams, VcState


class BaselineKind(str, Enum):
    FIT = "fit"
    MODIFIED = "modified"
    GRID_TIE = "grid_tie"


def baseline_slot(kind: BaselineKind, inp: SlotInput, generation: float) -> tuple[SlotDecision, float]:
    """Trade one slot without storage or a virtual cost.

    FIT and grid-tie buy any deficit at the retail price and export the whole
    surplus. The modified scheme serves households first at the SFC price.
    """
    kind = BaselineKind(kind)
    p = inp.prices
    net = generation - inp.sfc_demand
    if net <= 0:
        decision = SlotDecision(buy_grid=-net)
        return decision, p.grid_sell * decision.buy_grid
    if kind is BaselineKind.MODIFIED:
        to_users = min(net, inp.household_demand)
        decision = SlotDecision(sell_users=to_users, sell_grid=net - to_users)
    else:
        decision = SlotDecision(sell_grid=net)
    return decision, -p.sfc_sell * decision.sell_users - p.grid_buy * decision.sell_grid


def baseline_day(kind: BaselineKind, inputs: Sequence[SlotInput], array: SolarArrayParams,
                 slot_duration: float) -> list[float]:
    return [
        baseline_slot(kind, inp, solar_generation(inp.irradiance, array, slot_duration))[1]
        for inp in inputs
    ]


def percent_savings(baseline_cost: float, proposed_cost: float) -> float:
    if baseline_cost == 0:
        raise ValidationError("percent savings undefined for a zero baseline cost")
    return (baseline_cost - proposed_cost) / baseline_cost * 100.0


# -- two-slot toy example ----------------------------------------------------------


@dataclass(frozen=True)
class ToyResult:
    fit: float
    modified: float
    proposed: float
    proposed_slots: tuple[float, float]

    @property
    def savings_vs_fit(self) -> float:
        return percent_savings(self.fit, self.proposed)

    @property
    def savings_vs_modified(self) -> float:
        return percent_savings(self.modified, self.proposed)


TOY_ESD = EsdParams(capacity=15.0, floor=0.75, efficiency=0.95, rate_limit=15.0, cycle_cost=1.0)


def toy_example(
    generation: tuple[float, float] = (100.0, 90.0),
    sfc_demand: tuple[float, float] = (80.0, 100.0),
    household_demand: float = 10.0,
    prices: PriceTriple = PriceTriple(grid_sell=60.0, sfc_sell=24.0, grid_buy=8.54),
    esd: EsdParams = TOY_ESD,
    a_initial: float = 250.0,
    initial_soc: float | None = None,
) -> ToyResult:
    """Two-slot comparison of FIT, modified and the proposed scheme.

    Generation is given directly in kWh. The proposed scheme runs the regular
    slot policy in slot 1; slot 2 is the end of the horizon, so it carries no
    virtual cost and discharges as much as the limits and the deficit allow.
    """
    # A unit array over a one-hour slot maps irradiance W/m^2 onto kWh x 1000.
    unit = SolarArrayParams(panel_count=1, panel_area=1.0, efficiency=1.0)
    inputs = [
        SlotInput(index=t + 1, irradiance=g * 1000.0, sfc_demand=r,
                  household_demand=household_demand, prices=prices)
        for t, (g, r) in enumerate(zip(generation, sfc_demand))
    ]
    fit = sum(baseline_day(BaselineKind.FIT, inputs, unit, 1.0))
    modified = sum(baseline_day(BaselineKind.MODIFIED, inputs, unit, 1.0))

    soc0 = esd.floor if initial_soc is None else initial_soc
    config = ScenarioConfig(slot_count=3, slot_duration=1.0, array=unit, esd=esd,
                            vc=VcParams(a_initial=a_initial), initial_soc=soc0)
    first, soc, _ = step(EsdState(soc0), VcState.initial(config.vc), inputs[0], config)

    last = inputs[1]
    gen2 = solar_generation(last.irradiance, unit, 1.0)
    case = classify_case(gen2, last.sfc_demand, last.household_demand)
    discharge = 0.0
    if case is CaseLabel.CASE1:
        discharge = max(0.0, discharge_limit(soc.soc, esd, last.sfc_demand - gen2))
    decision = settle_trades(case, last, gen2, 0.0, discharge)
    second = (
        prices.grid_sell * decision.buy_grid
        - prices.sfc_sell * decision.sell_users
        - prices.grid_buy * decision.sell_grid
        + esd.cycle_cost * decision.discharge
    )
    return ToyResult(fit=fit, modified=modified, proposed=first.cost.total + second,
                     proposed_slots=(first.cost.total, second))


# -- day-level comparison -------------------------------------------------------------


@dataclass(frozen=True)
class Comparison:
    proposed: float
    fit: float
    modified: float
    grid_tie: float
    slot_count: int

    def savings(self, kind: BaselineKind) -> float:
        return percent_savings(getattr(self, BaselineKind(kind).value), self.proposed)

    def average_savings(self, kind: BaselineKind) -> float:
        """Per-slot average cost saving in cents."""
        return (getattr(self, BaselineKind(kind).value) - self.proposed) / self.slot_count


def compare(config: ScenarioConfig, trace: DayTrace) -> Comparison:
    inputs = [r.input for r in trace.records]
    totals = {
        kind: sum(baseline_day(kind, inputs, config.array, config.slot_duration))
        for kind in BaselineKind
    }
    return Comparison(
        proposed=trace.total_cost,
        fit=totals[BaselineKind.FIT],
        modified=totals[BaselineKind.MODIFIED],
        grid_tie=totals[BaselineKind.GRID_TIE],
        slot_count=len(trace),
    )


# -- panel-count sweep ------------------------------------------------------------------


@dataclass(frozen=True)
class SweepPoint:
    scenario: int
    household_scale: float
    panels: int
    a_initial: float
    proposed_total: float
    grid_tie_total: float
    slot_count: int

    @property
    def savings_pct(self) -> float:
        return percent_savings(self.grid_tie_total, self.proposed_total)

    @property
    def average_savings(self) -> float:
        return (self.grid_tie_total - self.proposed_total) / self.slot_count


def panel_sweep(config: ScenarioConfig, panels: Sequence[int], scenarios: Sequence[int] = (1, 2),
                a_values: Sequence[float] | None = None) -> list[SweepPoint]:
    """Proposed vs grid-tie over a grid of panel counts, household scenarios and
    initial VC coefficients.

    Scenario ``k`` multiplies household demand by ``k``. Every point reuses the
    config's seed, so all points see the same underlying random draws.
    """
    a_values = [config.vc.a_initial] if a_values is None else list(a_values)
    points = []
    for scenario in scenarios:
        for a in a_values:
            for n in panels:
                cfg = replace(
                    config,
                    array=replace(config.array, panel_count=int(n)),
                    vc=replace(config.vc, a_initial=float(a)),
                    demand=replace(config.demand, household_scale=float(scenario)),
                )
                trace = run_day(cfg)
                cmp = compare(cfg, trace)
                points.append(SweepPoint(
                    scenario=int(scenario), household_scale=float(scenario), panels=int(n),
                    a_initial=float(a), proposed_total=cmp.proposed,
                    grid_tie_total=cmp.grid_tie, slot_count=cmp.slot_count,
                ))
    return points
