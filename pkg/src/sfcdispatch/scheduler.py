"""Day simulation: runs the per-slot policy over the horizon, threading the
battery SoC and the virtual-cost state from slot to slot."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .domain import (
    CostBreakdown,
    EsdParams,
    EsdState,
    InvariantViolation,
    SlotDecision,
    SlotInput,
    solar_generation,
)
from .policy import CASE_COST, SlotPlan, cost_breakdown, plan_slot, settle_trades
from .scenario import ScenarioConfig
from .virtual_cost import VcState, advance, record_purchase

# Relative slack for float round-off at the SoC bounds.
_SOC_SLACK = 1e-9

# The coefficient update needs two slots of purchase history.
FIRST_UPDATE_SLOT = 3


@dataclass(frozen=True)
class SlotRecord:
    input: SlotInput
    generation: float
    plan: SlotPlan
    decision: SlotDecision
    cost: CostBreakdown
    soc_before: float
    soc_after: float
    a_after: float

    @property
    def case(self):
        return self.cost.case_label


@dataclass(frozen=True)
class DayTrace:
    records: tuple[SlotRecord, ...]

    @property
    def total_cost(self) -> float:
        return sum(r.cost.total for r in self.records)

    @property
    def average_cost(self) -> float:
        return self.total_cost / len(self.records)

    def __len__(self) -> int:
        return len(self.records)


def soc_update(soc_prev: float, charge: float, discharge: float, efficiency: float,
               esd: EsdParams | None = None) -> float:
    if charge * discharge != 0:
        raise InvariantViolation("charge and discharge are both non-zero")
    soc = soc_prev + efficiency * (charge - discharge)
    if esd is not None:
        slack = _SOC_SLACK * esd.capacity
        if not (esd.floor - slack <= soc <= esd.capacity + slack):
            raise InvariantViolation(f"SoC {soc} left [{esd.floor}, {esd.capacity}]")
        soc = min(max(soc, esd.floor), esd.capacity)
    return soc


def step(
    soc: EsdState, vc: VcState, inp: SlotInput, config: ScenarioConfig
) -> tuple[SlotRecord, EsdState, VcState]:
    """Advance one slot. Returns the record and the successor states."""
    esd = config.esd
    if inp.index >= FIRST_UPDATE_SLOT:
        vc = advance(vc, config.vc)
    a = vc.a
    generation = solar_generation(inp.irradiance, config.array, config.slot_duration)

    plan = plan_slot(inp, generation, soc.soc, a, esd)
    decision = settle_trades(plan.case, inp, generation, plan.charge, plan.discharge)
    soc_after = soc_update(soc.soc, decision.charge, decision.discharge, esd.efficiency, esd)
    cost = cost_breakdown(plan.case, decision, inp.prices, a, soc_after, esd)

    # Cross-check the settled breakdown against the reduced per-case formula.
    reduced = CASE_COST[plan.case](inp, generation, plan.clamped, a, soc.soc, esd)
    if abs(reduced - cost.total) > 1e-9 * max(1.0, abs(reduced)):
        raise InvariantViolation(
            f"slot {inp.index}: breakdown {cost.total} != case cost {reduced}"
        )

    record = SlotRecord(
        input=inp,
        generation=generation,
        plan=plan,
        decision=decision,
        cost=cost,
        soc_before=soc.soc,
        soc_after=soc_after,
        a_after=a,
    )
    return record, EsdState(soc_after), record_purchase(vc, decision.buy_grid)


def run_slots(inputs: Sequence[SlotInput], config: ScenarioConfig) -> DayTrace:
    soc = EsdState(config.initial_soc)
    vc = VcState.initial(config.vc)
    records = []
    for inp in inputs:
        record, soc, vc = step(soc, vc, inp, config)
        records.append(record)
    return DayTrace(tuple(records))


def run_day(config: ScenarioConfig) -> DayTrace:
    inputs = config.slot_inputs()  # validates before any slot runs
    return run_slots(inputs, config)
