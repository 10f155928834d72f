"""Per-slot decision rule.

Each slot falls into one of three cases depending on how PV generation compares
with the SFC's own demand and the household demand. In every case the cost is a
convex function of a single battery variable, so the minimiser has a closed
form that is then clamped to the feasible interval.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .domain import (
    CaseLabel,
    CostBreakdown,
    EsdParams,
    InvariantViolation,
    PriceTriple,
    SingularityError,
    SlotDecision,
    SlotInput,
    ValidationError,
)


def classify_case(generation: float, sfc_demand: float, household_demand: float) -> CaseLabel:
    # generation == sfc_demand goes to case 2; both cases give zero trade there.
    if sfc_demand > generation:
        return CaseLabel.CASE1
    if generation <= sfc_demand + household_demand:
        return CaseLabel.CASE2
    return CaseLabel.CASE3


def _clamp(value: float, upper: float) -> float:
    upper = max(upper, 0.0)
    if value <= 0.0:
        return 0.0
    return min(value, upper)


# -- case 1: deficit, discharge the ESD and/or buy from the grid -------------


def unclamped_discharge_case1(
    soc_prev: float, a: float, grid_sell_price: float, esd: EsdParams
) -> float:
    margin = grid_sell_price - esd.cycle_cost
    if margin <= 0:
        raise ValidationError(
            f"grid sell price {grid_sell_price} must exceed the cycle cost {esd.cycle_cost}"
        )
    nu = esd.efficiency
    return (soc_prev - math.sqrt(nu * a / margin)) / nu


def discharge_limit(soc_prev: float, esd: EsdParams, deficit: float = math.inf) -> float:
    return min(esd.rate_limit, soc_prev - esd.floor, deficit)


def optimal_discharge_case1(
    soc_prev: float,
    a: float,
    grid_sell_price: float,
    esd: EsdParams,
    deficit: float = math.inf,
) -> float:
    """Cost-minimising discharge for a deficit slot.

    Clamped to ``[0, min(rate_limit, soc_prev - floor, deficit)]``. Discharging
    past the deficit would only be wasted, since case 1 sells nothing.
    """
    raw = unclamped_discharge_case1(soc_prev, a, grid_sell_price, esd)
    return _clamp(raw, discharge_limit(soc_prev, esd, deficit))


# -- cases 2 and 3: surplus, charge the ESD -----------------------------------


def _unclamped_charge(soc_prev: float, a: float, opportunity_price: float, esd: EsdParams) -> float:
    nu = esd.efficiency
    return (math.sqrt(nu * a / (esd.cycle_cost + opportunity_price)) - soc_prev) / nu


def unclamped_charge_case2(soc_prev: float, a: float, sfc_sell_price: float, esd: EsdParams) -> float:
    return _unclamped_charge(soc_prev, a, sfc_sell_price, esd)


def unclamped_charge_case3(soc_prev: float, a: float, grid_buy_price: float, esd: EsdParams) -> float:
    return _unclamped_charge(soc_prev, a, grid_buy_price, esd)


def charge_limit(soc_prev: float, esd: EsdParams, surplus: float = math.inf) -> float:
    return min(esd.rate_limit, esd.capacity - soc_prev, surplus)


def optimal_charge_case2(
    soc_prev: float, a: float, sfc_sell_price: float, surplus: float, esd: EsdParams
) -> float:
    """Charge for a moderate-surplus slot; every kWh stored is a kWh not sold
    to households."""
    raw = unclamped_charge_case2(soc_prev, a, sfc_sell_price, esd)
    return _clamp(raw, charge_limit(soc_prev, esd, surplus))


def optimal_charge_case3(
    soc_prev: float, a: float, grid_buy_price: float, surplus_after_users: float, esd: EsdParams
) -> float:
    """Charge for a large-surplus slot, drawn only from what would otherwise be
    exported after households are fully served."""
    raw = unclamped_charge_case3(soc_prev, a, grid_buy_price, esd)
    return _clamp(raw, charge_limit(soc_prev, esd, surplus_after_users))


# -- per-case cost ------------------------------------------------------------


def _vc_term(a: float, soc_end: float) -> float:
    if soc_end <= 0:
        raise SingularityError(f"end-of-slot SoC {soc_end} leaves the virtual cost undefined")
    return a / soc_end


def cost_case1(
    inputs: SlotInput, generation: float, discharge: float, a: float, soc_prev: float, esd: EsdParams
) -> float:
    p = inputs.prices
    bought = max(0.0, inputs.sfc_demand - generation - discharge)
    return (
        p.grid_sell * bought
        + esd.cycle_cost * discharge
        + _vc_term(a, soc_prev - esd.efficiency * discharge)
    )


def cost_case2(
    inputs: SlotInput, generation: float, charge: float, a: float, soc_prev: float, esd: EsdParams
) -> float:
    p = inputs.prices
    return (
        -p.sfc_sell * (generation - inputs.sfc_demand - charge)
        + esd.cycle_cost * charge
        + _vc_term(a, soc_prev + esd.efficiency * charge)
    )


def cost_case3(
    inputs: SlotInput, generation: float, charge: float, a: float, soc_prev: float, esd: EsdParams
) -> float:
    p = inputs.prices
    exported = generation - inputs.sfc_demand - inputs.household_demand - charge
    return (
        -p.sfc_sell * inputs.household_demand
        - p.grid_buy * exported
        + esd.cycle_cost * charge
        + _vc_term(a, soc_prev + esd.efficiency * charge)
    )


CASE_COST = {
    CaseLabel.CASE1: cost_case1,
    CaseLabel.CASE2: cost_case2,
    CaseLabel.CASE3: cost_case3,
}


# -- settlement -----------------------------------------------------------------


def settle_trades(
    case: CaseLabel, inputs: SlotInput, generation: float, charge: float, discharge: float
) -> SlotDecision:
    """Derive grid and household trades from the battery decision via the
    per-slot energy balance."""
    if charge * discharge != 0:
        raise InvariantViolation("charge and discharge are both non-zero")
    req, hh = inputs.sfc_demand, inputs.household_demand
    if case is CaseLabel.CASE1:
        if charge:
            raise InvariantViolation("case 1 never charges the ESD")
        flows = dict(discharge=discharge, buy_grid=req - generation - discharge)
    elif case is CaseLabel.CASE2:
        if discharge:
            raise InvariantViolation("case 2 never discharges the ESD")
        flows = dict(charge=charge, sell_users=generation - req - charge)
    else:
        if discharge:
            raise InvariantViolation("case 3 never discharges the ESD")
        flows = dict(charge=charge, sell_users=hh, sell_grid=generation - req - hh - charge)
    # SlotDecision rejects any negative flow.
    return SlotDecision(**flows)


def cost_breakdown(
    case: CaseLabel,
    decision: SlotDecision,
    prices: PriceTriple,
    a: float,
    soc_end: float,
    esd: EsdParams,
) -> CostBreakdown:
    return CostBreakdown(
        buy=prices.grid_sell * decision.buy_grid,
        sell_users=-prices.sfc_sell * decision.sell_users,
        sell_grid=-prices.grid_buy * decision.sell_grid,
        storage_cycle=esd.cycle_cost * max(decision.discharge, decision.charge),
        virtual=_vc_term(a, soc_end),
        case_label=case,
    )


@dataclass(frozen=True)
class SlotPlan:
    case: CaseLabel
    raw: float  # unclamped closed-form value (discharge in case 1, charge otherwise)
    clamped: float
    upper: float  # upper end of the feasible interval

    @property
    def charge(self) -> float:
        return 0.0 if self.case is CaseLabel.CASE1 else self.clamped

    @property
    def discharge(self) -> float:
        return self.clamped if self.case is CaseLabel.CASE1 else 0.0


def plan_slot(
    inputs: SlotInput, generation: float, soc_prev: float, a: float, esd: EsdParams
) -> SlotPlan:
    """Classify the slot and compute the clamped closed-form battery action."""
    req, hh, prices = inputs.sfc_demand, inputs.household_demand, inputs.prices
    case = classify_case(generation, req, hh)
    if case is CaseLabel.CASE1:
        deficit = req - generation
        raw = unclamped_discharge_case1(soc_prev, a, prices.grid_sell, esd)
        upper = discharge_limit(soc_prev, esd, deficit)
    elif case is CaseLabel.CASE2:
        raw = unclamped_charge_case2(soc_prev, a, prices.sfc_sell, esd)
        upper = charge_limit(soc_prev, esd, generation - req)
    else:
        raw = unclamped_charge_case3(soc_prev, a, prices.grid_buy, esd)
        upper = charge_limit(soc_prev, esd, generation - req - hh)
    return SlotPlan(case=case, raw=raw, clamped=_clamp(raw, upper), upper=max(upper, 0.0))
