"""Value types for the shared-facility controller and the PV generation model.

Units used throughout the package:
- Energy: kWh per slot
- Irradiance: W/m^2
- Prices: cents/kWh
- Costs: cents (revenue is a negative cost)
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence


class ValidationError(ValueError):
    """Raised when an input or parameter violates its declared bounds."""


class InvariantViolation(RuntimeError):
    """Raised when an internal model invariant does not hold (a bug upstream)."""


class SingularityError(ArithmeticError):
    """Raised when the virtual-cost denominator reaches zero or below."""


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise ValidationError(msg)


def _finite(x: float) -> bool:
    return isinstance(x, (int, float)) and math.isfinite(x)


class CaseLabel(str, Enum):
    CASE1 = "case1"  # generation below SFC demand: buy and/or discharge
    CASE2 = "case2"  # surplus fits within household demand: charge, sell to users
    CASE3 = "case3"  # surplus exceeds household demand: charge, sell to users and grid


@dataclass(frozen=True)
class SolarArrayParams:
    panel_count: int = 65
    panel_area: float = 1.926 * 1.014
    efficiency: float = 0.30

    def __post_init__(self) -> None:
        _require(
            isinstance(self.panel_count, int) and self.panel_count >= 1,
            f"panel_count must be a positive integer, got {self.panel_count!r}",
        )
        _require(_finite(self.panel_area) and self.panel_area > 0, "panel_area must be > 0")
        _require(
            _finite(self.efficiency) and 0 < self.efficiency <= 1,
            "efficiency must lie in (0, 1]",
        )


@dataclass(frozen=True)
class PriceTriple:
    """Per-slot prices in cents/kWh.

    ``grid_sell`` is what the grid charges the SFC, ``sfc_sell`` what the SFC
    charges households, ``grid_buy`` the feed-in price the grid pays the SFC.
    """

    grid_sell: float
    sfc_sell: float
    grid_buy: float

    def __post_init__(self) -> None:
        _require(
            all(_finite(p) for p in (self.grid_sell, self.sfc_sell, self.grid_buy)),
            "prices must be finite numbers",
        )
        _require(
            0 < self.grid_buy < self.sfc_sell < self.grid_sell,
            "prices must satisfy 0 < grid_buy < sfc_sell < grid_sell, got "
            f"grid_buy={self.grid_buy}, sfc_sell={self.sfc_sell}, grid_sell={self.grid_sell}",
        )


@dataclass(frozen=True)
class EsdParams:
    """Energy storage device: capacity and floor in kWh, rate limit in kWh/slot,
    cycle cost in cents/kWh."""

    capacity: float = 15.0
    floor: float = 0.75
    efficiency: float = 0.95
    rate_limit: float = 2.5
    cycle_cost: float = 4.0

    def __post_init__(self) -> None:
        for name in ("capacity", "floor", "efficiency", "rate_limit", "cycle_cost"):
            _require(_finite(getattr(self, name)), f"{name} must be a finite number")
        _require(0 < self.floor < self.capacity, "ESD requires 0 < floor < capacity")
        _require(0 < self.efficiency <= 1, "ESD efficiency must lie in (0, 1]")
        _require(self.rate_limit > 0, "rate_limit must be > 0")
        _require(self.cycle_cost > 0, "cycle_cost must be > 0")


@dataclass(frozen=True)
class EsdState:
    soc: float

    def check(self, esd: EsdParams) -> None:
        _require(
            esd.floor <= self.soc <= esd.capacity,
            f"SoC {self.soc} outside [{esd.floor}, {esd.capacity}]",
        )


@dataclass(frozen=True)
class SlotInput:
    index: int
    irradiance: float
    sfc_demand: float
    household_demand: float
    prices: PriceTriple

    def __post_init__(self) -> None:
        _require(_finite(self.irradiance) and self.irradiance >= 0, "irradiance must be >= 0")
        _require(_finite(self.sfc_demand) and self.sfc_demand >= 0, "sfc_demand must be >= 0")
        _require(
            _finite(self.household_demand) and self.household_demand >= 0,
            "household_demand must be >= 0",
        )


@dataclass(frozen=True)
class SlotDecision:
    """Energy flows (kWh) chosen for one slot."""

    discharge: float = 0.0  # ESD -> SFC
    charge: float = 0.0  # SFC -> ESD
    buy_grid: float = 0.0  # grid -> SFC
    sell_grid: float = 0.0  # SFC -> grid
    sell_users: float = 0.0  # SFC -> households

    def __post_init__(self) -> None:
        flows = (self.discharge, self.charge, self.buy_grid, self.sell_grid, self.sell_users)
        if any(not _finite(f) or f < 0 for f in flows):
            raise InvariantViolation(f"negative or non-finite energy flow in {self}")
        if self.discharge * self.charge != 0:
            raise InvariantViolation("cannot charge and discharge the ESD simultaneously")
        if self.buy_grid * self.sell_grid != 0:
            raise InvariantViolation("cannot buy from and sell to the grid simultaneously")

    def balance_residual(self, generation: float, sfc_demand: float) -> float:
        supply = generation + self.discharge + self.buy_grid
        use = sfc_demand + self.sell_users + self.charge + self.sell_grid
        return supply - use


@dataclass(frozen=True)
class CostBreakdown:
    buy: float
    sell_users: float
    sell_grid: float
    storage_cycle: float
    virtual: float
    case_label: CaseLabel
    total: float = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(
            self,
            "total",
            self.buy + self.sell_users + self.sell_grid + self.storage_cycle + self.virtual,
        )

    @property
    def sell(self) -> float:
        return self.sell_users + self.sell_grid


def solar_generation(irradiance: float, array: SolarArrayParams, slot_duration: float) -> float:
    """Energy (kWh) produced by the array over one slot at constant irradiance."""
    _require(_finite(irradiance) and irradiance >= 0, f"irradiance must be >= 0, got {irradiance}")
    _require(slot_duration > 0, "slot_duration must be > 0")
    watts = array.efficiency * array.panel_area * array.panel_count * irradiance
    return watts * slot_duration / 1000.0


@dataclass(frozen=True)
class CycleCostReport:
    valid: bool
    bound: float
    violating_slot: Optional[int] = None


def cycle_cost_bound(prices: Sequence[PriceTriple]) -> tuple[float, int]:
    """Return ``min_t (grid_sell - sfc_sell) / 2`` and the (0-based) slot attaining it."""
    _require(len(prices) > 0, "price sequence must be non-empty")
    gaps = [(p.grid_sell - p.sfc_sell) / 2.0 for p in prices]
    idx = min(range(len(gaps)), key=gaps.__getitem__)
    return gaps[idx], idx


def validate_cycle_cost(esd: EsdParams, prices: Sequence[PriceTriple]) -> CycleCostReport:
    """Check the cycle cost against the half price-gap bound over all slots.

    The bound is strict; on violation the report names the first offending slot.
    """
    bound, _ = cycle_cost_bound(prices)
    if esd.cycle_cost < bound:
        return CycleCostReport(valid=True, bound=bound)
    first = next(
        t for t, p in enumerate(prices) if esd.cycle_cost >= (p.grid_sell - p.sfc_sell) / 2.0
    )
    return CycleCostReport(valid=False, bound=bound, violating_slot=first)


def default_cycle_cost(prices: Sequence[PriceTriple]) -> float:
    """The conventional choice: one cent below the half price-gap bound."""
    bound, _ = cycle_cost_bound(prices)
    return bound - 1.0
