"""Scenario configuration and seeded input generators.

Randomness uses numpy's PCG64 bit generator. SFC demand and household demand
come from separate child streams of the scenario seed, so changing one profile
(e.g. the household scale) leaves the other draws untouched and sweeps are
paired by construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np

from .domain import (
    EsdParams,
    PriceTriple,
    SlotInput,
    SolarArrayParams,
    ValidationError,
    default_cycle_cost,
    validate_cycle_cost,
)
from .virtual_cost import VcParams

RNG_ALGORITHM = "numpy.random.PCG64"

_SFC_STREAM = 0
_HOUSEHOLD_STREAM = 1

# Synthetic time-of-use shape for 6:00-20:00 in 30-minute slots (cents/kWh).
# Not measured market data.
SAMPLE_GRID_PRICES: tuple[float, ...] = (
    38.0, 42.0, 45.0, 45.0, 42.0, 38.0,
    34.0, 30.0, 28.0, 27.0, 26.0, 25.0, 25.0, 25.0,
    26.0, 27.0, 28.0, 30.0, 33.0, 36.0, 40.0,
    46.0, 52.0, 58.0, 60.0, 58.0, 52.0, 46.0,
)


def _rng(seed: int, stream: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, stream])))


def _check_range(name: str, lo: float, hi: float) -> None:
    if not (0 <= lo <= hi):
        raise ValidationError(f"{name} must satisfy 0 <= low <= high, got ({lo}, {hi})")


@dataclass(frozen=True)
class DemandProfileSpec:
    peak_windows: tuple[tuple[float, float], ...] = ((6.0, 9.0), (16.5, 20.0))
    peak_trips: tuple[int, int] = (100, 200)
    offpeak_trips: tuple[int, int] = (70, 100)
    energy_per_trip: float = 0.1
    household_range: tuple[float, float] = (10.0, 25.0)
    household_scale: float = 1.0

    def __post_init__(self) -> None:
        _check_range("peak_trips", *self.peak_trips)
        _check_range("offpeak_trips", *self.offpeak_trips)
        _check_range("household_range", *self.household_range)
        for lo, hi in self.peak_windows:
            if not lo < hi:
                raise ValidationError(f"empty peak window ({lo}, {hi})")
        if not self.energy_per_trip >= 0:
            raise ValidationError("energy_per_trip must be >= 0")
        if not self.household_scale > 0:
            raise ValidationError("household_scale must be > 0")

    def is_peak(self, hour: float) -> bool:
        return any(lo <= hour < hi for lo, hi in self.peak_windows)


@dataclass(frozen=True)
class IrradianceSpec:
    """Either an explicit per-slot series, or a cosine bell.

    The bell is ``peak * cos(pi/2 * (u - peak_position) / half_width)`` at slot
    centres ``u = k + 0.5`` (in slot units from the start of the window) and
    zero outside ``half_width``. Defaults centre it on the window and reach
    zero exactly at the window edges.
    """

    series: Optional[tuple[float, ...]] = None
    peak: float = 900.0
    peak_position: Optional[float] = None
    half_width: Optional[float] = None

    def __post_init__(self) -> None:
        if self.series is not None and any(not (v >= 0) for v in self.series):
            raise ValidationError("irradiance series must be non-negative")
        if not self.peak >= 0:
            raise ValidationError("irradiance peak must be >= 0")
        if self.half_width is not None and not self.half_width > 0:
            raise ValidationError("half_width must be > 0")


def gen_sfc_demand(
    spec: DemandProfileSpec,
    seed: int,
    slot_count: int = 28,
    slot_duration: float = 0.5,
    day_start_hour: float = 6.0,
) -> np.ndarray:
    """Lift-trip demand: uniform integer trip counts per slot times kWh per trip.

    Peak membership is decided by the slot's start time.
    """
    rng = _rng(seed, _SFC_STREAM)
    out = np.empty(slot_count)
    for k in range(slot_count):
        lo, hi = spec.peak_trips if spec.is_peak(day_start_hour + k * slot_duration) else spec.offpeak_trips
        out[k] = rng.integers(lo, hi, endpoint=True) * spec.energy_per_trip
    return out


def gen_household_demand(spec: DemandProfileSpec, seed: int, slot_count: int = 28) -> np.ndarray:
    rng = _rng(seed, _HOUSEHOLD_STREAM)
    lo, hi = spec.household_range
    return rng.uniform(lo, hi, size=slot_count) * spec.household_scale


def synthetic_irradiance(spec: IrradianceSpec, slot_count: int) -> np.ndarray:
    if spec.series is not None:
        if len(spec.series) != slot_count:
            raise ValidationError(
                f"irradiance series has {len(spec.series)} values, expected {slot_count}"
            )
        return np.asarray(spec.series, dtype=float)
    centre = slot_count / 2.0 if spec.peak_position is None else spec.peak_position
    half = slot_count / 2.0 if spec.half_width is None else spec.half_width
    u = np.arange(slot_count) + 0.5
    x = (u - centre) / half
    bell = spec.peak * np.cos(0.5 * np.pi * np.clip(x, -1.0, 1.0))
    return np.where(np.abs(x) < 1.0, np.maximum(bell, 0.0), 0.0)


def derive_prices(
    grid_sell: Sequence[float], sell_factor: float = 0.6, buy_factor: float = 0.3
) -> list[PriceTriple]:
    """Household and feed-in prices as fixed fractions of the grid retail price."""
    if not (0 < buy_factor < sell_factor < 1):
        raise ValidationError(
            f"need 0 < buy_factor < sell_factor < 1, got buy={buy_factor}, sell={sell_factor}"
        )
    out = []
    for p in grid_sell:
        if not p > 0:
            raise ValidationError(f"grid price must be > 0, got {p}")
        out.append(PriceTriple(grid_sell=p, sfc_sell=sell_factor * p, grid_buy=buy_factor * p))
    return out


@dataclass(frozen=True)
class ScenarioConfig:
    slot_count: int = 28
    slot_duration: float = 0.5
    day_start_hour: float = 6.0
    array: SolarArrayParams = field(default_factory=SolarArrayParams)
    esd: EsdParams = field(default_factory=EsdParams)
    vc: VcParams = field(default_factory=VcParams)
    initial_soc: float = 5.0
    grid_prices: tuple[float, ...] = SAMPLE_GRID_PRICES
    sell_factor: float = 0.6
    buy_factor: float = 0.3
    demand: DemandProfileSpec = field(default_factory=DemandProfileSpec)
    irradiance: IrradianceSpec = field(default_factory=IrradianceSpec)
    # Explicit series override the generators; household_scale still applies.
    sfc_demand: Optional[tuple[float, ...]] = None
    household_demand: Optional[tuple[float, ...]] = None
    rng_seed: int = 7

    def validate(self) -> None:
        if not (isinstance(self.slot_count, int) and self.slot_count >= 3):
            raise ValidationError(f"slot_count must be an integer >= 3, got {self.slot_count}")
        if not self.slot_duration > 0:
            raise ValidationError("slot_duration must be > 0")
        if not (self.esd.floor <= self.initial_soc <= self.esd.capacity):
            raise ValidationError(
                f"initial_soc {self.initial_soc} outside [{self.esd.floor}, {self.esd.capacity}]"
            )
        for name in ("grid_prices", "sfc_demand", "household_demand"):
            series = getattr(self, name)
            if series is not None and len(series) != self.slot_count:
                raise ValidationError(
                    f"{name} has {len(series)} values, expected {self.slot_count}"
                )
            if series is not None and any(not (math.isfinite(v) and v >= 0) for v in series):
                raise ValidationError(f"{name} must contain finite non-negative values")
        report = validate_cycle_cost(self.esd, self.prices())
        if not report.valid:
            raise ValidationError(
                f"cycle cost {self.esd.cycle_cost} must be below {report.bound:.6g} "
                f"(violated at slot {report.violating_slot + 1})"
            )

    def prices(self) -> list[PriceTriple]:
        return derive_prices(self.grid_prices, self.sell_factor, self.buy_factor)

    def slot_inputs(self) -> list[SlotInput]:
        self.validate()
        n = self.slot_count
        if self.sfc_demand is not None:
            sfc = np.asarray(self.sfc_demand, dtype=float)
        else:
            sfc = gen_sfc_demand(
                self.demand, self.rng_seed, n, self.slot_duration, self.day_start_hour
            )
        if self.household_demand is not None:
            hh = np.asarray(self.household_demand, dtype=float) * self.demand.household_scale
        else:
            hh = gen_household_demand(self.demand, self.rng_seed, n)
        irr = synthetic_irradiance(self.irradiance, n)
        return [
            SlotInput(
                index=k + 1,
                irradiance=float(irr[k]),
                sfc_demand=float(sfc[k]),
                household_demand=float(hh[k]),
                prices=p,
            )
            for k, p in enumerate(self.prices())
        ]

    def with_auto_cycle_cost(self) -> "ScenarioConfig":
        """Copy with the cycle cost set one cent below the half price-gap bound."""
        return replace(self, esd=replace(self.esd, cycle_cost=default_cycle_cost(self.prices())))
