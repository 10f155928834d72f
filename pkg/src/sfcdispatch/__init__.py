"""Solar, battery and trading dispatch for a shared facility controller."""

from .baselines import BaselineKind, baseline_slot, compare, panel_sweep, percent_savings, toy_example
from .domain import (
    CaseLabel,
    CostBreakdown,
    EsdParams,
    EsdState,
    InvariantViolation,
    PriceTriple,
    SingularityError,
    SlotDecision,
    SlotInput,
    SolarArrayParams,
    ValidationError,
    solar_generation,
    validate_cycle_cost,
)
from .oracle import OracleResult, brute_force_slot
from .policy import (
    classify_case,
    cost_case1,
    cost_case2,
    cost_case3,
    optimal_charge_case2,
    optimal_charge_case3,
    optimal_discharge_case1,
    settle_trades,
)
from .scenario import DemandProfileSpec, IrradianceSpec, ScenarioConfig, derive_prices
from .scheduler import DayTrace, SlotRecord, run_day, soc_update, step
from .virtual_cost import VcParams, VcState, record_purchase, update_coefficient, virtual_cost

__version__ = "0.1.0"
