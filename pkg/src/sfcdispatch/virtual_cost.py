"""Virtual cost: an estimate of next-slot cost that penalises a low end-of-slot SoC.

The coefficient ``a`` adapts to the trend in grid purchases over the two most
recent slots.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .domain import SingularityError, ValidationError


@dataclass(frozen=True)
class VcParams:
    a_initial: float = 250.0
    step: float = 1.0
    a_floor: float = 1.0

    def __post_init__(self) -> None:
        for name in ("a_initial", "step", "a_floor"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValidationError(f"{name} must be a positive finite number, got {value}")


@dataclass(frozen=True)
class VcState:
    a: float
    prev_purchase: float = 0.0
    prev_prev_purchase: float = 0.0

    @classmethod
    def initial(cls, params: VcParams) -> "VcState":
        # No purchase history before the first slot.
        return cls(a=params.a_initial)


def virtual_cost(a: float, soc_end: float) -> float:
    if soc_end <= 0:
        raise SingularityError(f"virtual cost undefined at SoC {soc_end}")
    if a <= 0:
        raise ValidationError(f"virtual-cost coefficient must be > 0, got {a}")
    return a / soc_end


def update_coefficient(state: VcState, params: VcParams) -> float:
    """Next value of ``a`` from the last two purchases, floored at ``a_floor``."""
    delta = state.prev_purchase - state.prev_prev_purchase
    return max(params.a_floor, state.a + params.step * delta)


def advance(state: VcState, params: VcParams) -> VcState:
    return replace(state, a=update_coefficient(state, params))


def record_purchase(state: VcState, purchase: float) -> VcState:
    if not (math.isfinite(purchase) and purchase >= 0):
        raise ValidationError(f"grid purchase must be >= 0, got {purchase}")
    return replace(state, prev_prev_purchase=state.prev_purchase, prev_purchase=purchase)
