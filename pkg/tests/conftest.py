import pytest

from sfcdispatch.domain import EsdParams, PriceTriple, SlotInput, SolarArrayParams

# Lines collected by the acceptance module, echoed in the terminal summary.
ACCEPTANCE_LINES: list[str] = []

UNIT_ARRAY = SolarArrayParams(panel_count=1, panel_area=1.0, efficiency=1.0)


def unit_slot(generation, sfc_demand, household_demand, prices, index=1):
    """A slot whose generation is exactly ``generation`` kWh on UNIT_ARRAY over 1 h."""
    return SlotInput(index=index, irradiance=generation * 1000.0, sfc_demand=sfc_demand,
                     household_demand=household_demand, prices=prices)


@pytest.fixture
def esd():
    """Battery used by the worked examples: nu=0.9, cycle cost 10, loose limits."""
    return EsdParams(capacity=15.0, floor=0.75, efficiency=0.9, rate_limit=10.0, cycle_cost=10.0)


@pytest.fixture
def prices60():
    return PriceTriple(grid_sell=60.0, sfc_sell=36.0, grid_buy=18.0)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
