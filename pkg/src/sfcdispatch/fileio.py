"""CSV series, trace and summary files, and the scenario config format.

Config files are INI-style with a single ``[scenario]`` section of
``key = value`` lines; see ``configs/default.ini`` for every recognised key.
File paths inside a config are resolved relative to the config file.
"""

from __future__ import annotations

import configparser
import contextlib
import csv
import json
import sys
from dataclasses import asdict, replace
from pathlib import Path
from typing import TYPE_CHECKING, Iterable, Optional, Sequence

import numpy as np

from .domain import EsdParams, SolarArrayParams, ValidationError
from .scenario import (
    RNG_ALGORITHM,
    DemandProfileSpec,
    IrradianceSpec,
    ScenarioConfig,
)
from .scheduler import DayTrace
from .virtual_cost import VcParams

if TYPE_CHECKING:
    from .baselines import Comparison

TRACE_COLUMNS = (
    "slot", "case", "generation_kwh", "sfc_demand_kwh", "household_demand_kwh",
    "e_bs", "e_sb", "e_gs", "e_sg", "e_su", "soc_after", "a_after",
    "j_buy", "j_user", "j_grid", "j_sd", "j_v", "j_total",
)


class DataFileError(ValidationError):
    pass


# -- series ------------------------------------------------------------------------------


def load_series_csv(path, expected_length: Optional[int] = None,
                    allow_negative: bool = False) -> np.ndarray:
    """Read a ``slot,value`` CSV. Slots must be exactly 1..N, in any order."""
    path = Path(path)
    try:
        fh = path.open(newline="")
    except OSError as exc:
        raise DataFileError(f"cannot read {path}: {exc}") from exc
    values: dict[int, float] = {}
    with fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["slot", "value"]:
            raise DataFileError(f"{path}: expected header 'slot,value', got {header}")
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != 2:
                raise DataFileError(f"{path}:{lineno}: expected 2 fields, got {len(row)}")
            try:
                slot, value = int(row[0]), float(row[1])
            except ValueError as exc:
                raise DataFileError(f"{path}:{lineno}: malformed row {row}") from exc
            if not np.isfinite(value):
                raise DataFileError(f"{path}:{lineno}: non-finite value")
            if value < 0 and not allow_negative:
                raise DataFileError(f"{path}:{lineno}: negative value {value}")
            if slot in values:
                raise DataFileError(f"{path}:{lineno}: duplicate slot {slot}")
            values[slot] = value
    n = len(values)
    if sorted(values) != list(range(1, n + 1)):
        missing = sorted(set(range(1, max(values, default=0) + 1)) - set(values))
        raise DataFileError(f"{path}: slots must run 1..N without gaps (missing {missing[:5]})")
    if expected_length is not None and n != expected_length:
        raise DataFileError(f"{path}: {n} rows but the scenario has {expected_length} slots")
    return np.array([values[k] for k in range(1, n + 1)])


def write_series_csv(values: Iterable[float], path) -> None:
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["slot", "value"])
        for k, v in enumerate(values, start=1):
            w.writerow([k, repr(float(v))])


# -- traces and reports -------------------------------------------------------------------


def trace_rows(trace: DayTrace) -> list[list]:
    rows = []
    for r in trace.records:
        d, c = r.decision, r.cost
        rows.append([
            r.input.index, c.case_label.value, r.generation, r.input.sfc_demand,
            r.input.household_demand, d.discharge, d.charge, d.buy_grid, d.sell_grid,
            d.sell_users, r.soc_after, r.a_after, c.buy, c.sell_users, c.sell_grid,
            c.storage_cycle, c.virtual, c.total,
        ])
    return rows


def _fmt(v) -> str:
    # repr() of a float is the shortest string that round-trips exactly;
    # adding 0.0 turns -0.0 into 0.0.
    return repr(float(v) + 0.0) if isinstance(v, (float, np.floating)) else str(v)


def write_trace_csv(trace: DayTrace, path) -> None:
    with _open_out(path) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(TRACE_COLUMNS)
        for row in trace_rows(trace):
            w.writerow([_fmt(v) for v in row])


def load_trace_csv(path) -> dict[str, list]:
    """Read a trace CSV back into columns (numbers as float, case as str)."""
    with Path(path).open(newline="") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != TRACE_COLUMNS:
            raise DataFileError(f"{path}: unexpected trace columns {reader.fieldnames}")
        cols: dict[str, list] = {c: [] for c in TRACE_COLUMNS}
        for row in reader:
            for c in TRACE_COLUMNS:
                v = row[c]
                cols[c].append(v if c == "case" else (int(v) if c == "slot" else float(v)))
    return cols


def _money(v: float) -> str:
    return f"{v:.2f}"


SUMMARY_COLUMNS = ("label", "scheme", "total_cents", "average_cents_per_slot",
                   "proposed_savings_pct", "proposed_average_savings_cents")


def write_summary(comparisons: Sequence[tuple[str, Comparison]], path) -> None:
    """One block of rows per labelled comparison: the proposed scheme, then
    each baseline with the proposed scheme's savings against it."""
    from .baselines import BaselineKind

    with _open_out(path) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SUMMARY_COLUMNS)
        for label, cmp in comparisons:
            n = cmp.slot_count
            w.writerow([label, "proposed", _money(cmp.proposed), _money(cmp.proposed / n), "", ""])
            for kind in BaselineKind:
                total = getattr(cmp, kind.value)
                pct = _money(cmp.savings(kind)) if total != 0 else "nan"
                w.writerow([label, kind.value, _money(total), _money(total / n), pct,
                            _money(cmp.average_savings(kind))])


SWEEP_COLUMNS = ("scenario", "household_scale", "panels", "a_initial", "proposed_total_cents",
                 "grid_tie_total_cents", "average_savings_cents", "savings_pct")


def write_sweep(points: Sequence, path) -> None:
    with _open_out(path) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SWEEP_COLUMNS)
        for p in points:
            w.writerow([p.scenario, _fmt(p.household_scale), p.panels, _fmt(p.a_initial),
                        _money(p.proposed_total), _money(p.grid_tie_total),
                        _money(p.average_savings), _money(p.savings_pct)])


def write_metadata(path, command: str, config: Optional[ScenarioConfig] = None, **extra) -> None:
    """Sidecar JSON recording the generator, seed and configuration behind an output."""
    meta = {"command": command, "rng_algorithm": RNG_ALGORITHM, **extra}
    if config is not None:
        meta["seed"] = config.rng_seed
        meta["config"] = asdict(config)
    Path(path).write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")


@contextlib.contextmanager
def _open_out(path):
    """Write to ``path``, or to stdout for ``-``."""
    if str(path) == "-":
        yield sys.stdout
        return
    with Path(path).open("w", newline="") as fh:
        yield fh


# -- config ------------------------------------------------------------------------------

_KEYS = {
    "slot_count", "slot_duration", "day_start_hour", "seed",
    "panel_count", "panel_area", "panel_efficiency",
    "esd_capacity", "esd_floor", "esd_efficiency", "esd_rate_limit", "cycle_cost",
    "a_initial", "vc_step", "a_floor", "initial_soc",
    "grid_price_file", "sell_factor", "buy_factor",
    "irradiance_file", "irradiance_peak", "irradiance_peak_position", "irradiance_half_width",
    "sfc_demand_file", "household_demand_file",
    "peak_windows", "peak_trips", "offpeak_trips", "energy_per_trip",
    "household_min", "household_max", "household_scale",
}


def _hour(text: str) -> float:
    text = text.strip()
    if ":" in text:
        h, m = text.split(":", 1)
        return int(h) + int(m) / 60.0
    return float(text)


def _parse_windows(text: str) -> tuple[tuple[float, float], ...]:
    out = []
    for part in text.split(","):
        if not part.strip():
            continue
        lo, hi = part.split("-")
        out.append((_hour(lo), _hour(hi)))
    return tuple(out)


def _int_pair(text: str) -> tuple[int, int]:
    lo, hi = (int(x) for x in text.split(","))
    return lo, hi


def load_config(path) -> ScenarioConfig:
    path = Path(path)
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        with path.open() as fh:
            parser.read_file(fh)
    except (OSError, configparser.Error) as exc:
        raise DataFileError(f"cannot read config {path}: {exc}") from exc
    if "scenario" not in parser:
        raise DataFileError(f"{path}: missing [scenario] section")
    sec = parser["scenario"]
    unknown = set(sec) - _KEYS
    if unknown:
        raise DataFileError(f"{path}: unknown keys {sorted(unknown)}")
    try:
        return _build_config(sec, path.parent)
    except (ValueError, TypeError) as exc:
        if isinstance(exc, ValidationError):
            raise
        raise DataFileError(f"{path}: {exc}") from exc


def _build_config(sec, base_dir: Path) -> ScenarioConfig:
    cfg = ScenarioConfig()
    get = sec.get
    n = sec.getint("slot_count", cfg.slot_count)

    def series(key):
        name = get(key)
        if name is None:
            return None
        return tuple(float(v) for v in load_series_csv(base_dir / name, expected_length=n))

    array = SolarArrayParams(
        panel_count=sec.getint("panel_count", cfg.array.panel_count),
        panel_area=sec.getfloat("panel_area", cfg.array.panel_area),
        efficiency=sec.getfloat("panel_efficiency", cfg.array.efficiency),
    )
    demand = DemandProfileSpec(
        peak_windows=_parse_windows(get("peak_windows")) if get("peak_windows") else cfg.demand.peak_windows,
        peak_trips=_int_pair(get("peak_trips")) if get("peak_trips") else cfg.demand.peak_trips,
        offpeak_trips=_int_pair(get("offpeak_trips")) if get("offpeak_trips") else cfg.demand.offpeak_trips,
        energy_per_trip=sec.getfloat("energy_per_trip", cfg.demand.energy_per_trip),
        household_range=(
            sec.getfloat("household_min", cfg.demand.household_range[0]),
            sec.getfloat("household_max", cfg.demand.household_range[1]),
        ),
        household_scale=sec.getfloat("household_scale", cfg.demand.household_scale),
    )
    irr_series = series("irradiance_file")
    irradiance = IrradianceSpec(
        series=irr_series,
        peak=sec.getfloat("irradiance_peak", cfg.irradiance.peak),
        peak_position=sec.getfloat("irradiance_peak_position", None),
        half_width=sec.getfloat("irradiance_half_width", None),
    )
    grid_prices = series("grid_price_file")
    cycle_cost_text = get("cycle_cost", "auto").strip().lower()
    esd = EsdParams(
        capacity=sec.getfloat("esd_capacity", cfg.esd.capacity),
        floor=sec.getfloat("esd_floor", cfg.esd.floor),
        efficiency=sec.getfloat("esd_efficiency", cfg.esd.efficiency),
        rate_limit=sec.getfloat("esd_rate_limit", cfg.esd.rate_limit),
        cycle_cost=cfg.esd.cycle_cost if cycle_cost_text == "auto" else float(cycle_cost_text),
    )
    out = ScenarioConfig(
        slot_count=n,
        slot_duration=sec.getfloat("slot_duration", cfg.slot_duration),
        day_start_hour=_hour(get("day_start_hour", str(cfg.day_start_hour))),
        array=array,
        esd=esd,
        vc=VcParams(
            a_initial=sec.getfloat("a_initial", cfg.vc.a_initial),
            step=sec.getfloat("vc_step", cfg.vc.step),
            a_floor=sec.getfloat("a_floor", cfg.vc.a_floor),
        ),
        initial_soc=sec.getfloat("initial_soc", cfg.initial_soc),
        grid_prices=grid_prices if grid_prices is not None else cfg.grid_prices,
        sell_factor=sec.getfloat("sell_factor", cfg.sell_factor),
        buy_factor=sec.getfloat("buy_factor", cfg.buy_factor),
        demand=demand,
        irradiance=irradiance,
        sfc_demand=series("sfc_demand_file"),
        household_demand=series("household_demand_file"),
        rng_seed=sec.getint("seed", cfg.rng_seed),
    )
    if cycle_cost_text == "auto":
        out = out.with_auto_cycle_cost()
    return out


def with_overrides(cfg: ScenarioConfig, *, seed: Optional[int] = None,
                   panels: Optional[int] = None, a_initial: Optional[float] = None,
                   household_scale: Optional[float] = None) -> ScenarioConfig:
    if seed is not None:
        cfg = replace(cfg, rng_seed=seed)
    if panels is not None:
        cfg = replace(cfg, array=replace(cfg.array, panel_count=panels))
    if a_initial is not None:
        cfg = replace(cfg, vc=replace(cfg.vc, a_initial=a_initial))
    if household_scale is not None:
        cfg = replace(cfg, demand=replace(cfg.demand, household_scale=household_scale))
    return cfg
