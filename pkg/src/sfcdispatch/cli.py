"""Command-line entry point: ``sfcdispatch {simulate,compare,sweep,verify}``."""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path
from typing import Optional, Sequence

from .baselines import compare, panel_sweep
from .domain import InvariantViolation, ValidationError
from .fileio import (
    load_config,
    with_overrides,
    write_metadata,
    write_summary,
    write_sweep,
    write_trace_csv,
)
from .oracle import verify
from .scenario import ScenarioConfig
from .scheduler import run_day

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_INVALID = 2
EXIT_INVARIANT = 3


def _panel_range(text: str) -> list[int]:
    """``65:115:5`` (inclusive) or a comma list ``65,80,95``."""
    try:
        if ":" in text:
            parts = [int(p) for p in text.split(":")]
            start, stop = parts[0], parts[1]
            step = parts[2] if len(parts) > 2 else 1
            if step <= 0 or stop < start:
                raise ValueError
            return list(range(start, stop + 1, step))
        return [int(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid panel range {text!r}") from None


def _int_list(text: str) -> list[int]:
    try:
        return [int(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid integer list {text!r}") from None


def _float_list(text: str) -> list[float]:
    try:
        return [float(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid number list {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sfcdispatch",
        description="Shared-facility solar/battery dispatch simulator.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def scenario_args(p):
        p.add_argument("--config", type=Path, help="scenario INI file (default: built-in)")
        p.add_argument("--seed", type=int, help="override the scenario seed")
        p.add_argument("--out", default="-", help="output CSV path, '-' for stdout")

    p = sub.add_parser("simulate", help="run one day and write the per-slot trace")
    scenario_args(p)
    p.add_argument("--panels", type=int)
    p.add_argument("--a-ini", type=float, dest="a_ini")
    p.add_argument("--household-scale", type=float, dest="household_scale")

    p = sub.add_parser("compare", help="proposed scheme vs FIT, modified and grid-tie")
    scenario_args(p)
    p.add_argument("--panels", type=int)
    p.add_argument("--a-ini", type=float, dest="a_ini")
    p.add_argument("--household-scale", type=float, dest="household_scale")

    p = sub.add_parser("sweep", help="savings vs grid-tie over panel counts and scenarios")
    scenario_args(p)
    p.add_argument("--panels", type=_panel_range, default=_panel_range("65:115:5"))
    p.add_argument("--scenarios", type=_int_list, default=[1, 2],
                   help="household demand multipliers, e.g. 1,2")
    p.add_argument("--a-ini", type=_float_list, dest="a_ini",
                   help="comma list of initial VC coefficients (default: config value)")

    p = sub.add_parser("verify", help="closed form vs brute-force search on random slots")
    p.add_argument("--instances", type=int, default=1000, help="instances per case")
    p.add_argument("--resolution", type=float, default=1e-3)
    p.add_argument("--tolerance", type=float, default=1e-3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="optional CSV report path")
    return parser


def _config(args) -> ScenarioConfig:
    cfg = load_config(args.config) if args.config else ScenarioConfig()
    return with_overrides(
        cfg,
        seed=args.seed,
        panels=getattr(args, "panels", None) if args.command != "sweep" else None,
        a_initial=getattr(args, "a_ini", None) if args.command != "sweep" else None,
        household_scale=getattr(args, "household_scale", None),
    )


def _meta_path(out: str) -> Optional[Path]:
    return None if out == "-" else Path(str(out) + ".meta.json")


def cmd_simulate(args) -> int:
    cfg = _config(args)
    trace = run_day(cfg)
    write_trace_csv(trace, args.out)
    if (meta := _meta_path(args.out)) is not None:
        write_metadata(meta, "simulate", cfg)
    return EXIT_OK


def cmd_compare(args) -> int:
    cfg = _config(args)
    trace = run_day(cfg)
    write_summary([("scenario", compare(cfg, trace))], args.out)
    if (meta := _meta_path(args.out)) is not None:
        write_metadata(meta, "compare", cfg)
    return EXIT_OK


def _rise_then_fall(values: Sequence[float]) -> bool:
    if len(values) < 3:
        return False
    peak = max(range(len(values)), key=values.__getitem__)
    return 0 < peak < len(values) - 1


def cmd_sweep(args) -> int:
    cfg = _config(args)
    points = panel_sweep(cfg, args.panels, args.scenarios, args.a_ini)
    write_sweep(points, args.out)
    if (meta := _meta_path(args.out)) is not None:
        write_metadata(meta, "sweep", cfg, panels=list(args.panels),
                       scenarios=list(args.scenarios), a_initial=args.a_ini)
    report = sys.stderr if args.out == "-" else sys.stdout
    curves: dict = {}
    for p in points:
        curves.setdefault((p.a_initial, p.scenario), []).append(p.savings_pct)
    for (a, scenario), values in sorted(curves.items()):
        shape = "rise-then-fall" if _rise_then_fall(values) else "no interior peak"
        print(f"a_ini={a:g} scenario={scenario}: {shape}", file=report)
    return EXIT_OK


def cmd_verify(args) -> int:
    rep = verify(args.instances, args.resolution, args.seed, args.tolerance)
    for case, cr in rep.cases.items():
        print(f"{case.value}: instances={cr.instances} failures={cr.failures} "
              f"max_gap={cr.max_gap:.3g} clamped={cr.clamped}")
    print(f"total failures={rep.failures} elapsed={rep.seconds:.2f}s")
    if args.out:
        with open(args.out, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["case", "instances", "failures", "max_gap", "clamped",
                        "resolution", "tolerance"])
            for case, cr in rep.cases.items():
                w.writerow([case.value, cr.instances, cr.failures, repr(cr.max_gap), cr.clamped,
                            repr(args.resolution), repr(args.tolerance)])
    return EXIT_OK if rep.ok else EXIT_VERIFY_FAILED


COMMANDS = {
    "simulate": cmd_simulate,
    "compare": cmd_compare,
    "sweep": cmd_sweep,
    "verify": cmd_verify,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except InvariantViolation as exc:
        print(f"invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
