"""Command line entry point: ``copula-lag {simulate,scan,analyze-tetouan,repro}``.

Result files always store nats. Every command writes a JSON manifest next
to its outputs holding the full configuration, the tool version and the
SHA-256 of every input, enough to reproduce the outputs bit for bit.

Exit codes: 0 success, 2 usage error, 3 bad input or configuration,
4 numerically degenerate sample, 5 a reproduction case failed.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import math
import os
import sys
import time
from pathlib import Path

from . import __version__
from .errors import CopulaLagError, DegenerateSampleError
from .estimators import EstimatorConfig
from .ingest import (
    TETOUAN_SCHEMA,
    DatasetSchema,
    lag_grid_hours,
    load_csv,
    load_series_csv,
    pairwise_scan_matrix,
)
from .lagscan import LagScanConfig, TeCurve, scan_directions, self_scan
from .simulators import SimulatorSpec, simulate, write_trajectory_csv

EXIT_USAGE = 2
EXIT_INPUT = 3
EXIT_DEGENERATE = 4
EXIT_REPRO_FAILED = 5

JOBS_ENV = "COPULA_LAG_JOBS"

REPRO_BASE_SEED = 20231023
"""Seed of case (system s, lag l) in ``repro`` is ``REPRO_BASE_SEED + 100*s + l``."""

LN2 = math.log(2.0)


class UsageError(Exception):
    pass


def parse_range(text: str) -> tuple[int, int]:
    """``"1..8"`` -> ``(1, 8)``; a single number means a one-element range."""
    parts = text.split("..")
    try:
        if len(parts) == 1:
            lo = hi = int(parts[0])
        elif len(parts) == 2:
            lo, hi = int(parts[0]), int(parts[1])
        else:
            raise ValueError
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a range like 1..8, got {text!r}")
    if lo < 1 or hi < lo:
        raise argparse.ArgumentTypeError(f"invalid range {text!r}")
    return lo, hi


def parse_window(text: str) -> tuple[str, str]:
    parts = text.split("..")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected START..END dates, got {text!r}")
    return parts[0].strip(), parts[1].strip()


def sha256(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            h.update(block)
    return h.hexdigest()


def _dump_json(obj, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def manifest(command: str, config: dict, inputs=(), outputs=(), started=None, timing=False) -> dict:
    doc = {
        "tool": "copula-lag",
        "version": __version__,
        "command": command,
        "config": config,
        "inputs": [{"path": str(p), "sha256": sha256(p)} for p in inputs],
        "outputs": sorted(str(o) for o in outputs),
        "units": "nats",
    }
    if timing and started is not None:
        doc["wall_clock_seconds"] = time.perf_counter() - started
    return doc


def write_curve_csv(curve: TeCurve, path, lag_values=None) -> None:
    """Header ``lag,te_nats``; floats written with ``repr`` so they round-trip."""
    lags = lag_values if lag_values is not None else curve.lags
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["lag", "te_nats"])
        for lag, v in zip(lags, curve.values):
            w.writerow([int(lag), repr(float(v))])


def curve_json(curve: TeCurve) -> dict:
    return {
        "direction": curve.direction,
        "identified_lag": int(curve.identified_lag),
        "max_te_nats": float(curve.max_te),
        "entries": [{"lag": int(l), "te_nats": float(v)} for l, v in curve.entries],
    }


def _display(value: float, bits: bool) -> str:
    return f"{value / LN2:.4f} bits" if bits else f"{value:.4f} nats"


def _estimator(args) -> EstimatorConfig:
    return EstimatorConfig(k=args.k, norm=args.norm, jitter_scale=args.jitter, seed=args.seed)


def _jobs(args) -> int:
    if args.jobs is not None:
        return max(1, args.jobs)
    try:
        return max(1, int(os.environ.get(JOBS_ENV, "1")))
    except ValueError:
        raise UsageError(f"{JOBS_ENV} must be an integer")


def cmd_simulate(args) -> int:
    started = time.perf_counter()
    overrides = {k: getattr(args, k) for k in
                 ("mu1", "mu2", "delta1", "delta2", "alpha", "beta", "length")
                 if getattr(args, k) is not None}
    spec = SimulatorSpec(system=args.system, lag=args.lag, seed=args.seed, **overrides)
    traj = simulate(spec)
    out = Path(args.out)
    write_trajectory_csv(traj, out)
    man_path = out.with_name(out.name + ".manifest.json")
    doc = manifest("simulate", {"spec": spec.as_dict()}, outputs=[out.name],
                   started=started, timing=args.timing)
    doc["diagnostics"] = list(traj.diagnostics)
    _dump_json(doc, man_path)
    print(f"wrote {len(traj)} samples of {spec.system} (lag {spec.lag}) to {out}")
    for note in traj.diagnostics:
        print(f"note: {note}", file=sys.stderr)
    return 0


def cmd_scan(args) -> int:
    started = time.perf_counter()
    lo, hi = args.lags
    cfg = LagScanConfig(lo, hi, args.history_order, _estimator(args), args.direction)
    jobs = _jobs(args)
    cols = [c for c in (args.x, args.y) if c]
    series = load_series_csv(args.input, cols or None)
    names = list(series)
    self_mode = args.self_scan or len(names) == 1
    if self_mode:
        xname = args.x or names[0]
        curves = {"self": self_scan(series[xname], cfg, jobs)}
    else:
        if len(names) < 2:
            raise UsageError("scan needs two series (--x and --y) or --self")
        xname, yname = (args.x, args.y) if args.x and args.y else names[:2]
        curves = scan_directions(series[xname], series[yname], cfg, jobs)

    prefix = Path(args.out)
    outputs, doc_curves = [], {}
    for direction, curve in curves.items():
        stem = prefix.name if len(curves) == 1 else f"{prefix.name}_{direction}"
        write_curve_csv(curve, prefix.with_name(stem + ".csv"))
        outputs.append(stem + ".csv")
        doc_curves[direction] = curve_json(curve)
        print(f"{direction}: identified lag {curve.identified_lag}, "
              f"max TE {_display(curve.max_te, args.bits)}")
    config = {"scan": cfg.as_dict(), "self": self_mode, "x": xname,
              "y": None if self_mode else yname}
    doc = manifest("scan", config, inputs=[args.input], outputs=outputs + [prefix.name + ".json"],
                   started=started, timing=args.timing)
    if len(doc_curves) == 1:
        result = {**next(iter(doc_curves.values())), "manifest": doc}
    else:
        result = {"curves": doc_curves, "manifest": doc}
    _dump_json(result, prefix.with_name(prefix.name + ".json"))
    return 0


def cmd_analyze_tetouan(args) -> int:
    started = time.perf_counter()
    schema = DatasetSchema.from_file(args.schema) if args.schema else TETOUAN_SCHEMA
    series = load_csv(args.csv, schema, args.window, fill=args.fill,
                      resample_hourly=args.resample_hourly)
    factors = {k: series[k] for k in schema.factors}
    targets = {k: series[k] for k in schema.targets}
    interval = next(iter(series.values())).sample_interval
    hmin, hmax = args.lag_hours
    lags = lag_grid_hours(hmin, hmax, interval)
    hours = list(range(hmin, hmax + 1))
    cfg = _estimator(args)
    curves = pairwise_scan_matrix(factors, targets, lags, cfg, args.history_order, _jobs(args))

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    outputs = []
    summary = [["factor", "network", "identified_lag_hours", "max_te_nats"]]
    for (f, t), curve in curves.items():
        name = f"curve_{f}__{t}.csv"
        write_curve_csv(curve, out / name, lag_values=hours)
        outputs.append(name)
        lag_h = curve.identified_lag // (lags[0] // hmin)
        summary.append([f, t, lag_h, repr(float(curve.max_te))])
        print(f"{f:>22} -> {t:<10} peak at {lag_h:2d} h, {_display(curve.max_te, args.bits)}")
    with open(out / "summary.csv", "w", newline="", encoding="utf-8") as fh:
        csv.writer(fh, lineterminator="\n").writerows(summary)
    outputs.append("summary.csv")
    n = len(next(iter(series.values())))
    config = {
        "schema": schema.as_dict(), "window": list(map(str, args.window)),
        "lag_hours": [hmin, hmax], "lag_samples": lags, "lag_unit_in_curve_files": "hours",
        "sample_interval_seconds": interval.total_seconds(), "samples_per_series": n,
        "fill": args.fill, "resample_hourly": args.resample_hourly,
        "history_order": args.history_order, "estimator": cfg.as_dict(),
    }
    _dump_json(manifest("analyze-tetouan", config, inputs=[args.csv] + ([args.schema] if args.schema else []),
                        outputs=outputs, started=started, timing=args.timing),
               out / "manifest.json")
    return 0


def repro_cases(suite: str):
    systems = [1, 2, 3, 4] if suite == "all" else [int(suite[-1])]
    return [(s, l, REPRO_BASE_SEED + 100 * s + l) for s in systems for l in (1, 2, 3, 4)]


def run_case(system: int, lag: int, seed: int, cfg: LagScanConfig, jobs: int = 1) -> TeCurve:
    traj = simulate(SimulatorSpec(system=system, lag=lag, seed=seed))
    if traj.y is None:
        return self_scan(traj.x, cfg, jobs)
    return scan_directions(traj.x, traj.y, cfg, jobs)["x_to_y"]


def cmd_repro(args) -> int:
    started = time.perf_counter()
    cfg = LagScanConfig(1, 8, 1, _estimator(args))
    jobs = _jobs(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    cases = repro_cases(args.suite)
    results = {}
    for system, lag, seed in cases:
        curve = run_case(system, lag, seed, cfg, jobs)
        results[(system, lag)] = (seed, curve)
        ok = curve.identified_lag == lag
        print(f"sim{system} lag={lag} seed={seed}: identified {curve.identified_lag} "
              f"({_display(curve.max_te, args.bits)}) {'PASS' if ok else 'FAIL'}")

    outputs = []
    for system in sorted({s for s, _, _ in cases}):
        name = f"sim{system}_curves.csv"
        with open(out / name, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["lag"] + [f"te_nats_l{l}" for l in (1, 2, 3, 4)])
            for i, lag in enumerate(cfg.lags):
                w.writerow([lag] + [repr(float(results[(system, l)][1].values[i]))
                                    for l in (1, 2, 3, 4)])
        outputs.append(name)
    failed = []
    with open(out / "cases.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["system", "true_lag", "seed", "identified_lag", "max_te_nats", "pass"])
        for (system, lag), (seed, curve) in results.items():
            ok = curve.identified_lag == lag
            if not ok:
                failed.append((system, lag, seed, curve.identified_lag))
            w.writerow([system, lag, seed, curve.identified_lag, repr(float(curve.max_te)),
                        int(ok)])
    outputs.append("cases.csv")
    config = {"suite": args.suite, "scan": cfg.as_dict(), "base_seed": REPRO_BASE_SEED,
              "cases": [{"system": s, "lag": l, "seed": sd} for s, l, sd in cases],
              "simulator_defaults": SimulatorSpec().as_dict()}
    _dump_json(manifest("repro", config, outputs=outputs, started=started, timing=args.timing),
               out / "manifest.json")
    print(f"{len(cases) - len(failed)}/{len(cases)} cases identified the true lag")
    if failed:
        print("system  true_lag  seed  identified", file=sys.stderr)
        for row in failed:
            print("%6d  %8d  %d  %10d" % row, file=sys.stderr)
        return EXIT_REPRO_FAILED
    return 0


def _add_estimator_flags(p):
    p.add_argument("--k", type=int, default=3, help="neighbor count (default 3)")
    p.add_argument("--norm", choices=["chebyshev", "euclidean"], default="chebyshev")
    p.add_argument("--jitter", type=float, default=0.0,
                   help="uniform tie-breaking noise scale added before ranking")
    p.add_argument("--seed", type=int, default=0, help="seed for jitter / simulation")
    p.add_argument("--jobs", type=int, default=None,
                   help=f"worker threads (default ${JOBS_ENV} or 1)")
    p.add_argument("--bits", action="store_true", help="print values in bits (files stay in nats)")
    p.add_argument("--timing", action="store_true",
                   help="record wall-clock duration in the manifest (breaks bit-identity)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="copula-lag",
        description="Identify time lags from copula-entropy based transfer entropy.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="write a simulated trajectory CSV")
    p.add_argument("--system", required=True, choices=["1", "2", "3", "4"])
    p.add_argument("--lag", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    for name in ("mu1", "mu2", "delta1", "delta2", "alpha", "beta"):
        p.add_argument(f"--{name}", type=float)
    p.add_argument("--length", type=int)
    p.add_argument("--out", default="trajectory.csv")
    p.add_argument("--timing", action="store_true")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("scan", help="TE curve over a lag range")
    p.add_argument("--input", required=True, help="CSV with numeric columns")
    p.add_argument("--x", help="source column (default: first non-index column)")
    p.add_argument("--y", help="target column (default: second non-index column)")
    p.add_argument("--self", dest="self_scan", action="store_true",
                   help="scan the source column against its own past")
    p.add_argument("--lags", type=parse_range, default=(1, 8), help="lag range, e.g. 1..8")
    p.add_argument("--direction", choices=["x_to_y", "y_to_x", "both"], default="x_to_y")
    p.add_argument("--history-order", type=int, default=1)
    p.add_argument("--out", default="curve", help="output prefix; writes PREFIX.csv and PREFIX.json")
    _add_estimator_flags(p)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("analyze-tetouan", help="TE from weather factors to power consumption")
    p.add_argument("--csv", required=True)
    p.add_argument("--schema", help="JSON role->column mapping (default: UCI Tetouan header)")
    p.add_argument("--window", type=parse_window, default=("2017-10-23", "2017-10-27"))
    p.add_argument("--lag-hours", type=parse_range, default=(1, 24))
    p.add_argument("--fill", choices=["ffill"], default=None)
    p.add_argument("--resample-hourly", action="store_true")
    p.add_argument("--history-order", type=int, default=1)
    p.add_argument("--out", default="tetouan_out")
    _add_estimator_flags(p)
    p.set_defaults(func=cmd_analyze_tetouan)

    p = sub.add_parser("repro", help="rerun the simulated-system lag identification grid")
    p.add_argument("suite", choices=["sim1", "sim2", "sim3", "sim4", "all"])
    p.add_argument("--out", default="repro_out")
    _add_estimator_flags(p)
    p.set_defaults(func=cmd_repro)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DegenerateSampleError as exc:
        print(f"degenerate sample: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except (CopulaLagError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
