"""Command-line front end: ``abrbench run|gen-trace|export-netem|validate``."""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from . import __version__
from .adaptation import LOGIC_NAMES, UnknownLogicError, make_logic
from .config import ConfigError, load_params
from .engine import run_session
from .metrics import SummaryReport, buffer_at, format_report_csv, mean_report, summarize
from .model import (BandwidthTrace, ModelError, SessionConfig, format_trace,
                    load_ladder, load_trace)
from .netsim import emit_shaping_script, trace_checksum
from .tracegen import (REFERENCE_DROPS, REFERENCE_DURATION, REFERENCE_FLOOR, REFERENCE_MEAN,
                       REFERENCE_SEED, TraceGenerationError, check_mean, generate_trace,
                       reference_trace)


@dataclass
class ExperimentSpec:
    logics: list[str]
    segment_durations: list[float]
    trace: str = "reference"
    ladder: str = "default"
    repeats: int = 1
    base_seed: int = 0
    output: str = "results"
    params: str | None = None
    plot_data: bool = False

    def __post_init__(self):
        if not self.logics:
            raise ValueError("at least one logic required")
        if not self.segment_durations:
            raise ValueError("at least one segment duration required")
        if self.repeats < 1:
            raise ValueError("repeats must be >= 1")
        for name in self.logics:
            if name not in LOGIC_NAMES:
                raise UnknownLogicError(name)


def resolve_trace(spec: str) -> BandwidthTrace:
    if spec == "reference":
        return reference_trace()
    return load_trace(spec)


def write_atomic(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    with os.fdopen(fd, "w", newline="\n") as fh:
        fh.write(text)
    os.replace(tmp, path)


def _fmt(x: float) -> str:
    return f"{x:.6f}".rstrip("0").rstrip(".")


def cmd_run(spec: ExperimentSpec) -> list[SummaryReport]:
    """Run every (logic, duration, repeat) cell and write the report files.

    Returns the averaged rows, one per (logic, duration), in the order requested.
    """
    trace = resolve_trace(spec.trace)
    ladder = load_ladder(spec.ladder)
    params = load_params(spec.params)
    out = Path(spec.output)
    rows, runs = [], []
    for name in spec.logics:
        for d in spec.segment_durations:
            media = (trace.duration // d) * d
            reports = []
            for r in range(spec.repeats):
                seed = spec.base_seed + r
                config = SessionConfig(segment_duration=d, media_duration=media, seed=seed,
                                       **params.session)
                logic = make_logic(name, seed=seed, params=params.for_logic(name))
                log = run_session(config, trace, ladder, logic)
                report = summarize(log)
                reports.append(report)
                stem = f"{name}_{_fmt(d)}s_r{r}"
                write_atomic(out / "logs" / f"{stem}.log", log.to_text())
                if spec.plot_data:
                    write_atomic(out / "plot" / f"{stem}.csv", _plot_data(log))
                runs.append({"seed": seed, "repeat": r, **asdict(report)})
            rows.append(mean_report(reports))
    write_atomic(out / "summary.csv", format_report_csv(rows))
    write_atomic(out / "table.csv", _table(rows, spec))
    report = {
        "format": "abrbench-report/1",
        "version": __version__,
        "trace": {"source": spec.trace, "sha256": trace_checksum(trace),
                  "duration_s": trace.duration, "mean_kbps": trace.mean()},
        "ladder": list(ladder.bitrates),
        "repeats": spec.repeats,
        "base_seed": spec.base_seed,
        "rows": [asdict(r) for r in rows],
        "runs": runs,
    }
    write_atomic(out / "report.json", json.dumps(report, indent=2, sort_keys=True) + "\n")
    return rows


def _table(rows: Sequence[SummaryReport], spec: ExperimentSpec) -> str:
    """Wide layout: one line per logic, throughput and stalls per duration."""
    durations = spec.segment_durations
    head = ["logic"] + [f"throughput_{_fmt(d)}s" for d in durations] + [f"stalls_{_fmt(d)}s" for d in durations]
    cells = {(r.logic_name, r.segment_duration): r for r in rows}
    lines = [",".join(head)]
    for name in spec.logics:
        vals = [_fmt(cells[name, d].media_throughput) for d in durations]
        vals += [_fmt(cells[name, d].stall_count) for d in durations]
        lines.append(",".join([name] + vals))
    return "\n".join(lines) + "\n"


def _plot_data(log) -> str:
    """Per-second samples: wall time, bitrate of the segment on screen
    (0 before start and while stalled), buffer level."""
    grid = np.arange(0.0, np.floor(log.session_end) + 1.0)
    buffers = buffer_at(log, grid)
    d = log.config.segment_duration
    lines = ["time_s,bitrate_kbps,buffer_s"]
    for g, buf in zip(grid, buffers):
        stalled = any(s.start <= g < s.end for s in log.stalls)
        rate = 0.0
        if log.playback_start <= g < log.session_end and not stalled:
            played = _played_at(log, g)
            rate = log.segments[min(int(played // d), len(log.segments) - 1)].bitrate
        lines.append(f"{_fmt(g)},{_fmt(rate)},{_fmt(float(buf))}")
    return "\n".join(lines) + "\n"


def _played_at(log, t: float) -> float:
    stalled = sum(max(0.0, min(s.end, t) - s.start) for s in log.stalls if s.start < t)
    return max(0.0, t - log.playback_start - stalled)


def cmd_gen_trace(duration: float, target_mean: float, drops: Sequence[float], seed: int,
                  floor: float = REFERENCE_FLOOR, steps: int | None = None) -> BandwidthTrace:
    trace = generate_trace(duration, target_mean, drops, seed, floor=floor, steps=steps)
    check_mean(trace, target_mean)
    return trace


def cmd_export_netem(trace_spec: str, interface: str = "eth0", delay: float = 0.080) -> str:
    return emit_shaping_script(resolve_trace(trace_spec), interface, delay)


def _floats(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def _names(values: Sequence[str] | None) -> list[str]:
    if not values:
        return list(LOGIC_NAMES)
    names = []
    for v in values:
        names += [x.strip() for x in v.split(",") if x.strip()]
    return names


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="abrbench", description=__doc__)
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run sessions and write reports")
    run.add_argument("--logic", action="append", help=f"comma-separated names (default: all of {','.join(LOGIC_NAMES)})")
    run.add_argument("--segment-duration", default="2,10", help="comma-separated seconds (default: 2,10)")
    run.add_argument("--trace", default="reference", help="trace CSV or 'reference'")
    run.add_argument("--ladder", default="default", help="ladder CSV or 'default'")
    run.add_argument("--repeats", type=int, default=1)
    run.add_argument("--seed", type=int, default=0, help="base seed; repeat r uses seed+r")
    run.add_argument("--out", default="results", help="output directory")
    run.add_argument("--params", help="parameter file")
    run.add_argument("--plot-data", action="store_true", help="also write per-second plot data")

    gen = sub.add_parser("gen-trace", help="generate a reference-style bandwidth trace")
    gen.add_argument("--duration", type=float, default=REFERENCE_DURATION)
    gen.add_argument("--mean", type=float, default=REFERENCE_MEAN)
    gen.add_argument("--drops", default=",".join(f"{d:g}" for d in REFERENCE_DROPS),
                     help="comma-separated drop times in seconds ('' for none)")
    gen.add_argument("--seed", type=int, default=REFERENCE_SEED)
    gen.add_argument("--floor", type=float, default=REFERENCE_FLOOR)
    gen.add_argument("--steps", type=int, help="staircase steps per span (default: random 3-5)")
    gen.add_argument("--out", default="-", help="output file ('-' for stdout)")

    net = sub.add_parser("export-netem", help="write a tc/netem shaping script for a trace")
    net.add_argument("--trace", default="reference")
    net.add_argument("--interface", default="eth0")
    net.add_argument("--delay", type=float, default=0.080, help="one-way delay in seconds (default 0.08)")
    net.add_argument("--out", default="-")

    val = sub.add_parser("validate", help="check ladder, trace and parameter files")
    val.add_argument("--ladder")
    val.add_argument("--trace")
    val.add_argument("--params")
    return p


def _emit(text: str, dest: str) -> None:
    if dest == "-":
        sys.stdout.write(text)
    else:
        write_atomic(Path(dest), text)


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            spec = ExperimentSpec(
                logics=_names(args.logic),
                segment_durations=_floats(args.segment_duration),
                trace=args.trace, ladder=args.ladder, repeats=args.repeats,
                base_seed=args.seed, output=args.out, params=args.params,
                plot_data=args.plot_data,
            )
            rows = cmd_run(spec)
            print(f"wrote {len(rows)} rows to {Path(args.out) / 'summary.csv'}")
        elif args.command == "gen-trace":
            trace = cmd_gen_trace(args.duration, args.mean, _floats(args.drops), args.seed,
                                  args.floor, args.steps)
            _emit(format_trace(trace), args.out)
            if args.out != "-":
                print(f"wrote {len(trace.points)} points, mean {trace.mean():.2f} kbps, to {args.out}")
        elif args.command == "export-netem":
            _emit(cmd_export_netem(args.trace, args.interface, args.delay), args.out)
        elif args.command == "validate":
            if args.ladder:
                ladder = load_ladder(args.ladder)
                print(f"ladder ok: {len(ladder)} representations")
            if args.trace:
                trace = load_trace(args.trace)
                print(f"trace ok: {len(trace.points)} points, mean {trace.mean():.2f} kbps")
            if args.params:
                pf = load_params(args.params)
                print(f"params ok: session={sorted(pf.session)} logics={sorted(pf.logics)}")
    except (ModelError, ConfigError, TraceGenerationError, UnknownLogicError, ValueError, OSError) as exc:
        print(f"abrbench: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
