"""Command-line front end.

Subcommands:
  analyze   <taskset-file> --policy dm|sm|given --tests bf,exact,t44,t45,t46,t47
  curves    --c C --d D --t T --rho R  (work / carry-in bounds / linear bounds CSV)
  simulate  <taskset-file> --pattern sync|file|random --horizon H --speed p/q
  generate  --n N --m M --u U --periods lo:hi --dratio lo:hi --seed S
  sweep     --config sweep.toml --out dir/
"""

from __future__ import annotations

import argparse
import json
import sys as _sys

from . import analysis, experiment, simulator
from .errors import GfpschedError, HyperperiodOverflow
from .generator import DEFAULT_SNAP_DEN, GenConfig, generate
from .model import (
    PriorityPolicy,
    assign_priorities,
    format_taskset,
    load_taskset_file,
)
from .rationals import Rat, format_time, parse_time, rat
from .workload import (
    linear_heavy_bound,
    linear_work_bound,
    omega_heavy,
    omega_light,
    work,
)

try:
    import tomllib
except ImportError:  # Python 3.10
    import tomli as tomllib


def _parse_range(text: str) -> tuple:
    lo, _, hi = text.partition(":")
    if not hi:
        raise argparse.ArgumentTypeError(f"expected lo:hi, got {text!r}")
    return rat(lo), rat(hi)


def _policy(text: str) -> PriorityPolicy:
    try:
        return PriorityPolicy(text.lower())
    except ValueError:
        raise argparse.ArgumentTypeError(f"unknown policy {text!r}")


def _load_system(path, policy: PriorityPolicy, m_override=None):
    tasks, m = load_taskset_file(path)
    if m_override is not None:
        m = m_override
    if m is None:
        raise GfpschedError(f"{path} has no 'M <int>' header; pass --m")
    return assign_priorities(tasks, policy, m)


def _cmd_analyze(args) -> int:
    system = _load_system(args.taskset, _policy(args.policy), args.m)
    test_ids = [t.strip() for t in args.tests.split(",") if t.strip()]
    jsonl_lines = []
    print(f"tasks={len(system)} M={system.processors} policy={args.policy}")
    header = f"{'test':8} {'verdict':12} {'per-task (1=ok)':{len(system) + 2}} time"
    print(header)
    exit_code = 0
    for test_id in test_ids:
        try:
            verdict = analysis.run_test(
                system,
                test_id,
                ell_max=args.ell_max,
                lcm_bound=args.lcm_bound,
            )
        except (GfpschedError, HyperperiodOverflow) as exc:
            print(f"{test_id:8} error: {exc}")
            exit_code = 2
            continue
        bits = "".join("1" if v.schedulable else "0" for v in verdict.per_task)
        print(
            f"{test_id:8} {verdict.overall.value:12} {bits:{len(system) + 2}} "
            f"{verdict.wall_time:.3f}s"
        )
        for v in verdict.per_task:
            jsonl_lines.append(
                json.dumps(
                    {
                        "test": test_id,
                        "task": v.task_id,
                        "k": v.k,
                        "verdict": v.verdict.value,
                        "witness": [[ell, str(rho)] for ell, rho in v.witness],
                        "violated_delta": None
                        if v.violated_delta is None
                        else str(v.violated_delta),
                        "flags": list(v.flags),
                    },
                    sort_keys=True,
                )
            )
    if args.jsonl:
        with open(args.jsonl, "w", encoding="utf-8") as fh:
            fh.write("\n".join(jsonl_lines) + ("\n" if jsonl_lines else ""))
    return exit_code


def _cmd_curves(args) -> int:
    from .model import task as make_task

    tsk = make_task(0, args.c, args.d, args.t)
    rho = rat(args.rho)
    step = rat(args.step)
    dmax = rat(args.dmax)
    rows = ["delta,work,omega_light,omega_heavy,linear_work,linear_heavy"]
    delta = Rat(0)
    while delta <= dmax:
        rows.append(
            ",".join(
                str(v)
                for v in (
                    delta,
                    work(tsk, delta),
                    omega_light(tsk, delta, rho),
                    omega_heavy(tsk, delta),
                    linear_work_bound(tsk, delta),
                    linear_heavy_bound(tsk, delta),
                )
            )
        )
        delta += step
    text = "\n".join(rows) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        _sys.stdout.write(text)
    return 0


def _cmd_simulate(args) -> int:
    system = _load_system(args.taskset, PriorityPolicy.AS_GIVEN, args.m)
    horizon = rat(args.horizon)
    if args.pattern == "sync":
        pattern = simulator.SynchronousPeriodic(horizon=horizon)
    elif args.pattern == "random":
        pattern = simulator.RandomSporadic(horizon=horizon, seed=args.seed)
    elif args.pattern == "file":
        if not args.releases:
            raise GfpschedError("--pattern file requires --releases <path>")
        releases: dict[int, list] = {}
        with open(args.releases, "r", encoding="utf-8") as fh:
            for line in fh:
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                parts = line.split()
                releases.setdefault(int(parts[0]), []).extend(
                    parse_time(p) for p in parts[1:]
                )
        pattern = simulator.ExplicitReleases(releases=releases, horizon=horizon)
    else:
        raise GfpschedError(f"unknown pattern {args.pattern}")
    trace = simulator.simulate(
        system, pattern, speed=rat(args.speed), stop_on_first_miss=args.stop_on_miss
    )
    if args.trace:
        with open(args.trace, "w", encoding="utf-8") as fh:
            fh.write("time,kind,task,job,proc\n")
            for ev in trace.events:
                fh.write(
                    f"{ev.time},{ev.kind.value},{ev.task},{ev.job},{ev.processor}\n"
                )
    print(f"verdict: {trace.verdict}")
    for ev in trace.misses:
        print(f"  miss: task {ev.task} job {ev.job} at t={ev.time}")
    return 1 if trace.verdict == simulator.MISS_FOUND else 0


def _cmd_generate(args) -> int:
    lo, hi = _parse_range(args.periods)
    rlo, rhi = _parse_range(args.dratio)
    config = GenConfig(
        n=args.n,
        u_sum=rat(args.u),
        period_lo=lo,
        period_hi=hi,
        dratio_lo=rlo,
        dratio_hi=rhi,
        seed=args.seed,
        snap_den=args.snap_den,
    )
    tasks = generate(config)
    text = format_taskset(tasks, args.m)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        _sys.stdout.write(text)
    return 0


def _sweep_config_from_toml(path) -> experiment.SweepConfig:
    with open(path, "rb") as fh:
        doc = tomllib.load(fh)
    kwargs = {}
    if "m" in doc:
        kwargs["m_values"] = tuple(doc["m"])
    if "n" in doc:
        kwargs["n_rule"] = doc["n"]
    if "utilization" in doc:
        u = doc["utilization"]
        if isinstance(u, list):
            kwargs["utilization_fractions"] = tuple(Rat(int(p), 100) for p in u)
        else:
            kwargs["utilization_fractions"] = tuple(
                Rat(p, 100)
                for p in range(u["start_pct"], u["stop_pct"] + 1, u["step_pct"])
            )
    if "sets_per_point" in doc:
        kwargs["sets_per_point"] = doc["sets_per_point"]
    if "policy" in doc:
        kwargs["policy"] = PriorityPolicy(doc["policy"].lower())
    if "tests" in doc:
        kwargs["tests"] = tuple(doc["tests"])
    if "periods" in doc:
        kwargs["period_lo"], kwargs["period_hi"] = _parse_range(doc["periods"])
    if "dratio" in doc:
        kwargs["dratio_lo"], kwargs["dratio_hi"] = _parse_range(doc["dratio"])
    if "seed" in doc:
        kwargs["seed_base"] = doc["seed"]
    if "ell_max" in doc:
        kwargs["ell_max"] = doc["ell_max"]
    if "snap_den" in doc:
        kwargs["snap_den"] = doc["snap_den"]
    return experiment.SweepConfig(**kwargs)


def _cmd_sweep(args) -> int:
    import os

    config = _sweep_config_from_toml(args.config)
    result = experiment.run_sweep(config)
    os.makedirs(args.out, exist_ok=True)
    written = experiment.emit_plot_data(result, os.path.join(args.out, "acceptance.csv"))
    for path in written:
        print(f"wrote {path}")
    print(f"{len(result.points)} grid points in {result.wall_time:.1f}s")
    for point in result.points:
        if point.incomplete:
            print(f"  INCOMPLETE: M={point.m} u={point.u_sum}")
    if result.violations:
        print(f"{len(result.violations)} dominance violation(s):")
        for v in result.violations:
            print(v.describe())
        return 3
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gfpsched",
        description="Global fixed-priority schedulability toolkit "
        "for arbitrary-deadline sporadic tasks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="run schedulability tests on a task-set file")
    p.add_argument("taskset")
    p.add_argument("--policy", default="dm", help="dm|sm|given")
    p.add_argument("--tests", default="bf,t44,t45,t46,t47")
    p.add_argument("--ell-max", type=int, default=analysis.DEFAULT_ELL_MAX)
    p.add_argument("--lcm-bound", type=int, default=10**6)
    p.add_argument("--m", type=int, default=None, help="override the file's M header")
    p.add_argument("--jsonl", default=None, help="write JSON-lines verdicts here")
    p.set_defaults(fn=_cmd_analyze)

    p = sub.add_parser("curves", help="dump workload curves as CSV")
    p.add_argument("--c", required=True)
    p.add_argument("--d", required=True)
    p.add_argument("--t", required=True)
    p.add_argument("--rho", required=True)
    p.add_argument("--dmax", default="60")
    p.add_argument("--step", default="1")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=_cmd_curves)

    p = sub.add_parser("simulate", help="event-driven global FP simulation")
    p.add_argument("taskset")
    p.add_argument("--pattern", default="sync", choices=("sync", "file", "random"))
    p.add_argument("--horizon", required=True)
    p.add_argument("--speed", default="1")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--releases", default=None, help="release file for --pattern file")
    p.add_argument("--trace", default=None, help="write trace CSV here")
    p.add_argument("--stop-on-miss", action="store_true")
    p.add_argument("--m", type=int, default=None)
    p.set_defaults(fn=_cmd_simulate)

    p = sub.add_parser("generate", help="generate a random task set")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--u", required=True, help="total utilization (absolute)")
    p.add_argument("--periods", default="1:100", help="lo:hi, log-uniform")
    p.add_argument("--dratio", default="0.8:2", help="lo:hi for D = r*T")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--snap-den", type=int, default=DEFAULT_SNAP_DEN)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=_cmd_generate)

    p = sub.add_parser("sweep", help="acceptance-ratio sweep from a TOML config")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_sweep)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except GfpschedError as exc:
        print(f"error: {exc}", file=_sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
