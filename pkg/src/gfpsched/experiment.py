"""Acceptance-ratio sweeps, dominance audits and plot-data emission.

A sweep walks a utilization grid (default M*5% .. M*100% in M*5% steps),
generates ``sets_per_point`` task sets per grid point, applies the priority
policy, runs every enabled schedulability test set-wide, and records the
fraction each test accepts plus the union ("ALL") ratio.  Identical seeds
reproduce identical results byte for byte; the per-set seed is
seed_base + 1_000_003 * point_index + set_index.

Dominance relations are monitored during every sweep and can be audited in
bulk over an arbitrary corpus: per task,

    accept(t47) => accept(t46),  accept(t46) == accept(t45),
    accept(t45) => accept(t44),  accept(t44) => accept(exact),
    and under DM order accept(bf) => accept(t47).
"""

from __future__ import annotations

import time as _time
from dataclasses import dataclass
from typing import Iterable, Sequence

from . import analysis
from .analysis import DEFAULT_ELL_MAX, TestVerdict, Verdict
from .errors import HyperperiodOverflow, ResampleLimit
from .generator import DEFAULT_SNAP_DEN, GenConfig, generate
from .model import PriorityPolicy, TaskSystem, assign_priorities, format_taskset
from .rationals import Rat, as_rat
from .workload import DEFAULT_LCM_BOUND, DEFAULT_STEP_BUDGET

DEFAULT_UTILIZATION_GRID = tuple(Rat(pct, 100) for pct in range(5, 101, 5))
SEED_STRIDE = 1_000_003

# pairs (weaker, stronger): accept(weaker) must imply accept(stronger)
DOMINANCE_PAIRS = (
    ("bf", "t47"),
    ("t47", "t46"),
    ("t46", "t45"),
    ("t45", "t46"),
    ("t45", "t44"),
    ("t44", "exact"),
)


@dataclass(frozen=True)
class SweepConfig:
    m_values: tuple[int, ...] = (8,)
    n_rule: object = "5xM"             # "5xM" | "10xM" | explicit int
    utilization_fractions: tuple = DEFAULT_UTILIZATION_GRID
    sets_per_point: int = 100
    policy: PriorityPolicy = PriorityPolicy.DM
    tests: tuple[str, ...] = ("bf", "t44", "t45", "t46", "t47")
    period_lo: object = 1
    period_hi: object = 100
    dratio_lo: object = Rat(4, 5)
    dratio_hi: object = 2
    snap_den: int = DEFAULT_SNAP_DEN
    seed_base: int = 0
    ell_max: int = DEFAULT_ELL_MAX
    lcm_bound: int = DEFAULT_LCM_BOUND
    step_budget: int = DEFAULT_STEP_BUDGET

    def tasks_per_set(self, m: int) -> int:
        if self.n_rule == "5xM":
            return 5 * m
        if self.n_rule == "10xM":
            return 10 * m
        return int(self.n_rule)


@dataclass(frozen=True)
class PointResult:
    m: int
    utilization_fraction: object       # fraction of M
    u_sum: object
    sets_requested: int
    sets_generated: int
    accepted: dict
    all_accepted: int
    incomplete: bool

    def ratio(self, test_id: str):
        if self.sets_generated == 0:
            return Rat(0)
        return Rat(self.accepted[test_id], self.sets_generated)

    @property
    def all_ratio(self):
        if self.sets_generated == 0:
            return Rat(0)
        return Rat(self.all_accepted, self.sets_generated)


@dataclass(frozen=True)
class DominanceViolation:
    weaker: str
    stronger: str
    k: int | None                      # None for set-level violations
    system: TaskSystem

    def describe(self) -> str:
        where = "set-level" if self.k is None else f"task k={self.k}"
        return (
            f"accept({self.weaker}) without accept({self.stronger}) at {where}; "
            f"M={self.system.processors}\n"
            + format_taskset(self.system.tasks, self.system.processors)
        )


@dataclass(frozen=True)
class SweepResult:
    config: SweepConfig
    points: tuple[PointResult, ...]
    violations: tuple[DominanceViolation, ...]
    wall_time: float


def _run_enabled_tests(
    sys: TaskSystem, config: SweepConfig
) -> dict[str, TestVerdict | None]:
    out: dict[str, TestVerdict | None] = {}
    for test_id in config.tests:
        try:
            out[test_id] = analysis.run_test(
                sys,
                test_id,
                ell_max=config.ell_max,
                lcm_bound=config.lcm_bound,
                step_budget=config.step_budget,
                stop_on_failure=True,
            )
        except HyperperiodOverflow:
            out[test_id] = None  # test not applicable within budget
    return out


def _setwide_violations(
    results: dict[str, TestVerdict | None], sys: TaskSystem
) -> list[DominanceViolation]:
    found = []
    for weaker, stronger in DOMINANCE_PAIRS:
        a, b = results.get(weaker), results.get(stronger)
        if a is None or b is None:
            continue
        if a.schedulable and not b.schedulable:
            found.append(
                DominanceViolation(weaker=weaker, stronger=stronger, k=None, system=sys)
            )
    return found


def run_sweep(config: SweepConfig) -> SweepResult:
    started = _time.perf_counter()
    points: list[PointResult] = []
    violations: list[DominanceViolation] = []
    point_index = 0
    for m in config.m_values:
        n = config.tasks_per_set(m)
        for frac in config.utilization_fractions:
            frac = as_rat(frac)
            u_sum = frac * m
            accepted = {t: 0 for t in config.tests}
            union = 0
            generated = 0
            incomplete = False
            for set_index in range(config.sets_per_point):
                seed = config.seed_base + SEED_STRIDE * point_index + set_index
                gen = GenConfig(
                    n=n,
                    u_sum=u_sum,
                    period_lo=config.period_lo,
                    period_hi=config.period_hi,
                    dratio_lo=config.dratio_lo,
                    dratio_hi=config.dratio_hi,
                    seed=seed,
                    snap_den=config.snap_den,
                )
                try:
                    tasks = generate(gen)
                except ResampleLimit:
                    incomplete = True
                    continue
                generated += 1
                sys = assign_priorities(tasks, config.policy, m)
                results = _run_enabled_tests(sys, config)
                any_accept = False
                for test_id, verdict in results.items():
                    if verdict is not None and verdict.schedulable:
                        accepted[test_id] += 1
                        any_accept = True
                if any_accept:
                    union += 1
                violations.extend(_setwide_violations(results, sys))
            points.append(
                PointResult(
                    m=m,
                    utilization_fraction=frac,
                    u_sum=u_sum,
                    sets_requested=config.sets_per_point,
                    sets_generated=generated,
                    accepted=accepted,
                    all_accepted=union,
                    incomplete=incomplete,
                )
            )
            point_index += 1
    return SweepResult(
        config=config,
        points=tuple(points),
        violations=tuple(violations),
        wall_time=_time.perf_counter() - started,
    )


def dominance_audit(
    systems: Iterable[TaskSystem],
    tests: Sequence[str] = ("t44", "t45", "t46", "t47"),
    ell_max: int = DEFAULT_ELL_MAX,
    lcm_bound: int = DEFAULT_LCM_BOUND,
    step_budget: int = DEFAULT_STEP_BUDGET,
) -> list[DominanceViolation]:
    """Per-task dominance check over a corpus; an empty list is the expectation.

    'bf' is skipped for systems that are not DM-ordered, 'exact' for systems
    whose hyperperiod exceeds the grain bound.
    """
    found: list[DominanceViolation] = []
    for sys in systems:
        verdicts: dict[str, TestVerdict | None] = {}
        for test_id in tests:
            if test_id == "bf" and not sys.is_dm_ordered():
                verdicts[test_id] = None
                continue
            try:
                verdicts[test_id] = analysis.run_test(
                    sys,
                    test_id,
                    ell_max=ell_max,
                    lcm_bound=lcm_bound,
                    step_budget=step_budget,
                )
            except HyperperiodOverflow:
                verdicts[test_id] = None
        for weaker, stronger in DOMINANCE_PAIRS:
            a, b = verdicts.get(weaker), verdicts.get(stronger)
            if a is None or b is None:
                continue
            for va, vb in zip(a.per_task, b.per_task):
                if va.schedulable and not vb.schedulable:
                    found.append(
                        DominanceViolation(
                            weaker=weaker, stronger=stronger, k=va.k, system=sys
                        )
                    )
    return found


def emit_plot_data(result: SweepResult, path) -> list[str]:
    """Write acceptance-ratio CSV(s) plus a gnuplot companion script.

    Columns: utilization_pct,test_name,acceptance_ratio.  One CSV per M
    value (suffix _m<M> when the sweep covers several); rows are ordered
    by (utilization, test name) so reruns are byte-stable.  Returns the
    paths written.
    """
    import os

    base, ext = os.path.splitext(str(path))
    ext = ext or ".csv"
    ms = sorted({p.m for p in result.points})
    written = []
    for m in ms:
        target = f"{base}{ext}" if len(ms) == 1 else f"{base}_m{m}{ext}"
        rows = ["utilization_pct,test_name,acceptance_ratio"]
        for point in sorted(
            (p for p in result.points if p.m == m),
            key=lambda p: p.utilization_fraction,
        ):
            pct = float(point.utilization_fraction * 100)
            names = list(result.config.tests) + ["ALL"]
            for name in sorted(names):
                ratio = (
                    point.all_ratio if name == "ALL" else point.ratio(name)
                )
                rows.append(f"{pct:g},{name},{float(ratio):.6f}")
        with open(target, "w", encoding="utf-8") as fh:
            fh.write("\n".join(rows) + "\n")
        written.append(target)
    script = f"{base}.gp"
    names = sorted(list(result.config.tests) + ["ALL"])
    lines = [
        "set datafile separator ','",
        "set key outside",
        "set xlabel 'utilization (% of M)'",
        "set ylabel 'acceptance ratio'",
        "set yrange [0:1.05]",
    ]
    for target in written:
        plots = ", ".join(
            f"'{target}' using 1:(strcol(2) eq '{name}' ? $3 : 1/0) "
            f"with linespoints title '{name}'"
            for name in names
        )
        lines.append(f"plot {plots}")
        lines.append("pause -1")
    with open(script, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
    written.append(script)
    return written
