"""Acceptance gate: one test per criterion, each printing a pass/fail line.

Every tolerance is pinned here; corpora are seeded so reruns are identical.
Run with `pytest tests/test_acceptance.py -v -s` to see the criterion lines.
"""

import random
import time

from corpus import generated_system, random_task, small_integer_system
from gfpsched import analysis
from gfpsched.cli import main as cli_main
from gfpsched.errors import HyperperiodOverflow
from gfpsched.experiment import SweepConfig, dominance_audit, run_sweep
from gfpsched.model import PriorityPolicy, hyperperiod_of
from gfpsched.rationals import Rat, rat
from gfpsched.simulator import (
    MISS_FOUND,
    SynchronousPeriodic,
    counterexample_taskset,
    feasibility_speed,
    implied_speedup_lower_bound,
    simulate,
    verify_lower_bound_construction,
)
from gfpsched.workload import (
    linear_heavy_bound,
    linear_work_bound,
    omega_heavy,
    omega_light,
    work,
)


def _report(criterion: int, ok: bool, detail: str):
    print(f"[acceptance] criterion {criterion}: {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, f"criterion {criterion}: {detail}"


def test_criterion_1_workload_bound_chain():
    """1,000 random tasks x 200 sampled Delta: the full bound chain, < 10 s."""
    started = time.perf_counter()
    rng = random.Random(20260810)
    violations = 0
    for _ in range(1000):
        tsk = random_task(rng)
        util = tsk.utilization
        rho = util + (1 - util) * Rat(rng.randint(0, 1000), 1000)
        span = int(tsk.deadline + 40) * 100
        for _ in range(200):
            delta = Rat(rng.randint(1, span), 100)
            w = work(tsk, delta)
            light = omega_light(tsk, delta, rho)
            heavy = omega_heavy(tsk, delta)
            if not (w <= light <= heavy):
                violations += 1
            if not (
                w <= linear_work_bound(tsk, delta)
                and light <= linear_work_bound(tsk, delta)
                and heavy <= linear_heavy_bound(tsk, delta)
            ):
                violations += 1
    elapsed = time.perf_counter() - started
    _report(
        1,
        violations == 0 and elapsed < 10.0,
        f"{violations} violations over 200,000 samples in {elapsed:.1f}s (limit 10s)",
    )


def test_criterion_2_curve_dump_anchors(tmp_path):
    """Curve dump for (C=3, T=10, D=45) reproduces the anchor points exactly."""

    def dump(rho):
        out = tmp_path / f"curves_{rho.replace('/', '_')}.csv"
        code = cli_main(
            [
                "curves", "--c", "3", "--d", "45", "--t", "10",
                "--rho", rho, "--dmax", "60", "--step", "1", "--out", str(out),
            ]
        )
        assert code == 0
        rows = {}
        for line in out.read_text().splitlines()[1:]:
            cells = line.split(",")
            rows[rat(cells[0])] = cells[1:]
        return rows

    half = dump("1/2")
    tenth3 = dump("3/10")
    ok = (
        half[Rat(13)][0] == "6"            # work(13)
        and half[Rat(13)][1] == "6"        # light bound at rho = 1/2
        and tenth3[Rat(7)][1] == "21/5"    # light bound at rho = 3/10
        and half[Rat(0)][3] == "21/10"     # linear work bound at 0
        and half[Rat(60)][3] == "201/10"   # linear work bound at 60
    )
    _report(2, ok, "work(13)=6, light(13,1/2)=6, light(7,3/10)=21/5, line 21/10->201/10")


def test_criterion_3_dominance_chain():
    """>= 10,000 systems over M in {2,4,8}: zero verdict-order violations."""
    started = time.perf_counter()
    systems = [
        generated_system(seed, n_range=(3, 6), util_frac_range=(0.1, 0.9))
        for seed in range(6500)
    ]
    systems += [small_integer_system(seed, n_range=(2, 5)) for seed in range(3500)]
    violations = dominance_audit(
        systems, tests=("bf", "exact", "t44", "t45", "t46", "t47")
    )
    elapsed = time.perf_counter() - started
    for v in violations[:5]:
        print(v.describe())
    _report(
        3,
        not violations,
        f"{len(violations)} violations over {len(systems)} systems "
        f"(exact on the small-hyperperiod subset) in {elapsed:.0f}s",
    )


def test_criterion_4_counterexample_reproduction():
    """DM miss at t=1, lower-bound conditions, and the exact speedup value."""
    failures = []
    for m in (2, 4, 8):
        for eps in (Rat(1, 3), Rat(1, 4)):
            sys = counterexample_taskset(m, eps)
            trace = simulate(sys, SynchronousPeriodic(horizon=Rat(1)), speed=1)
            tail_misses = [
                e for e in trace.misses if e.task == 2 * m and e.time == 1
            ]
            if trace.verdict != MISS_FOUND or not tail_misses:
                failures.append(f"M={m} eps={eps}: no miss of the tail task at t=1")
            report = verify_lower_bound_construction(m, eps)
            if not report.all_pass:
                failures.append(f"M={m} eps={eps}: lower-bound conditions failed")
            if report.speed != (1 + eps) / 3 + (1 + eps) / (3 * m):
                failures.append(f"M={m} eps={eps}: wrong verification speed")
            expected = Rat(3 * m) / ((1 + eps) * (m + 1))
            if implied_speedup_lower_bound(m, eps) != expected:
                failures.append(f"M={m} eps={eps}: speedup bound mismatch")
    _report(4, not failures, "; ".join(failures) or "all M/eps combinations exact")


def test_criterion_5_speedup_disjunction():
    """Every DM-rejected task over 10,000 systems satisfies the disjunction."""
    started = time.perf_counter()
    rejected = violations = 0
    for seed in range(10000):
        sys = generated_system(
            seed + 10**6, n_range=(3, 6), util_frac_range=(0.2, 1.05)
        )
        for k in range(1, len(sys) + 1):
            if analysis.test_approx_47(sys, k).schedulable:
                continue
            rejected += 1
            if not analysis.check_speedup_disjunction(sys, k).holds:
                violations += 1
    elapsed = time.perf_counter() - started
    _report(
        5,
        violations == 0 and rejected > 0,
        f"{violations} failures over {rejected} rejected tasks "
        f"in 10,000 systems ({elapsed:.0f}s)",
    )


def test_criterion_6_falsification_soundness():
    """No test accepts a system whose synchronous simulation misses."""
    started = time.perf_counter()
    missed = violations = 0
    grain_cap = 10**6
    for seed in range(5000):
        sys = small_integer_system(
            seed + 5 * 10**6, n_range=(2, 5), util_frac_range=(0.3, 1.2)
        )
        hp = hyperperiod_of(sys.tasks)
        horizon = 3 * hp + max(t.deadline for t in sys.tasks) + 1
        trace = simulate(sys, SynchronousPeriodic(horizon=horizon), speed=1,
                         stop_on_first_miss=True, scale_limit=grain_cap)
        if trace.verdict != MISS_FOUND:
            continue
        missed += 1
        for test_id in ("bf", "exact", "t44", "t45", "t46", "t47"):
            try:
                verdict = analysis.run_test(sys, test_id, stop_on_failure=True)
            except HyperperiodOverflow:
                continue
            if verdict.schedulable:
                violations += 1
                print(f"UNSOUND: seed {seed} test {test_id}")
    elapsed = time.perf_counter() - started
    _report(
        6,
        violations == 0 and missed > 0,
        f"{violations} unsound accepts over {missed} missing systems "
        f"of 5,000 ({elapsed:.0f}s)",
    )


def test_criterion_7_acceptance_ratio_trends():
    """Desk-scale sweep (DM, M=8, N=40, D/T in [0.8,2], T in [1,100])."""
    config = SweepConfig(
        m_values=(8,),
        n_rule=40,
        sets_per_point=100,
        policy=PriorityPolicy.DM,
        tests=("bf", "t44", "t45", "t46", "t47"),
        period_lo=1,
        period_hi=100,
        dratio_lo=Rat(4, 5),
        dratio_hi=2,
        seed_base=20260810,
    )
    result = run_sweep(config)
    problems = []
    if result.violations:
        problems.append(f"{len(result.violations)} dominance violations")
    for point in result.points:
        if not (
            point.ratio("bf") <= point.ratio("t47")
            <= point.ratio("t46") == point.ratio("t45") <= point.ratio("t44")
        ):
            problems.append(f"ratio order broken at u={point.u_sum}")
    top = result.points[-1]
    assert top.utilization_fraction == 1
    if not top.ratio("t44") < Rat(5, 100):
        problems.append(f"t44 at 100% utilization accepts {top.ratio('t44')}")
    if result.wall_time >= 600:
        problems.append(f"sweep took {result.wall_time:.0f}s (limit 600)")
    _report(
        7,
        not problems,
        "; ".join(problems)
        or f"20 points x 100 sets ordered correctly in {result.wall_time:.0f}s",
    )


def _brute_force_t44(sys, k, ell_max=32, grid_points=10**4) -> bool:
    """Independent rho search: a uniform 10^4-point grid instead of candidates."""
    ctx = analysis._PrefixContext(sys, k)

    def grid(lo):
        span = 1 - lo
        return (lo + span * Rat(j, grid_points - 1) for j in range(grid_points))

    ells = (1,) if ctx.only_ell_one else range(1, ell_max + 1)
    for ell in ells:
        if not any(ctx.cond_linear(ell, rho) for rho in grid(ctx.rho_min(ell))):
            return False
    if ctx.only_ell_one:
        return True
    util_all = ctx.su_hp + ctx.task.utilization
    return any(
        util_all <= ctx.mu(rho) and ctx.cond_linear(ell_max + 1, rho)
        for rho in grid(ctx.task.density)
    )


def test_criterion_8_rho_search_exactness():
    """Candidate-set verdicts equal 10^4-point grid verdicts on 500 systems."""
    started = time.perf_counter()
    mismatches = checked = 0
    for seed in range(500):
        if seed % 2:
            sys = small_integer_system(seed + 8 * 10**6, n_range=(2, 8))
        else:
            sys = generated_system(
                seed + 8 * 10**6, n_range=(2, 8), m_choices=(2, 4),
                util_frac_range=(0.1, 0.6),
            )
        if len(sys) > 8:
            continue
        for k in range(1, len(sys) + 1):
            fast = analysis.test_approx_44(sys, k).schedulable
            slow = _brute_force_t44(sys, k)
            checked += 1
            if fast != slow:
                mismatches += 1
                print(f"MISMATCH seed {seed} k {k}: candidates={fast} grid={slow}")
    elapsed = time.perf_counter() - started
    _report(
        8,
        mismatches == 0,
        f"{mismatches} mismatches over {checked} task verdicts ({elapsed:.0f}s)",
    )
