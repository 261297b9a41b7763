import math
import random

import pytest

from corpus import random_task, small_integer_system
from gfpsched.errors import HyperperiodOverflow, PreconditionError
from gfpsched.model import TaskSystem, hyperperiod_of, task
from gfpsched.rationals import INFINITE, NEG_INFINITY, Rat
from gfpsched import workload
from gfpsched.workload import (
    PiecewiseLinearCurve,
    dbf,
    light_cap_crossings,
    linear_heavy_bound,
    linear_work_bound,
    load,
    load_at_most,
    omega_diff,
    omega_heavy,
    omega_heavy_breakpoints,
    omega_light,
    omega_light_breakpoints,
    work,
    work_breakpoints,
)

TAU = task(0, 3, 45, 10)  # the running example task (C=3, D=45, T=10)


# --- frozen point values ------------------------------------------------------


def test_dbf_points():
    assert dbf(TAU, Rat(44)) == 0
    assert dbf(TAU, Rat(45)) == 3
    assert dbf(TAU, Rat(55)) == 6
    with pytest.raises(ValueError):
        dbf(TAU, Rat(-1))


def test_work_points():
    assert work(TAU, Rat(13)) == 6
    assert work(TAU, Rat(7)) == 3
    assert work(TAU, Rat(-1)) is NEG_INFINITY
    assert work(TAU, Rat(0)) == 0


def test_omega_heavy_points():
    assert omega_heavy(TAU, Rat(5)) == 15   # work(50)
    assert omega_heavy(TAU, Rat(0)) == 15   # work(45) = 12 + min(3, 5)
    for delta in (Rat(0), Rat(3), Rat(17, 2)):
        assert omega_heavy(TAU, delta) == work(TAU, delta + TAU.deadline)


def test_omega_light_points():
    assert omega_light(TAU, Rat(13), Rat(1, 2)) == 6
    assert omega_light(TAU, Rat(7), Rat(3, 10)) == Rat(21, 5)
    assert omega_light(TAU, Rat(2), Rat(9, 10)) == 2    # first branch
    assert omega_light(TAU, Rat(0), Rat(1, 2)) == 0     # continuity extension


def test_omega_light_capped_by_heavy_when_deadline_short():
    # with D < T the pushed-forward expression alone exceeds work(Delta + D):
    # for this task at Delta = 897/25 it evaluates to 107667147/7812500 while
    # the arrival-window bound is work(Delta + D) = 8568/625; the light bound
    # must return the smaller of the two
    tsk = task(0, Rat(2856, 625), Rat(16779, 2500), Rat(357, 25))
    rho = Rat(9751, 25000)
    delta = Rat(897, 25)
    value = omega_light(tsk, delta, rho)
    assert value == omega_heavy(tsk, delta) == Rat(8568, 625)
    assert work(tsk, delta) <= value


def test_omega_light_rejects_rho_below_utilization():
    with pytest.raises(PreconditionError):
        omega_light(TAU, Rat(5), Rat(1, 5))  # U = 3/10 > 1/5
    with pytest.raises(PreconditionError):
        omega_light(TAU, Rat(5), Rat(3, 2))


def test_omega_diff_points():
    # U = 3/10 > rho = 1/4: heavy branch; at Delta=5: 15 - 3 = 12
    assert omega_diff(TAU, Rat(5), Rat(1, 4)) == 12
    # light branch coincides with work on (0, C]
    assert omega_diff(TAU, Rat(2), Rat(1, 2)) == 0


def test_linear_bound_points():
    assert linear_work_bound(TAU, Rat(0)) == Rat(21, 10)
    assert linear_work_bound(TAU, Rat(60)) == Rat(201, 10)
    assert linear_work_bound(TAU, Rat(13)) == 6
    assert linear_heavy_bound(TAU, Rat(5)) == Rat(171, 10)
    # the heavy line is the work line shifted up by U*D, constant in Delta
    for delta in (Rat(0), Rat(9), Rat(31)):
        gap = linear_heavy_bound(TAU, delta) - linear_work_bound(TAU, delta)
        assert gap == TAU.utilization * TAU.deadline


def test_oneshot_conventions():
    one = task(1, 2, 5, INFINITE)
    assert work(one, Rat(1)) == 1
    assert work(one, Rat(7)) == 2
    assert dbf(one, Rat(4)) == 0
    assert dbf(one, Rat(5)) == 2
    assert one.utilization == 0
    assert omega_light(one, Rat(10), Rat(1, 2)) == 2
    assert omega_heavy(one, Rat(1)) == 2


# --- curve properties over random tasks ---------------------------------------


def _sample_deltas(rng, tsk, count):
    span = tsk.deadline + (Rat(0) if tsk.period is INFINITE else 4 * tsk.period) + 10
    out = []
    for _ in range(count):
        out.append(Rat(rng.randint(1, int(span * 100)), 100))
    return out


def test_curve_chain_and_linear_bounds():
    rng = random.Random(2024)
    for _ in range(150):
        tsk = random_task(rng)
        util = tsk.utilization
        rho = util + (1 - util) * Rat(rng.randint(0, 100), 100)
        for delta in _sample_deltas(rng, tsk, 12):
            w = work(tsk, delta)
            light = omega_light(tsk, delta, rho)
            heavy = omega_heavy(tsk, delta)
            assert w <= light <= heavy
            assert w <= linear_work_bound(tsk, delta)
            assert light <= linear_work_bound(tsk, delta)
            assert heavy <= linear_heavy_bound(tsk, delta)
            assert dbf(tsk, delta) <= w
            assert omega_diff(tsk, delta, rho) == light - w


def test_omega_light_monotone_in_delta_and_antitone_in_rho():
    rng = random.Random(99)
    for _ in range(60):
        tsk = random_task(rng)
        util = tsk.utilization
        rhos = sorted(
            util + (1 - util) * Rat(rng.randint(0, 100), 100) for _ in range(3)
        )
        deltas = sorted(_sample_deltas(rng, tsk, 8))
        for rho in rhos:
            values = [omega_light(tsk, d, rho) for d in deltas]
            assert all(a <= b for a, b in zip(values, values[1:]))
        for d in deltas:
            by_rho = [omega_light(tsk, d, rho) for rho in rhos]
            assert all(a >= b for a, b in zip(by_rho, by_rho[1:]))


def test_work_periodicity():
    rng = random.Random(5)
    for _ in range(40):
        tsk = random_task(rng)
        if tsk.period is INFINITE:
            continue
        hp = 3 * tsk.period
        for delta in _sample_deltas(rng, tsk, 5):
            assert work(tsk, delta + hp) == work(tsk, delta) + hp * tsk.utilization
            assert omega_heavy(tsk, delta + hp) == omega_heavy(tsk, delta) + hp * tsk.utilization


def test_breakpoints_cover_slope_changes():
    # between consecutive breakpoints (plus cap crossings) the curves are affine
    rng = random.Random(31)
    for _ in range(25):
        tsk = random_task(rng)
        util = tsk.utilization
        rho = util + (1 - util) * Rat(rng.randint(1, 99), 100)
        lo, hi = Rat(1, 7), Rat(60)
        base = sorted(
            set(work_breakpoints(tsk, lo, hi))
            | set(omega_light_breakpoints(tsk, rho, lo, hi))
            | set(omega_heavy_breakpoints(tsk, lo, hi))
            | {lo, hi}
        )
        points = sorted(set(base) | set(light_cap_crossings(tsk, rho, base)))
        for a, b in zip(points, points[1:]):
            mid1 = a + (b - a) / 3
            mid2 = a + 2 * (b - a) / 3
            for fn in (lambda d: work(tsk, d), lambda d: omega_light(tsk, d, rho)):
                va, v1, v2, vb = fn(a), fn(mid1), fn(mid2), fn(b)
                slope1 = (v1 - va) / (mid1 - a)
                slope2 = (v2 - v1) / (mid2 - mid1)
                slope3 = (vb - v2) / (b - mid2)
                assert slope1 == slope2 == slope3


def test_piecewise_linear_curve():
    curve = PiecewiseLinearCurve.sample(
        lambda d: work(TAU, d), sorted(work_breakpoints(TAU, Rat(0), Rat(40)))
    )
    for delta in (Rat(13), Rat(7), Rat(25), Rat(33, 2)):
        assert curve.value_at(delta) == work(TAU, delta)
    with pytest.raises(ValueError):
        curve.value_at(Rat(-1))


# --- load ----------------------------------------------------------------------


def test_load_examples():
    sys1 = TaskSystem(tasks=(task(0, 1, 2, 2),), processors=2)
    assert load(sys1, 1) == Rat(1, 2)
    sys2 = TaskSystem(tasks=(task(0, 1, 4, 2),), processors=2)
    assert load(sys2, 1) == Rat(1, 2)  # supremum is the t->infinity limit
    sys3 = TaskSystem(tasks=(task(0, 1, 2, 2), task(1, 1, 2, 2)), processors=2)
    assert load(sys3, 2) == 1


def _brute_force_load(tasks):
    """Independent oracle: all step points out to max D + 2 hyperperiods."""
    hp = hyperperiod_of(tasks)
    end = max(t.deadline for t in tasks) + 2 * hp + 1
    points = set()
    for t in tasks:
        if t.period is INFINITE:
            points.add(t.deadline)
            continue
        p = t.deadline
        while p <= end:
            points.add(p)
            p += t.period
    best = sum((t.utilization for t in tasks), Rat(0))
    for p in sorted(points):
        total = sum((dbf(t, p) for t in tasks), Rat(0))
        best = max(best, total / p)
    return best


def test_load_matches_brute_force():
    for seed in range(60):
        sys = small_integer_system(seed, n_range=(1, 4))
        k = len(sys)
        assert load(sys, k) == _brute_force_load(sys.prefix(k))


# a pair whose ratios never exceed the utilization limit (1) while the
# slack mass stays positive, so neither certificate can fire early
_HARD_PAIR = (
    task(0, 99, 1000, 100),  # D > T: contributes no slack mass
    task(1, 1, 99, 100),     # D < T: slack mass 1/100
)


def test_load_overflow_raises():
    sys = TaskSystem(tasks=_HARD_PAIR, processors=2)
    with pytest.raises(HyperperiodOverflow):
        load(sys, 2, lcm_bound=10, step_budget=20)
    # with the window affordable the same scan completes exactly
    assert load(sys, 2) == 1


def test_load_at_most_decides_exactly():
    tasks = (task(0, 1, 2, 2), task(1, 1, 2, 2))
    assert load_at_most(tasks, Rat(1)) is True
    assert load_at_most(tasks, Rat(99, 100)) is False
    # threshold above the limit certifies via the tail bound at once
    assert load_at_most(_HARD_PAIR, Rat(101, 100), lcm_bound=10, step_budget=3) is True
    # threshold exactly at the limit is unresolvable in a starved budget
    assert load_at_most(_HARD_PAIR, Rat(1), lcm_bound=10, step_budget=3) is None
    # but resolves exactly once the hyperperiod window is affordable
    assert load_at_most(_HARD_PAIR, Rat(1), lcm_bound=10**6) is True
