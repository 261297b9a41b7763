"""Schedulability test ladder for global fixed-priority scheduling on M processors.

Every test is sufficient-only and is applied task by task from the highest
priority down; a system passes a test when every task does.  All inequalities
are evaluated in exact rational arithmetic.

The ladder, from most precise to cheapest:

* ``test_exact_pushforward`` -- window-extension analysis on the exact
  workload curves.  Task k (prefix length k) is schedulable if for every
  job count l in N there is a density threshold rho in [l*C_k/D'_k, 1]
  such that for all Delta >= D'_k = (l-1)*T_k + D_k

      l*C_k + sum_{i in carry} (omega_i(Delta, rho) - work_i(Delta))
            + sum_{i<k} work_i(Delta)  <=  Delta * mu_k,

  with mu_k = M - (M-1)*rho and carry = the ceil(mu_k)-1 higher-priority
  tasks with the largest curve surplus.  Only l = 1 matters when D_k <= T_k.
* ``test_approx_44`` -- same skeleton with every curve replaced by its
  linear bound; the carry surplus collapses to U_i*D_i for tasks with
  U_i > rho and vanishes for the rest.
* ``test_approx_45`` / ``test_approx_46`` -- rho pinned to U_delta_max(k);
  the for-all-l quantifier resolves in closed form through the sign of
  b*U_k - sum_{i<k}(C_i - C_i*U_i)/T_k with b = (D_k - T_k)/T_k
  (the quotient form of the left-hand side is monotone in l, so only
  l = 1 and the l -> infinity limit can be binding).  The two tests are
  equivalent by construction.
* ``test_approx_47`` -- single linear-time inequality
  delta_k + sum_{i<k}((C_i - C_i*U_i)/D_k + U_i) <= M - (M-1)*U_delta_max(k).
* ``test_bf2007`` -- load-based baseline for global DM:
  2*load(k) + (ceil(mu_k)-1)*delta_max(k) <= mu_k with
  mu_k = M - (M-1)*delta_max(k).

Candidate rho values: searching all of [rho_min, 1] is unnecessary because
the left-hand side of the linearized condition is constant between
consecutive points where either some U_i is crossed or mu_k passes an
integer, while the right-hand side shrinks as rho grows; so checking
rho_min, every higher-priority U_i in range and every rho with integer
mu_k is exhaustive.
"""

from __future__ import annotations

import enum
import heapq
import math
import time as _time
from bisect import bisect_left
from dataclasses import dataclass
from typing import Callable, Sequence

from .errors import PolicyMismatch, PreconditionError, UtilizationOverload
from .model import SporadicTask, TaskSystem, derived_stats, hyperperiod_of
from .rationals import Rat, denominator_lcm, is_infinite
from .workload import (
    DEFAULT_LCM_BOUND,
    DEFAULT_STEP_BUDGET,
    light_cap_crossings,
    load_at_most,
    load,
    omega_diff,
    omega_heavy_breakpoints,
    omega_light_breakpoints,
    work,
    work_breakpoints,
)
from .errors import HyperperiodOverflow

DEFAULT_ELL_MAX = 32
DEFAULT_POINT_BUDGET = 400_000

FLAG_ELL_TAIL = "ell_tail"
FLAG_ELL_TAIL_UNRESOLVED = "ELL_TAIL_UNRESOLVED"
FLAG_LOAD_UNRESOLVED = "LOAD_UNRESOLVED"
FLAG_PERIODICITY_GUARD = "PERIODICITY_GUARD"


class Verdict(enum.Enum):
    SCHEDULABLE = "schedulable"
    NOT_PROVEN = "not_proven"


@dataclass(frozen=True)
class TaskVerdict:
    task_id: int
    k: int
    verdict: Verdict
    witness: tuple[tuple[int, object], ...] = ()  # (l, rho) pairs for passes
    violated_delta: object | None = None          # exact-test failure breakpoint
    flags: tuple[str, ...] = ()

    @property
    def schedulable(self) -> bool:
        return self.verdict is Verdict.SCHEDULABLE


@dataclass(frozen=True)
class TestVerdict:
    test_id: str
    per_task: tuple[TaskVerdict, ...]
    overall: Verdict
    wall_time: float

    def __post_init__(self):
        all_ok = all(v.schedulable for v in self.per_task)
        assert (self.overall is Verdict.SCHEDULABLE) == all_ok

    @property
    def schedulable(self) -> bool:
        return self.overall is Verdict.SCHEDULABLE


@dataclass(frozen=True)
class RhoCandidateSet:
    """Sorted rho candidates in [rho_min, 1] for one (task, l) pair.

    Contains rho_min = l*C_k/((l-1)*T_k + D_k), every higher-priority U_i in
    range, and every rho at which mu_k = M - (M-1)*rho is an integer.
    """

    rho_min: object
    values: tuple[object, ...]

    @classmethod
    def build(cls, sys: TaskSystem, k: int, ell: int) -> "RhoCandidateSet":
        ctx = _PrefixContext(sys, k)
        rho_min = ctx.rho_min(ell)
        return cls(rho_min=rho_min, values=ctx.candidates(ell))


class _PrefixContext:
    """Cached per-(system, k) quantities shared by the test implementations."""

    def __init__(self, sys: TaskSystem, k: int):
        sys.check_prefix(k)
        self.sys = sys
        self.k = k
        self.m_procs = sys.processors
        self.task = sys.tasks[k - 1]
        self.hp = sys.tasks[: k - 1]
        self.su_hp = sum((t.utilization for t in self.hp), Rat(0))
        self.scc = sum(
            (t.wcet - t.wcet * t.utilization for t in self.hp), Rat(0)
        )
        self.u_delta_max = max(
            [t.utilization for t in self.hp] + [self.task.density]
        )
        self.delta_max = max([t.density for t in self.hp] + [self.task.density])
        # higher-priority tasks by descending U_i*D_i (ties by id), with U_i
        self._ud_desc = sorted(
            ((t.utilization * t.deadline, t.utilization, t.id) for t in self.hp),
            key=lambda row: (-row[0], row[2]),
        )
        # static rho candidates (everything except the per-l rho_min)
        m = self.m_procs
        static = {t.utilization for t in self.hp if t.utilization > 0}
        static.update(Rat(m - j, m - 1) for j in range(1, m + 1))
        self._static_sorted = sorted(v for v in static if 0 < v <= 1)
        self._carry_cache: dict = {}

    @property
    def only_ell_one(self) -> bool:
        return is_infinite(self.task.period) or self.task.deadline <= self.task.period

    def d_prime(self, ell: int):
        if ell == 1:
            return self.task.deadline
        return (ell - 1) * self.task.period + self.task.deadline

    def rho_min(self, ell: int):
        return ell * self.task.wcet / self.d_prime(ell)

    def candidates(self, ell: int) -> tuple[object, ...]:
        rho_min = self.rho_min(ell)
        idx = bisect_left(self._static_sorted, rho_min)
        out = [rho_min]
        for v in self._static_sorted[idx:]:
            if v != rho_min:
                out.append(v)
        return tuple(out)

    def mu(self, rho):
        return self.m_procs - (self.m_procs - 1) * rho

    def carry_limit(self, rho) -> int:
        return math.ceil(self.mu(rho)) - 1

    def carry_sum_linear(self, rho):
        """Sum of the ceil(mu)-1 largest U_i*D_i among tasks with U_i > rho."""
        cached = self._carry_cache.get(rho)
        if cached is not None:
            return cached
        m = self.carry_limit(rho)
        total = Rat(0)
        taken = 0
        for ud, util, _ in self._ud_desc:
            if taken == m:
                break
            if util > rho:
                total += ud
                taken += 1
        self._carry_cache[rho] = total
        return total

    def cond_linear(self, ell: int, rho) -> bool:
        """The linearized condition at one (l, rho): true means pass."""
        mu = self.mu(rho)
        lhs = ell * self.task.wcet + self.carry_sum_linear(rho) + self.scc
        return lhs <= self.d_prime(ell) * (mu - self.su_hp)


def _linear_tail_candidates(ctx: _PrefixContext, ell: int) -> tuple[object, ...]:
    """rho candidates usable for every l > ell_max: those >= delta_k.

    delta_k >= l*C_k/((l-1)*T_k + D_k) for all l, so any such rho stays in
    range for the entire tail.
    """
    delta_k = ctx.task.density
    idx = bisect_left(ctx._static_sorted, delta_k)
    out = [delta_k]
    for v in ctx._static_sorted[idx:]:
        if v != delta_k:
            out.append(v)
    return tuple(out)


def _linear_tail_pass(ctx: _PrefixContext, ell_max: int):
    """Cover all l > ell_max for the linearized condition.

    At fixed rho the left-hand side is (l*C_k + K)/((l-1)*T_k + D_k) + su,
    monotone in l, so its supremum over the tail is attained either at
    l = ell_max+1 or in the l -> infinity limit sum_{i<=k} U_i.
    Returns the passing rho, or None.
    """
    util_all = ctx.su_hp + ctx.task.utilization
    for rho in _linear_tail_candidates(ctx, ell_max + 1):
        if util_all <= ctx.mu(rho) and ctx.cond_linear(ell_max + 1, rho):
            return rho
    return None


# --- the tests ---------------------------------------------------------------


def test_approx_47(sys: TaskSystem, k: int) -> TaskVerdict:
    """Single closed-form inequality; linear time in k."""
    ctx = _PrefixContext(sys, k)
    dk = ctx.task.deadline
    lhs = ctx.task.density + ctx.scc / dk + ctx.su_hp
    rhs = ctx.mu(ctx.u_delta_max)
    ok = lhs <= rhs
    return TaskVerdict(
        task_id=ctx.task.id,
        k=k,
        verdict=Verdict.SCHEDULABLE if ok else Verdict.NOT_PROVEN,
        witness=((1, ctx.u_delta_max),) if ok else (),
    )


def _fixed_rho_worst_ell(ctx: _PrefixContext) -> tuple[bool, int | None]:
    """Condition with rho = U_delta_max(k), all l covered in closed form.

    Returns (pass, binding_ell) with binding_ell None for the l -> infinity
    branch.  For D_k <= T_k only l = 1 exists.
    """
    rhs = ctx.mu(ctx.u_delta_max)
    task = ctx.task
    ell1_lhs = (task.wcet + ctx.scc) / task.deadline + ctx.su_hp
    if ctx.only_ell_one:
        return ell1_lhs <= rhs, 1
    b = (task.deadline - task.period) / task.period
    derivative_sign = b * task.utilization - ctx.scc / task.period
    if derivative_sign > 0:
        return ctx.su_hp + task.utilization <= rhs, None
    return ell1_lhs <= rhs, 1


def test_approx_46(sys: TaskSystem, k: int) -> TaskVerdict:
    """Two-branch closed form selected by the sign of b*U_k - sum(C_i - C_i*U_i)/T_k."""
    ctx = _PrefixContext(sys, k)
    ok, binding = _fixed_rho_worst_ell(ctx)
    return TaskVerdict(
        task_id=ctx.task.id,
        k=k,
        verdict=Verdict.SCHEDULABLE if ok else Verdict.NOT_PROVEN,
        witness=((binding or 0, ctx.u_delta_max),) if ok else (),
    )


def test_approx_45(sys: TaskSystem, k: int) -> TaskVerdict:
    """All-l condition at rho = U_delta_max(k), resolved via the worst l.

    Verdict-equivalent to test_approx_46 on every input; kept as a separate
    surface because callers select tests by id.
    """
    verdict = test_approx_46(sys, k)
    return verdict


def test_approx_44(
    sys: TaskSystem,
    k: int,
    ell_max: int = DEFAULT_ELL_MAX,
) -> TaskVerdict:
    """Linear-bound test with per-l rho search over the candidate set."""
    ctx = _PrefixContext(sys, k)
    witnesses: list[tuple[int, object]] = []
    ells = (1,) if ctx.only_ell_one else range(1, ell_max + 1)
    for ell in ells:
        found = None
        for rho in ctx.candidates(ell):
            if ctx.cond_linear(ell, rho):
                found = rho
                break
        if found is None:
            return TaskVerdict(task_id=ctx.task.id, k=k, verdict=Verdict.NOT_PROVEN)
        witnesses.append((ell, found))
    flags: tuple[str, ...] = ()
    if not ctx.only_ell_one:
        tail_rho = _linear_tail_pass(ctx, ell_max)
        if tail_rho is None:
            return TaskVerdict(
                task_id=ctx.task.id,
                k=k,
                verdict=Verdict.NOT_PROVEN,
                flags=(FLAG_ELL_TAIL_UNRESOLVED,),
            )
        witnesses.append((ell_max + 1, tail_rho))
        flags = (FLAG_ELL_TAIL,)
    return TaskVerdict(
        task_id=ctx.task.id,
        k=k,
        verdict=Verdict.SCHEDULABLE,
        witness=tuple(witnesses),
        flags=flags,
    )


def _exact_delta_points(
    ctx: _PrefixContext, rho, lo, hi, point_budget: int
) -> list:
    points = {lo, hi}
    light_tasks = []
    for t in ctx.hp:
        points.update(work_breakpoints(t, lo, hi))
        points.update(omega_heavy_breakpoints(t, lo, hi))
        if t.utilization <= rho:
            points.update(omega_light_breakpoints(t, rho, lo, hi))
            light_tasks.append(t)
        if len(points) > point_budget:
            raise HyperperiodOverflow(
                f"exact test needs more than {point_budget} Delta breakpoints"
            )
    ordered = sorted(points)
    # capped light bounds switch pieces between curve breakpoints; those
    # crossings are kinks of the carry surplus and must be evaluated too
    extra: set = set()
    for t in light_tasks:
        extra.update(light_cap_crossings(t, rho, ordered))
    if extra:
        ordered = sorted(points | extra)
    if len(ordered) > point_budget:
        raise HyperperiodOverflow(
            f"exact test needs more than {point_budget} Delta breakpoints"
        )
    return ordered


def _exact_condition(
    ctx: _PrefixContext, ell: int, rho, hp_period, c_inf_max, point_budget: int
):
    """Check the exact condition for one (l, rho) over one window.

    Between consecutive evaluation points (curve breakpoints plus the light
    bound's cap crossings) every summand is affine, so the top-m carry
    selection is a max of affine sums and the left side is convex per
    interval; violations can then only appear at the evaluated points.
    The window [D'_k, max(D'_k, max one-shot C) + HP] covers all Delta by
    periodicity (valid because the caller enforces sum of hp U <= mu).
    Returns (ok, violated_delta).
    """
    lo = ctx.d_prime(ell)
    hi = max(lo, c_inf_max) + hp_period
    mu = ctx.mu(rho)
    m = ctx.carry_limit(rho)
    base = ell * ctx.task.wcet
    points = _exact_delta_points(ctx, rho, lo, hi, point_budget)
    for delta in points:
        total_work = Rat(0)
        diffs = []
        for t in ctx.hp:
            total_work += work(t, delta)
            diffs.append(omega_diff(t, delta, rho))
        carry = sum(heapq.nlargest(m, diffs), Rat(0)) if m > 0 else Rat(0)
        if base + carry + total_work > delta * mu:
            return False, delta
    return True, None


def test_exact_pushforward(
    sys: TaskSystem,
    k: int,
    ell_max: int = DEFAULT_ELL_MAX,
    lcm_bound: int = DEFAULT_LCM_BOUND,
    point_budget: int = DEFAULT_POINT_BUDGET,
) -> TaskVerdict:
    """Exact-curve window-extension test.

    Raises HyperperiodOverflow when the higher-priority hyperperiod exceeds
    ``lcm_bound`` grains or the breakpoint enumeration exceeds
    ``point_budget``; use the approximate tests in that case.
    """
    ctx = _PrefixContext(sys, k)
    hp_period = hyperperiod_of(ctx.hp)
    grain = denominator_lcm(
        [t.wcet for t in sys.prefix(k)]
        + [t.deadline for t in sys.prefix(k)]
        + [t.period for t in sys.prefix(k) if not is_infinite(t.period)]
    )
    if hp_period.numerator * grain > lcm_bound * hp_period.denominator:
        raise HyperperiodOverflow(
            f"higher-priority hyperperiod {hp_period} exceeds {lcm_bound} grains"
        )
    c_inf_max = max(
        [t.wcet for t in ctx.hp if is_infinite(t.period)], default=Rat(0)
    )

    witnesses: list[tuple[int, object]] = []
    first_violation = None
    guard_blocked = False
    ells = (1,) if ctx.only_ell_one else range(1, ell_max + 1)
    for ell in ells:
        found = None
        any_guard_ok = False
        for rho in ctx.candidates(ell):
            if ctx.su_hp > ctx.mu(rho):
                continue  # periodicity window argument requires sum U <= mu
            any_guard_ok = True
            ok, delta = _exact_condition(
                ctx, ell, rho, hp_period, c_inf_max, point_budget
            )
            if ok:
                found = rho
                break
            if first_violation is None:
                first_violation = delta
        if found is None:
            guard_blocked = not any_guard_ok
            return TaskVerdict(
                task_id=ctx.task.id,
                k=k,
                verdict=Verdict.NOT_PROVEN,
                violated_delta=first_violation,
                flags=(FLAG_PERIODICITY_GUARD,) if guard_blocked else (),
            )
        witnesses.append((ell, found))
    flags: tuple[str, ...] = ()
    if not ctx.only_ell_one:
        # Tail l > ell_max: the linearized condition over-approximates the
        # exact one, so covering the tail with it is sound.
        tail_rho = _linear_tail_pass(ctx, ell_max)
        if tail_rho is None:
            return TaskVerdict(
                task_id=ctx.task.id,
                k=k,
                verdict=Verdict.NOT_PROVEN,
                flags=(FLAG_ELL_TAIL_UNRESOLVED,),
            )
        witnesses.append((ell_max + 1, tail_rho))
        flags = (FLAG_ELL_TAIL,)
    return TaskVerdict(
        task_id=ctx.task.id,
        k=k,
        verdict=Verdict.SCHEDULABLE,
        witness=tuple(witnesses),
        flags=flags,
    )


def test_bf2007(
    sys: TaskSystem,
    k: int,
    lcm_bound: int = DEFAULT_LCM_BOUND,
    step_budget: int = DEFAULT_STEP_BUDGET,
) -> TaskVerdict:
    """Load-based baseline, stated for global DM order only.

    The inequality is decided exactly through a threshold form of the load
    scan; an unresolvable scan yields NOT_PROVEN flagged LOAD_UNRESOLVED.
    """
    if not sys.is_dm_ordered():
        raise PolicyMismatch("the load-based baseline requires DM (ascending D) order")
    ctx = _PrefixContext(sys, k)
    mu = ctx.mu(ctx.delta_max)
    threshold = (mu - (math.ceil(mu) - 1) * ctx.delta_max) / 2
    task_id = ctx.task.id
    if threshold < 0:
        return TaskVerdict(task_id=task_id, k=k, verdict=Verdict.NOT_PROVEN)
    outcome = load_at_most(sys.prefix(k), threshold, lcm_bound, step_budget)
    if outcome is None:
        return TaskVerdict(
            task_id=task_id,
            k=k,
            verdict=Verdict.NOT_PROVEN,
            flags=(FLAG_LOAD_UNRESOLVED,),
        )
    return TaskVerdict(
        task_id=task_id,
        k=k,
        verdict=Verdict.SCHEDULABLE if outcome else Verdict.NOT_PROVEN,
    )


# --- whole-system drivers ----------------------------------------------------

TEST_IDS = ("bf", "exact", "t44", "t45", "t46", "t47")


def _dispatch(test_id: str) -> Callable[..., TaskVerdict]:
    table = {
        "bf": test_bf2007,
        "exact": test_exact_pushforward,
        "t44": test_approx_44,
        "t45": test_approx_45,
        "t46": test_approx_46,
        "t47": test_approx_47,
    }
    try:
        return table[test_id]
    except KeyError:
        raise ValueError(f"unknown test id {test_id!r}; expected one of {TEST_IDS}")


def run_test(
    sys: TaskSystem,
    test_id: str,
    ell_max: int = DEFAULT_ELL_MAX,
    lcm_bound: int = DEFAULT_LCM_BOUND,
    step_budget: int = DEFAULT_STEP_BUDGET,
    point_budget: int = DEFAULT_POINT_BUDGET,
    stop_on_failure: bool = False,
) -> TestVerdict:
    """Apply one test to every task, highest priority first."""
    fn = _dispatch(test_id)
    kwargs = {}
    if test_id in ("t44", "exact"):
        kwargs["ell_max"] = ell_max
    if test_id == "exact":
        kwargs["lcm_bound"] = lcm_bound
        kwargs["point_budget"] = point_budget
    if test_id == "bf":
        kwargs["lcm_bound"] = lcm_bound
        kwargs["step_budget"] = step_budget
    started = _time.perf_counter()
    per_task: list[TaskVerdict] = []
    all_ok = True
    for k in range(1, len(sys) + 1):
        verdict = fn(sys, k, **kwargs)
        per_task.append(verdict)
        if not verdict.schedulable:
            all_ok = False
            if stop_on_failure:
                break
    overall = Verdict.SCHEDULABLE if all_ok and len(per_task) == len(sys) else Verdict.NOT_PROVEN
    return TestVerdict(
        test_id=test_id,
        per_task=tuple(per_task),
        overall=overall,
        wall_time=_time.perf_counter() - started,
    )


# --- necessary condition, response-time bound, speedup probe ------------------


@dataclass(frozen=True)
class SpeedBound:
    """Infeasibility speed: the set cannot be scheduled by ANY algorithm at
    any speed below ``value``.  ``partial`` marks a lower bound computed
    without the dbf term (hyperperiod out of reach)."""

    value: object
    partial: bool


def necessary_condition_speed(
    sys: TaskSystem,
    lcm_bound: int = DEFAULT_LCM_BOUND,
    step_budget: int = DEFAULT_STEP_BUDGET,
) -> SpeedBound:
    n = len(sys)
    stats = derived_stats(sys, n)
    base = max(stats.utilization_sum / sys.processors, stats.delta_max)
    try:
        dbf_term = load(sys, n, lcm_bound, step_budget) / sys.processors
    except HyperperiodOverflow:
        return SpeedBound(value=base, partial=True)
    return SpeedBound(value=max(base, dbf_term), partial=False)


def _bini_bound(wcet, hp_pairs: Sequence[tuple[object, object]]):
    """(C_k + sum C_i - sum U_i*C_i) / (1 - sum U_i) over (C_i, U_i) pairs."""
    su = sum((u for _, u in hp_pairs), Rat(0))
    if su >= 1:
        raise UtilizationOverload(f"higher-priority utilization {su} >= 1")
    num = wcet + sum((c for c, _ in hp_pairs), Rat(0)) - sum(
        (u * c for c, u in hp_pairs), Rat(0)
    )
    return num / (1 - su)


def bini_wcrt_bound(task: SporadicTask, higher_priority: Sequence[SporadicTask]):
    """Uniprocessor fixed-priority response-time bound.

    Valid for arbitrary deadlines whenever the higher-priority utilization
    is below 1; raises UtilizationOverload otherwise.
    """
    return _bini_bound(
        task.wcet, [(t.wcet, t.utilization) for t in higher_priority]
    )


@dataclass(frozen=True)
class SpeedupDisjunction:
    """Outcome of the three-way infeasibility probe for a DM-rejected task.

    When the linear-time test rejects task k under DM, at least one of the
    three quantities must exceed 1/(3 - 1/M); each compares against
    ``threshold`` below.  ``dbf_ratio`` is sum_{i<=k} C_i/(M*D_k), a valid
    stand-in for max_t sum dbf/(M t) under DM since dbf(tau_i, D_k) >= C_i.
    """

    k: int
    threshold: object
    dbf_ratio: object
    util_ratio: object
    density_max: object
    branches: tuple[str, ...]

    @property
    def holds(self) -> bool:
        return bool(self.branches)


def check_speedup_disjunction(sys: TaskSystem, k: int) -> SpeedupDisjunction:
    """Requires: DM order and test_approx_47 rejected task k."""
    if not sys.is_dm_ordered():
        raise PolicyMismatch("speedup disjunction is stated for DM order")
    if test_approx_47(sys, k).schedulable:
        raise PreconditionError(
            f"task k={k} passes the linear-time test; disjunction not applicable"
        )
    m = sys.processors
    prefix = sys.prefix(k)
    dk = prefix[-1].deadline
    threshold = Rat(m, 3 * m - 1)
    dbf_ratio = sum((t.wcet for t in prefix), Rat(0)) / (m * dk)
    util_ratio = sum((t.utilization for t in prefix), Rat(0)) / m
    density_max = max(t.density for t in prefix)
    branches = []
    if dbf_ratio > threshold:
        branches.append("dbf")
    if util_ratio > threshold:
        branches.append("utilization")
    if density_max > threshold:
        branches.append("density")
    return SpeedupDisjunction(
        k=k,
        threshold=threshold,
        dbf_ratio=dbf_ratio,
        util_ratio=util_ratio,
        density_max=density_max,
        branches=tuple(branches),
    )
