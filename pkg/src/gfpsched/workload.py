"""Demand and workload curves plus their linear upper bounds.

For a task with parameters (C, D, T):

    dbf(t)   = max{0, (floor((t - D)/T) + 1) * C}            demand in windows of length t
    work(t)  = floor(t/T)*C + min{C, t - floor(t/T)*T}        max sequential execution of
                                                              jobs released in [a, a+t)
    work(t)  = NEG_INFINITY for t < 0

work() is piecewise linear: slope 1 on [lT, lT + C], flat at (l+1)C on
[lT + C, (l+1)T].  Carry-in workload of a higher-priority task over an
analysis window of length Delta is bounded two ways:

    heavy bound:  work(Delta + D)
    light bound   (requires U <= rho <= 1):
        Delta                                        if 0 < Delta <= C
        max{work(Delta),
            (p2+1)C + max{0, C - rho*(T - q2)}}      if Delta > C
        with p2 = ceil((Delta - C)/T) - 1,  q2 = Delta - C - p2*T

The light bound pushes each period's workload to the end of the period with
slope rho.  Linear over-approximations used by the closed-form tests:

    work(Delta)        <= C - C*U + U*Delta
    heavy bound(Delta) <= C + U*D - C*U + U*Delta
    light bound(Delta) <= C - C*U + U*Delta

One-shot convention (T infinite): work(t) = min{C, max{0, t}},
dbf(t) = C for t >= D else 0, U = 0; the light bound degenerates to
min{C, Delta}.

load(k) is the maximum over window lengths t of the summed dbf of the k
highest-priority tasks divided by t.  Its exact value is attained either at
a dbf step point D_i + m*T_i within one hyperperiod past max D_i, or in the
t -> infinity limit sum(U_i).
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable, Iterator, Sequence

from .errors import HyperperiodOverflow, PreconditionError
from .model import SporadicTask, TaskSystem, hyperperiod_of
from .rationals import NEG_INFINITY, Rat, denominator_lcm, is_infinite

DEFAULT_LCM_BOUND = 10**6      # hyperperiod cap, in integer time grains
DEFAULT_STEP_BUDGET = 200_000  # dbf step points examined before failing loudly


def dbf(task: SporadicTask, t) -> object:
    """Demand bound function; total for t >= 0."""
    if t < 0:
        raise ValueError(f"dbf requires t >= 0, got {t}")
    if is_infinite(task.period):
        return task.wcet if t >= task.deadline else Rat(0)
    jobs = math.floor((t - task.deadline) / task.period) + 1
    if jobs <= 0:
        return Rat(0)
    return jobs * task.wcet


def work(task: SporadicTask, t) -> object:
    """Workload function; NEG_INFINITY for t < 0."""
    if t < 0:
        return NEG_INFINITY
    if is_infinite(task.period):
        return min(task.wcet, Rat(0) + t)
    periods = math.floor(t / task.period)
    rest = t - periods * task.period
    return periods * task.wcet + min(task.wcet, rest)


def omega_heavy(task: SporadicTask, delta) -> object:
    """Carry-in workload bound with no utilization assumption: work(Delta + D)."""
    if delta < 0:
        raise ValueError(f"omega_heavy requires Delta >= 0, got {delta}")
    return work(task, delta + task.deadline)


def _light_push_value(task: SporadicTask, delta, rho):
    """The pushed-forward expression (p2+1)*C + max{0, C - rho*(T - q2)}.

    Only meaningful for Delta > C and a finite period.
    """
    c = task.wcet
    t_i = task.period
    p2 = math.ceil((delta - c) / t_i) - 1
    q2 = delta - c - p2 * t_i
    return (p2 + 1) * c + max(Rat(0), c - rho * (t_i - q2))


def omega_light(task: SporadicTask, delta, rho) -> object:
    """Carry-in workload bound for a task with U <= rho <= 1.

    The pushed-forward expression alone can exceed the arrival-window bound
    work(Delta + D) when D < T (its implicit carry-in window is not limited
    by the deadline), so the value is capped at omega_heavy: both bound the
    same executed workload, and the cap keeps the chain
    work <= light <= heavy valid for every parameter combination.

    Delta = 0 returns 0 (continuous extension; analysis paths always use
    Delta >= D_k > 0, the extension only serves curve dumps).
    """
    util = task.utilization
    if rho < util:
        raise PreconditionError(
            f"light bound needs rho >= U, got rho={rho} U={util} (task {task.id})"
        )
    if rho > 1:
        raise PreconditionError(f"light bound needs rho <= 1, got {rho}")
    if delta < 0:
        raise ValueError(f"omega_light requires Delta >= 0, got {delta}")
    if delta == 0:
        return Rat(0)
    c = task.wcet
    if delta <= c:
        return Rat(0) + delta  # never above the cap: work(Delta + D) >= C >= Delta
    if is_infinite(task.period):
        return c
    uncapped = max(work(task, delta), _light_push_value(task, delta, rho))
    return min(uncapped, omega_heavy(task, delta))


def omega_diff(task: SporadicTask, delta, rho) -> object:
    """Carry-in surplus over the no-carry-in workload: omega - work."""
    if not 0 < rho <= 1:
        raise PreconditionError(f"omega_diff requires 0 < rho <= 1, got {rho}")
    if task.utilization > rho:
        return omega_heavy(task, delta) - work(task, delta)
    return omega_light(task, delta, rho) - work(task, delta)


def linear_work_bound(task: SporadicTask, delta) -> object:
    u = task.utilization
    return task.wcet - task.wcet * u + u * delta


def linear_heavy_bound(task: SporadicTask, delta) -> object:
    u = task.utilization
    return task.wcet + u * task.deadline - task.wcet * u + u * delta


# --- breakpoints -------------------------------------------------------------


def _strided_points(base, stride, lo, hi) -> Iterator:
    """Points base + j*stride for integer j >= 0 falling inside [lo, hi]."""
    j0 = max(0, math.ceil((lo - base) / stride))
    j1 = math.floor((hi - base) / stride)
    for j in range(j0, j1 + 1):
        yield base + j * stride


def work_breakpoints(task: SporadicTask, lo, hi) -> Iterator:
    """Slope changes of work() inside [lo, hi]."""
    if is_infinite(task.period):
        if lo <= task.wcet <= hi:
            yield task.wcet
        return
    for base in (Rat(0), task.wcet):
        yield from _strided_points(base, task.period, lo, hi)


def omega_heavy_breakpoints(task: SporadicTask, lo, hi) -> Iterator:
    """Slope changes of work(Delta + D) inside [lo, hi]."""
    if is_infinite(task.period):
        point = task.wcet - task.deadline
        if lo <= point <= hi:
            yield point
        return
    for base in (-task.deadline, task.wcet - task.deadline):
        yield from _strided_points(base, task.period, lo, hi)


def omega_light_breakpoints(task: SporadicTask, rho, lo, hi) -> Iterator:
    """Slope changes of the pushed-forward branch of the light bound.

    The light bound also inherits slope changes from work() (it is a
    pointwise max); collect those with work_breakpoints separately.
    """
    c = task.wcet
    if is_infinite(task.period):
        if lo <= c <= hi:
            yield c
        return
    t_i = task.period
    yield from _strided_points(c, t_i, lo, hi)
    kink = t_i - c / rho
    if kink > 0:
        yield from _strided_points(c + kink, t_i, lo, hi)


def light_cap_crossings(task: SporadicTask, rho, points: Sequence) -> list:
    """Interior points where the light bound switches between its pieces.

    ``points`` must contain every slope change of work(), the pushed-forward
    expression, and omega_heavy() for this task, in ascending order.  Between
    two consecutive such points all three pieces are affine, so the light
    bound (min of the heavy cap and max of the other two) can switch at most
    where push = work or push = cap; those crossings are returned.  Needed by
    any scan that requires the light bound to be affine between its points.
    """
    if is_infinite(task.period):
        return []
    out = []
    c = task.wcet
    for x1, x2 in zip(points, points[1:]):
        if x1 <= c or x2 <= x1:
            continue
        push1 = _light_push_value(task, x1, rho)
        push2 = _light_push_value(task, x2, rho)
        for other in (work, omega_heavy):
            d1 = push1 - other(task, x1)
            d2 = push2 - other(task, x2)
            if (d1 < 0 < d2) or (d2 < 0 < d1):
                out.append(x1 + (x2 - x1) * d1 / (d1 - d2))
    return out


@dataclass(frozen=True)
class PiecewiseLinearCurve:
    """Non-decreasing piecewise-linear curve as (delta, value, right_slope) rows."""

    points: tuple[tuple[object, object, object], ...]

    def __post_init__(self):
        deltas = [p[0] for p in self.points]
        values = [p[1] for p in self.points]
        assert all(a < b for a, b in zip(deltas, deltas[1:])), "breakpoints must ascend"
        assert all(a <= b for a, b in zip(values, values[1:])), "curve must be non-decreasing"

    @classmethod
    def sample(cls, fn: Callable, breakpoints: Sequence) -> "PiecewiseLinearCurve":
        deltas = sorted(set(breakpoints))
        values = [fn(d) for d in deltas]
        rows = []
        for i, (d, v) in enumerate(zip(deltas, values)):
            if i + 1 < len(deltas):
                slope = (values[i + 1] - v) / (deltas[i + 1] - d)
            else:
                slope = Rat(0)
            rows.append((d, v, slope))
        return cls(points=tuple(rows))

    def value_at(self, delta):
        points = self.points
        if delta < points[0][0]:
            raise ValueError(f"{delta} precedes the first breakpoint")
        lo, hi = 0, len(points) - 1
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if points[mid][0] <= delta:
                lo = mid
            else:
                hi = mid - 1
        d, v, slope = points[lo]
        return v + slope * (delta - d)


# --- load --------------------------------------------------------------------


def _dbf_step_stream(tasks: Sequence[SporadicTask]) -> Iterator[tuple[object, object]]:
    """Merged ascending stream of (step point, dbf increment at that point)."""

    def steps(task: SporadicTask) -> Iterator[tuple[object, object]]:
        t = task.deadline
        if is_infinite(task.period):
            yield (t, task.wcet)
            return
        while True:
            yield (t, task.wcet)
            t = t + task.period

    return heapq.merge(*(steps(t) for t in tasks), key=lambda pair: pair[0])


def _window_end(tasks: Sequence[SporadicTask], lcm_bound: int):
    """max D_i + hyperperiod, or None when the hyperperiod exceeds the grain bound."""
    hp = hyperperiod_of(tasks)
    grain = denominator_lcm(
        [t.wcet for t in tasks]
        + [t.deadline for t in tasks]
        + [t.period for t in tasks if not is_infinite(t.period)]
    )
    if hp.numerator * grain > lcm_bound * hp.denominator:
        return None
    return max(t.deadline for t in tasks) + hp


def _scan_load(
    tasks: Sequence[SporadicTask],
    threshold,
    lcm_bound: int,
    step_budget: int,
):
    """Shared enumerator behind load() and the threshold decision.

    threshold=None: return the exact load value or raise HyperperiodOverflow.
    threshold=Rat:  return True (load <= threshold), False, or None when the
                    budget runs out before either certificate fires.

    Early certificate: dbf(t) <= U*t + max(0, C - U*D) per task, hence for
    every t' > t the ratio is at most sum(U) + S/t'; once that tail bound
    drops to the current answer the scan is complete.
    """
    u_sum = sum((t.utilization for t in tasks), Rat(0))
    slack_mass = sum(
        (max(Rat(0), t.wcet - t.utilization * t.deadline) for t in tasks), Rat(0)
    )
    deciding = threshold is not None
    if deciding and u_sum > threshold:
        return False

    end = _window_end(tasks, lcm_bound)
    best = u_sum
    stream = _dbf_step_stream(tasks)
    demand = Rat(0)
    examined = 0
    pending = next(stream, None)
    while pending is not None:
        point = pending[0]
        if end is not None and point > end:
            return True if deciding else best
        while pending is not None and pending[0] == point:
            demand += pending[1]
            pending = next(stream, None)
        examined += 1
        ratio = demand / point
        if deciding:
            if ratio > threshold:
                return False
            if slack_mass <= (threshold - u_sum) * point:
                return True
        else:
            if ratio > best:
                best = ratio
            if slack_mass <= (best - u_sum) * point:
                return best
        if examined >= step_budget:
            if deciding:
                return None
            raise HyperperiodOverflow(
                f"load scan exceeded {step_budget} step points "
                f"(hyperperiod beyond {lcm_bound} grains)"
            )
    return True if deciding else best


def load(
    sys: TaskSystem,
    k: int,
    lcm_bound: int = DEFAULT_LCM_BOUND,
    step_budget: int = DEFAULT_STEP_BUDGET,
):
    """Exact load of the k highest-priority tasks.

    Raises HyperperiodOverflow when the candidate window cannot be exhausted
    within the configured bounds and no early certificate applies.
    """
    return _scan_load(sys.prefix(k), None, lcm_bound, step_budget)


def load_at_most(
    tasks: Sequence[SporadicTask],
    threshold,
    lcm_bound: int = DEFAULT_LCM_BOUND,
    step_budget: int = DEFAULT_STEP_BUDGET,
):
    """Decide load(tasks) <= threshold exactly; None when unresolvable in budget."""
    return _scan_load(tasks, threshold, lcm_bound, step_budget)
