"""Discrete-event global fixed-priority preemptive simulator on M processors.

At every instant the M highest-priority ready jobs run; migration is free,
at most one job per task executes at a time, and pending jobs of one task
execute in release (FIFO) order, so the schedule is work-conserving.  All
times are rescaled to exact integers (lcm of denominators), and the event
loop advances release/finish/deadline boundaries only; there is no tick
stepping.

The simulator is a falsification oracle: a deadline miss under any concrete
legal arrival pattern refutes schedulability.  A miss-free horizon proves
nothing, because worst-case arrival patterns under global scheduling are
not efficiently constructible; in particular the synchronous pattern is not
known to be the worst case.

Also here: the 2M+1-task construction showing that global DM needs speedup
at least 3 - 3/(M+1), and the analytic verifier for its semi-partitioned
feasible schedule (one-shot task split across processors plus a
per-processor response-time-bound argument).
"""

from __future__ import annotations

import enum
import heapq
import random
from dataclasses import dataclass
from typing import Sequence

from .analysis import _bini_bound
from .errors import HorizonOverflow, InvalidTaskError, PreconditionError
from .model import SporadicTask, TaskSystem
from .rationals import INFINITE, Rat, denominator_lcm, is_infinite, rat


class EventKind(enum.Enum):
    RELEASE = "release"
    START = "start"
    PREEMPT = "preempt"
    FINISH = "finish"
    MISS = "miss"


@dataclass(frozen=True)
class SimEvent:
    time: object
    kind: EventKind
    task: int       # task id
    job: int        # per-task job index, 0-based in release order
    processor: int  # -1 when not bound to a processor


MISS_FOUND = "MISS_FOUND"
NO_MISS_WITHIN_HORIZON = "NO_MISS_WITHIN_HORIZON"


@dataclass(frozen=True)
class SimTrace:
    events: tuple[SimEvent, ...]
    verdict: str
    horizon: object
    speed: object

    @property
    def misses(self) -> tuple[SimEvent, ...]:
        return tuple(e for e in self.events if e.kind is EventKind.MISS)

    def executed_in_window(self, task_id: int, lo, hi):
        """Wall-clock execution time task ``task_id`` received in [lo, hi]."""
        total = Rat(0)
        open_since: dict[int, object] = {}  # job -> start time
        for ev in self.events:
            if ev.task != task_id:
                continue
            if ev.kind is EventKind.START:
                open_since[ev.job] = ev.time
            elif ev.kind in (EventKind.PREEMPT, EventKind.FINISH):
                begin = open_since.pop(ev.job, None)
                if begin is not None:
                    total += max(Rat(0), min(hi, ev.time) - max(lo, begin))
        for begin in open_since.values():  # still running at trace end
            total += max(Rat(0), min(hi, self.horizon) - max(lo, begin))
        return total


# --- arrival patterns ---------------------------------------------------------


@dataclass(frozen=True)
class SynchronousPeriodic:
    """All first jobs at time 0, later jobs as early as legally possible."""

    horizon: object


@dataclass(frozen=True)
class ExplicitReleases:
    """Caller-supplied release lists, keyed by task id."""

    releases: dict
    horizon: object


@dataclass(frozen=True)
class RandomSporadic:
    """Seeded sporadic releases: gap = T * (1 + u), u uniform on a snap grid."""

    horizon: object
    seed: int
    max_jitter: object = Rat(1, 2)
    snap_den: int = 1000


def _release_times(sys: TaskSystem, pattern) -> dict[int, list]:
    horizon = pattern.horizon
    out: dict[int, list] = {}
    if isinstance(pattern, SynchronousPeriodic):
        for t in sys.tasks:
            if is_infinite(t.period):
                out[t.id] = [Rat(0)] if horizon > 0 else []
                continue
            times = []
            r = Rat(0)
            while r < horizon:
                times.append(r)
                r = r + t.period
            out[t.id] = times
        return out
    if isinstance(pattern, ExplicitReleases):
        for t in sys.tasks:
            times = sorted(rat(x) if not hasattr(x, "denominator") else x
                           for x in pattern.releases.get(t.id, ()))
            for a, b in zip(times, times[1:]):
                gap = b - a
                if not is_infinite(t.period) and gap < t.period:
                    raise InvalidTaskError(
                        f"task {t.id}: releases {a},{b} violate min separation {t.period}"
                    )
                if is_infinite(t.period) and len(times) > 1:
                    raise InvalidTaskError(
                        f"task {t.id}: a one-shot task releases at most one job"
                    )
            out[t.id] = [x for x in times if x < horizon]
        return out
    if isinstance(pattern, RandomSporadic):
        rng = random.Random(pattern.seed)
        jitter_steps = int(pattern.max_jitter * pattern.snap_den)
        for t in sys.tasks:
            if is_infinite(t.period):
                out[t.id] = [Rat(0)]
                continue
            times = []
            r = Rat(0)
            while r < horizon:
                times.append(r)
                extra = Rat(rng.randint(0, jitter_steps), pattern.snap_den)
                r = r + t.period * (1 + extra)
            out[t.id] = times
        return out
    raise TypeError(f"unknown arrival pattern {pattern!r}")


# --- the event loop -----------------------------------------------------------


def simulate(
    sys: TaskSystem,
    pattern,
    speed=1,
    stop_on_first_miss: bool = False,
    scale_limit: int = 10**18,
) -> SimTrace:
    """Run global fixed-priority preemptive scheduling; returns the event trace.

    ``speed`` scales the platform: each job needs C/speed wall-clock units.
    Raises HorizonOverflow when integer rescaling exceeds ``scale_limit``.
    """
    speed = rat(speed) if not hasattr(speed, "denominator") else speed
    if not speed > 0:
        raise ValueError("speed must be positive")
    releases = _release_times(sys, pattern)
    horizon = pattern.horizon
    demands = {t.id: t.wcet / speed for t in sys.tasks}

    quantities = [horizon]
    quantities.extend(demands.values())
    quantities.extend(t.deadline for t in sys.tasks)
    for times in releases.values():
        quantities.extend(times)
    scale = denominator_lcm(quantities)
    if scale > scale_limit or horizon.numerator * scale > scale_limit * horizon.denominator:
        raise HorizonOverflow(f"integer rescale exceeds {scale_limit}")

    def grains(x) -> int:
        return int(x.numerator) * scale // int(x.denominator)

    n = len(sys)
    horizon_g = grains(horizon)
    rel_g = {p: [grains(x) for x in releases[t.id]] for p, t in enumerate(sys.tasks)}
    demand_g = {p: grains(demands[t.id]) for p, t in enumerate(sys.tasks)}
    deadline_g = {p: grains(t.deadline) for p, t in enumerate(sys.tasks)}

    release_heap = [(times[0], p, 0) for p, times in rel_g.items() if times]
    heapq.heapify(release_heap)
    deadline_heap: list[tuple[int, int, int]] = []
    pending: list[list[int]] = [[] for _ in range(n)]  # job indices, FIFO
    remaining: dict[tuple[int, int], int] = {}
    finished: set[tuple[int, int]] = set()
    on_proc: list[tuple[int, int] | None] = [None] * sys.processors
    proc_of: dict[tuple[int, int], int] = {}

    events: list[SimEvent] = []
    missed = False
    now = 0

    def emit(kind: EventKind, p: int, j: int, proc: int):
        events.append(
            SimEvent(
                time=Rat(now, scale),
                kind=kind,
                task=sys.tasks[p].id,
                job=j,
                processor=proc,
            )
        )

    def next_deadline() -> int | None:
        while deadline_heap and (deadline_heap[0][1], deadline_heap[0][2]) in finished:
            heapq.heappop(deadline_heap)
        return deadline_heap[0][0] if deadline_heap else None

    while True:
        candidates = []
        if release_heap:
            candidates.append(release_heap[0][0])
        nd = next_deadline()
        if nd is not None:
            candidates.append(nd)
        running = [job for job in on_proc if job is not None]
        if running:
            candidates.append(now + min(remaining[job] for job in running))
        if not candidates:
            break
        t_next = min(candidates)
        if t_next > horizon_g:
            break
        dt = t_next - now
        for job in running:
            remaining[job] -= dt
        now = t_next

        # finishes first: a job completing exactly at its deadline is on time
        for proc, job in enumerate(on_proc):
            if job is not None and remaining[job] == 0:
                on_proc[proc] = None
                del proc_of[job]
                finished.add(job)
                p, j = job
                assert pending[p] and pending[p][0] == j
                pending[p].pop(0)
                emit(EventKind.FINISH, p, j, proc)

        while release_heap and release_heap[0][0] == now:
            _, p, idx = heapq.heappop(release_heap)
            job = (p, idx)
            pending[p].append(idx)
            remaining[job] = demand_g[p]
            heapq.heappush(deadline_heap, (now + deadline_g[p], p, idx))
            emit(EventKind.RELEASE, p, idx, -1)
            if idx + 1 < len(rel_g[p]):
                heapq.heappush(release_heap, (rel_g[p][idx + 1], p, idx + 1))

        while deadline_heap and deadline_heap[0][0] == now:
            _, p, j = heapq.heappop(deadline_heap)
            if (p, j) in finished:
                continue
            emit(EventKind.MISS, p, j, -1)
            missed = True
            if stop_on_first_miss:
                return SimTrace(
                    events=tuple(events),
                    verdict=MISS_FOUND,
                    horizon=horizon,
                    speed=speed,
                )

        # select the M highest-priority eligible head jobs
        eligible = [(p, pending[p][0]) for p in range(n) if pending[p]]
        selected = set(eligible[: sys.processors])
        for proc, job in enumerate(on_proc):
            if job is not None and job not in selected:
                on_proc[proc] = None
                del proc_of[job]
                emit(EventKind.PREEMPT, job[0], job[1], proc)
        free = [proc for proc, job in enumerate(on_proc) if job is None]
        for job in sorted(selected):
            if job not in proc_of:
                proc = free.pop(0)
                on_proc[proc] = job
                proc_of[job] = proc
                emit(EventKind.START, job[0], job[1], proc)

    return SimTrace(
        events=tuple(events),
        verdict=MISS_FOUND if missed else NO_MISS_WITHIN_HORIZON,
        horizon=horizon,
        speed=speed,
    )


def validate_trace(trace: SimTrace, sys: TaskSystem, speed=1) -> list[str]:
    """Independent structural audit of a trace.

    Checks: per-processor and per-task exclusivity, execution never exceeding
    C/speed, FINISH exactly at C/speed, and that between any two consecutive
    event times the running set equals the M highest-priority eligible head
    jobs (which implies work conservation and priority compliance).
    """
    speed = rat(speed) if not hasattr(speed, "denominator") else speed
    problems: list[str] = []
    position = {t.id: p for p, t in enumerate(sys.tasks)}
    by_task = {t.id: t for t in sys.tasks}

    release_time: dict[tuple[int, int], object] = {}
    finish_time: dict[tuple[int, int], object] = {}
    intervals: dict[tuple[int, int], list] = {}
    open_run: dict[tuple[int, int], tuple] = {}
    for ev in trace.events:
        key = (ev.task, ev.job)
        if ev.kind is EventKind.RELEASE:
            release_time[key] = ev.time
        elif ev.kind is EventKind.START:
            if key in open_run:
                problems.append(f"{key} started twice at {ev.time}")
            open_run[key] = (ev.time, ev.processor)
        elif ev.kind in (EventKind.PREEMPT, EventKind.FINISH):
            begun = open_run.pop(key, None)
            if begun is None:
                problems.append(f"{key} stopped at {ev.time} without running")
            else:
                intervals.setdefault(key, []).append((begun[0], ev.time, begun[1]))
            if ev.kind is EventKind.FINISH:
                finish_time[key] = ev.time
    for key, (begin, proc) in open_run.items():
        intervals.setdefault(key, []).append((begin, trace.horizon, proc))

    for key, runs in intervals.items():
        release = release_time.get(key)
        for begin, end, _ in runs:
            if release is None or begin < release:
                problems.append(f"{key} ran at {begin} before its release")
        executed = sum((end - begin for begin, end, _ in runs), Rat(0))
        budget = by_task[key[0]].wcet / speed
        if executed > budget:
            problems.append(f"{key} executed {executed} > C/speed {budget}")
        if key in finish_time and executed != budget:
            problems.append(f"{key} finished after {executed}, needs {budget}")

    per_proc: dict[int, list] = {}
    per_task: dict[int, list] = {}
    for key, runs in intervals.items():
        for begin, end, proc in runs:
            if begin < end:
                per_proc.setdefault(proc, []).append((begin, end, key))
                per_task.setdefault(key[0], []).append((begin, end, key))
    for bucket, label in ((per_proc, "processor"), (per_task, "task")):
        for owner, runs in bucket.items():
            runs.sort()
            for (b1, e1, k1), (b2, e2, k2) in zip(runs, runs[1:]):
                if b2 < e1:
                    problems.append(
                        f"{label} {owner}: overlapping runs {k1} and {k2} at {b2}"
                    )

    boundaries = sorted({ev.time for ev in trace.events} | {trace.horizon})
    all_runs = [
        (begin, end, key)
        for key, runs in intervals.items()
        for begin, end, _proc in runs
    ]
    for t0, t1 in zip(boundaries, boundaries[1:]):
        if t0 >= t1:
            continue
        running = {key for begin, end, key in all_runs if begin <= t0 and end >= t1}
        heads: dict[int, tuple[int, int]] = {}
        for key, release in release_time.items():
            if release > t0:
                continue
            done = finish_time.get(key)
            if done is not None and done <= t0:
                continue
            task_id = key[0]
            if task_id not in heads or key[1] < heads[task_id][1]:
                heads[task_id] = key
        expected = set(
            sorted(heads.values(), key=lambda key: position[key[0]])[: sys.processors]
        )
        if running != expected:
            problems.append(
                f"[{t0},{t1}): running {sorted(running)} differs from "
                f"the {sys.processors} highest-priority heads {sorted(expected)}"
            )
    return problems


# --- the DM speedup lower-bound construction ----------------------------------


def counterexample_taskset(m_procs: int, epsilon) -> TaskSystem:
    """The 2M+1-task set that global DM misses at speed 1 yet is feasible slow.

    Tasks (ids give the DM order; all deadlines are 1 in the eta -> 0 limit):
      ids 0..M-1:    C = eps/3, T = eps, D = 1
      ids M..2M-1:   C = 1/3,   one-shot, D = 1
      id  2M:        C = (1+eps)/3, one-shot, D = 1
    Requires M >= 2 and 1/eps integer.
    """
    eps = rat(epsilon) if not hasattr(epsilon, "denominator") else epsilon
    if not (0 < eps <= 1):
        raise PreconditionError(f"epsilon must be in (0, 1], got {eps}")
    if (1 / eps).denominator != 1:
        raise PreconditionError(f"1/epsilon must be an integer, got 1/{eps}")
    if not isinstance(m_procs, int) or m_procs < 2:
        raise PreconditionError(f"M must be an integer >= 2, got {m_procs}")
    one = Rat(1)
    tasks = [
        SporadicTask(id=i, wcet=eps / 3, deadline=one, period=eps)
        for i in range(m_procs)
    ]
    tasks += [
        SporadicTask(id=m_procs + i, wcet=Rat(1, 3), deadline=one, period=INFINITE)
        for i in range(m_procs)
    ]
    tasks.append(
        SporadicTask(id=2 * m_procs, wcet=(1 + eps) / 3, deadline=one, period=INFINITE)
    )
    return TaskSystem(tasks=tuple(tasks), processors=m_procs)


def feasibility_speed(m_procs: int, epsilon):
    """Speed at which the semi-partitioned schedule is feasible."""
    eps = rat(epsilon) if not hasattr(epsilon, "denominator") else epsilon
    return (1 + eps) / 3 + (1 + eps) / (3 * m_procs)


def implied_speedup_lower_bound(m_procs: int, epsilon):
    """1 / feasibility_speed = 3M / ((1+eps)(M+1))."""
    eps = rat(epsilon) if not hasattr(epsilon, "denominator") else epsilon
    return Rat(3 * m_procs) / ((1 + eps) * (m_procs + 1))


@dataclass(frozen=True)
class LowerBoundReport:
    """Per-condition outcome of verifying the speedup lower-bound construction.

    ``dm_miss`` is the simulated global-DM run at speed 1 (must miss at t=1);
    the three analytic conditions certify the semi-partitioned schedule on
    each processor m at speed ``speed``: the split one-shot task finishing
    within its deadline, the middle one-shot via the response-time bound,
    and the periodic task via the response-time bound.
    """

    m_procs: int
    epsilon: object
    speed: object
    dm_miss: bool
    miss_time: object | None
    split_task_ok: bool
    split_finish: object
    mid_task_ok: bool
    mid_bound: object
    periodic_task_ok: bool
    periodic_bound: object

    @property
    def all_pass(self) -> bool:
        return (
            self.dm_miss
            and self.split_task_ok
            and self.mid_task_ok
            and self.periodic_task_ok
        )


def verify_lower_bound_construction(
    m_procs: int, epsilon, speed=None
) -> LowerBoundReport:
    """Check both halves of the lower-bound argument for concrete (M, eps).

    (a) simulate global DM at speed 1 under the synchronous pattern and
        confirm the lowest-priority task misses at exactly t = 1;
    (b) at ``speed`` (default (1+eps)/3 + (1+eps)/(3M)) verify the three
        per-processor conditions of the semi-partitioned schedule, where
        processor m hosts the periodic task m, one-shot task m+M, and a
        1/M share of the split task at top priority.
    """
    eps = rat(epsilon) if not hasattr(epsilon, "denominator") else epsilon
    s = feasibility_speed(m_procs, eps) if speed is None else (
        rat(speed) if not hasattr(speed, "denominator") else speed
    )
    sys = counterexample_taskset(m_procs, eps)
    split_id = 2 * m_procs
    trace = simulate(sys, SynchronousPeriodic(horizon=Rat(1)), speed=1)
    miss_time = None
    for ev in trace.misses:
        if ev.task == split_id:
            miss_time = ev.time
            break
    dm_miss = miss_time == Rat(1)

    c_split = (1 + eps) / 3      # whole split task
    c_share = c_split / m_procs  # per-processor share, one-shot (U = 0)
    c_mid = Rat(1, 3)
    c_periodic = eps / 3
    one = Rat(1)

    # migration chain: shares run back to back at top priority
    split_finish = c_split / s
    split_ok = split_finish <= one
    mid_bound = _bini_bound(c_mid / s, [(c_share / s, Rat(0))])
    mid_ok = mid_bound <= one
    periodic_bound = _bini_bound(
        c_periodic / s, [(c_share / s, Rat(0)), (c_mid / s, Rat(0))]
    )
    periodic_ok = periodic_bound <= one

    return LowerBoundReport(
        m_procs=m_procs,
        epsilon=eps,
        speed=s,
        dm_miss=dm_miss,
        miss_time=miss_time,
        split_task_ok=split_ok,
        split_finish=split_finish,
        mid_task_ok=mid_ok,
        mid_bound=mid_bound,
        periodic_task_ok=periodic_ok,
        periodic_bound=periodic_bound,
    )
