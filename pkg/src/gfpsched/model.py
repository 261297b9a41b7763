"""Sporadic task model, priority policies and derived per-prefix statistics.

A sporadic task releases jobs separated by at least its period T; each job
needs C units of execution within the relative deadline D.  Deadlines are
arbitrary: D may exceed T, so several jobs of one task can be active at
once.  A task system is a priority-ordered tuple of tasks (index 0 is the
highest priority) together with the processor count M >= 2 of the identical
multiprocessor platform.

All analysis routines take a prefix length ``k`` (1-based): "the k
highest-priority tasks", with tasks[k-1] the task under analysis.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import InvalidTaskError
from .rationals import (
    INFINITE,
    Rat,
    Time,
    format_time,
    is_infinite,
    lcm_rats,
    parse_time,
    rat,
)


@dataclass(frozen=True)
class SporadicTask:
    """One sporadic task: id, WCET C, relative deadline D, period T.

    T may be INFINITE for a one-shot task (single job, utilization 0).
    Invariants: C > 0, D > 0, T > 0, C/D <= 1 and C/T <= 1.
    """

    id: int
    wcet: object
    deadline: object
    period: Time

    def __post_init__(self):
        if not self.wcet > 0:
            raise InvalidTaskError(f"task {self.id}: C must be > 0, got {self.wcet}")
        if not self.deadline > 0:
            raise InvalidTaskError(f"task {self.id}: D must be > 0, got {self.deadline}")
        if not is_infinite(self.period) and not self.period > 0:
            raise InvalidTaskError(f"task {self.id}: T must be > 0, got {self.period}")
        if self.wcet > self.deadline:
            raise InvalidTaskError(
                f"task {self.id}: C/D must be <= 1, got C={self.wcet} D={self.deadline}"
            )
        if not is_infinite(self.period) and self.wcet > self.period:
            raise InvalidTaskError(
                f"task {self.id}: utilization must be <= 1, got C={self.wcet} T={self.period}"
            )

    @property
    def utilization(self):
        """C/T; zero for a one-shot task."""
        if is_infinite(self.period):
            return Rat(0)
        return self.wcet / self.period

    @property
    def density(self):
        """C / min(D, T)."""
        if is_infinite(self.period) or self.deadline <= self.period:
            return self.wcet / self.deadline
        return self.wcet / self.period

    @property
    def slack(self):
        return self.deadline - self.wcet

    @property
    def min_deadline_period(self):
        if is_infinite(self.period):
            return self.deadline
        return min(self.deadline, self.period)

    def __repr__(self):
        return (
            f"SporadicTask(id={self.id}, C={self.wcet}, D={self.deadline}, "
            f"T={format_time(self.period)})"
        )


def task(id: int, c, d, t) -> SporadicTask:
    """Convenience constructor accepting ints, strings or rationals."""
    period = INFINITE if is_infinite(t) else rat(t)
    return SporadicTask(id=id, wcet=rat(c), deadline=rat(d), period=period)


class PriorityPolicy(enum.Enum):
    DM = "dm"            # ascending relative deadline
    SM = "sm"            # ascending slack D - C
    AS_GIVEN = "given"   # keep the input order


@dataclass(frozen=True)
class TaskSystem:
    """Priority-ordered task tuple plus processor count M >= 2."""

    tasks: tuple[SporadicTask, ...]
    processors: int

    def __post_init__(self):
        if not self.tasks:
            raise InvalidTaskError("task system must contain at least one task")
        if not isinstance(self.processors, int) or self.processors < 2:
            raise InvalidTaskError(
                f"M must be an integer >= 2, got {self.processors!r}"
            )
        ids = [t.id for t in self.tasks]
        if len(set(ids)) != len(ids):
            raise InvalidTaskError(f"task ids must be unique, got {ids}")

    def __len__(self):
        return len(self.tasks)

    def __iter__(self):
        return iter(self.tasks)

    def prefix(self, k: int) -> tuple[SporadicTask, ...]:
        """The k highest-priority tasks (1 <= k <= N)."""
        self.check_prefix(k)
        return self.tasks[:k]

    def higher_priority(self, k: int) -> tuple[SporadicTask, ...]:
        """Tasks with strictly higher priority than tasks[k-1]."""
        self.check_prefix(k)
        return self.tasks[: k - 1]

    def check_prefix(self, k: int):
        if not 1 <= k <= len(self.tasks):
            raise IndexError(f"k must be in 1..{len(self.tasks)}, got {k}")

    def is_dm_ordered(self) -> bool:
        ds = [t.deadline for t in self.tasks]
        return all(a <= b for a, b in zip(ds, ds[1:]))


def assign_priorities(
    tasks: Iterable[SporadicTask],
    policy: PriorityPolicy,
    processors: int,
) -> TaskSystem:
    """Order tasks by the given policy and wrap them into a TaskSystem.

    DM sorts by ascending deadline, SM by ascending slack D - C; ties are
    broken by ascending original id so runs are reproducible.  AS_GIVEN
    keeps the input order unchanged.
    """
    task_list = list(tasks)
    if not task_list:
        raise InvalidTaskError("cannot assign priorities to an empty task list")
    if policy is PriorityPolicy.DM:
        ordered = sorted(task_list, key=lambda t: (t.deadline, t.id))
    elif policy is PriorityPolicy.SM:
        ordered = sorted(task_list, key=lambda t: (t.slack, t.id))
    elif policy is PriorityPolicy.AS_GIVEN:
        ordered = task_list
    else:
        raise ValueError(f"unknown policy {policy!r}")
    return TaskSystem(tasks=tuple(ordered), processors=processors)


@dataclass(frozen=True)
class DerivedStats:
    """Per-prefix maxima and sums used throughout the test ladder.

    hyperperiod is None when any of the first k periods is INFINITE or the
    lcm exceeds the configured grain bound.
    """

    k: int
    delta_max: object          # max density among the first k tasks
    u_delta_max: object        # max{max_{i<k} U_i, delta_k}
    utilization_sum: object
    hyperperiod: object | None

    def __post_init__(self):
        assert self.u_delta_max <= self.delta_max <= 1


def hyperperiod_of(tasks: Sequence[SporadicTask]):
    """lcm of the finite periods among ``tasks``; Rat(0) if there are none."""
    return lcm_rats(t.period for t in tasks if not is_infinite(t.period))


def derived_stats(sys: TaskSystem, k: int, lcm_bound: int | None = None) -> DerivedStats:
    """delta_max(k), U_delta_max(k), sum of utilizations, hyperperiod-or-None."""
    sys.check_prefix(k)
    prefix = sys.prefix(k)
    delta_max = max(t.density for t in prefix)
    last = prefix[-1]
    u_delta_max = max([t.utilization for t in prefix[:-1]] + [last.density])
    util_sum = sum((t.utilization for t in prefix), Rat(0))

    hyperperiod = None
    if all(not is_infinite(t.period) for t in prefix):
        hp = lcm_rats(t.period for t in prefix)
        if lcm_bound is None or hp.numerator <= lcm_bound * hp.denominator:
            hyperperiod = hp
    return DerivedStats(
        k=k,
        delta_max=delta_max,
        u_delta_max=u_delta_max,
        utilization_sum=util_sum,
        hyperperiod=hyperperiod,
    )


# --- task-set file format ---------------------------------------------------
#
# One task per line "C D T" (decimal or p/q rationals, T may be 'inf'),
# '#' starts a comment, and a header line "M <int>" carries the processor
# count.  Tasks get ids 0,1,... in file order.


def parse_taskset(text: str) -> tuple[list[SporadicTask], int | None]:
    """Parse the task-set file format; returns (tasks, M-or-None)."""
    tasks: list[SporadicTask] = []
    processors: int | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0].upper() == "M":
            if len(parts) != 2:
                raise InvalidTaskError(f"line {lineno}: malformed header {raw!r}")
            processors = int(parts[1])
            continue
        if len(parts) != 3:
            raise InvalidTaskError(
                f"line {lineno}: expected 'C D T', got {raw!r}"
            )
        c, d, t = (parse_time(p) for p in parts)
        if is_infinite(c) or is_infinite(d):
            raise InvalidTaskError(f"line {lineno}: only T may be infinite")
        tasks.append(SporadicTask(id=len(tasks), wcet=c, deadline=d, period=t))
    return tasks, processors


def format_taskset(tasks: Sequence[SporadicTask], processors: int | None = None) -> str:
    lines = []
    if processors is not None:
        lines.append(f"M {processors}")
    for t in tasks:
        lines.append(f"{t.wcet} {t.deadline} {format_time(t.period)}")
    return "\n".join(lines) + "\n"


def load_taskset_file(path) -> tuple[list[SporadicTask], int | None]:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_taskset(fh.read())
