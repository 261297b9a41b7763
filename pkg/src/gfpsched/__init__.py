"""Schedulability toolkit for arbitrary-deadline sporadic task systems
under global fixed-priority preemptive scheduling on identical multiprocessors.

Core surface:

* model      -- SporadicTask / TaskSystem, DM/SM priority assignment, file I/O
* workload   -- dbf, workload function, carry-in bounds, linear bounds, load
* analysis   -- the schedulability test ladder and speedup/necessity probes
* simulator  -- event-driven global FP simulator (falsification oracle)
* generator  -- UUniFast-discard task-set generation
* experiment -- acceptance-ratio sweeps, dominance audits, plot data
"""

from .model import (
    PriorityPolicy,
    SporadicTask,
    TaskSystem,
    assign_priorities,
    derived_stats,
)
from .rationals import INFINITE, NEG_INFINITY, Rat, rat, snap

__version__ = "0.1.0"

__all__ = [
    "INFINITE",
    "NEG_INFINITY",
    "PriorityPolicy",
    "Rat",
    "SporadicTask",
    "TaskSystem",
    "assign_priorities",
    "derived_stats",
    "rat",
    "snap",
    "__version__",
]
