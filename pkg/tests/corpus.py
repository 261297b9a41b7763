"""Seeded corpus builders shared across the test suite.

Two flavors:

* small_integer_system -- parameters on coarse grids with periods from a
  smooth pool (lcm 48), so hyperperiods stay tiny and the exact test and
  the simulator are affordable.  Occasionally includes one-shot tasks.
* generated_system -- the UUniFast generator with the default fine snap
  grid; hyperperiods are astronomically large, exercising the
  approximation-only paths.
"""

from __future__ import annotations

import math
import random

from gfpsched.generator import GenConfig, generate
from gfpsched.model import (
    PriorityPolicy,
    SporadicTask,
    TaskSystem,
    assign_priorities,
)
from gfpsched.rationals import INFINITE, Rat

SMOOTH_PERIODS = (2, 3, 4, 6, 8, 12, 16, 24)


def small_integer_tasks(
    rng: random.Random,
    n: int,
    m: int,
    util_frac_range=(0.15, 1.1),
    dratio_steps=(8, 20),        # r = step/10, drawn from [lo, hi]
    oneshot_prob=0.12,
) -> list[SporadicTask]:
    lo_frac, hi_frac = util_frac_range
    target = Rat(rng.randint(int(lo_frac * 100), int(hi_frac * 100)), 100) * m
    weights = [rng.randint(1, 10) for _ in range(n)]
    scale = target / sum(weights)
    tasks = []
    for i, w in enumerate(weights):
        # utilizations on a /240 grid keep the integer-rescale grain small
        util = Rat(max(1, round(float(w * scale) * 240)), 240)
        util = min(Rat(216, 240), util)
        if rng.random() < oneshot_prob:
            wcet = Rat(rng.randint(1, 12), 4)
            deadline = wcet * Rat(rng.randint(10, 30), 10)
            tasks.append(
                SporadicTask(id=i, wcet=wcet, deadline=deadline, period=INFINITE)
            )
            continue
        period = Rat(rng.choice(SMOOTH_PERIODS))
        wcet = util * period
        ratio = Rat(rng.randint(*dratio_steps), 10)
        deadline = max(wcet, ratio * period)
        tasks.append(SporadicTask(id=i, wcet=wcet, deadline=deadline, period=period))
    return tasks


def small_integer_system(
    seed: int,
    m_choices=(2, 4, 8),
    n_range=(2, 5),
    policy=PriorityPolicy.DM,
    **kwargs,
) -> TaskSystem:
    rng = random.Random(seed)
    m = rng.choice(m_choices)
    n = rng.randint(*n_range)
    return assign_priorities(small_integer_tasks(rng, n, m, **kwargs), policy, m)


def generated_system(
    seed: int,
    m_choices=(2, 4, 8),
    n_range=(3, 6),
    util_frac_range=(0.15, 1.05),
    policy=PriorityPolicy.DM,
    dratio=(Rat(4, 5), 2),
) -> TaskSystem:
    rng = random.Random(seed ^ 0x9E3779B9)
    m = rng.choice(m_choices)
    n = rng.randint(*n_range)
    lo, hi = util_frac_range
    frac = Rat(rng.randint(int(lo * 100), int(hi * 100)), 100)
    u_sum = frac * m
    # the discard loop degenerates as u_sum -> n (and, at fixed ratio, as n
    # grows); size n so the expected number of over-1 samples stays small
    u_float = float(u_sum)
    if u_float > 5:
        n = max(n, math.ceil(3 * u_float))
    elif u_float > 2:
        n = max(n, math.ceil(2.2 * u_float))
    else:
        n = max(n, math.ceil(u_float / 0.7))
    cfg = GenConfig(
        n=n,
        u_sum=u_sum,
        period_lo=1,
        period_hi=20,
        dratio_lo=dratio[0],
        dratio_hi=dratio[1],
        seed=seed,
    )
    return assign_priorities(generate(cfg), policy, m)


def random_task(rng: random.Random, id: int = 0) -> SporadicTask:
    """One task with moderate rational parameters (for curve-level properties)."""
    if rng.random() < 0.1:
        wcet = Rat(rng.randint(1, 400), 100)
        return SporadicTask(
            id=id,
            wcet=wcet,
            deadline=wcet + Rat(rng.randint(0, 600), 100),
            period=INFINITE,
        )
    period = Rat(rng.randint(10, 2000), 100)
    wcet = period * Rat(rng.randint(1, 100), 100)
    deadline = max(wcet, period * Rat(rng.randint(30, 300), 100))
    return SporadicTask(id=id, wcet=wcet, deadline=deadline, period=period)
