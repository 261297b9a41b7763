"""Random task-set generation for acceptance-ratio experiments.

Utilizations come from UUniFast with whole-vector discard of samples
exceeding 1, periods from a log-uniform distribution, and deadlines from
D = r*T with r uniform on a configurable interval.  Everything is snapped
onto a rational grid (default denominator 10^6) so the downstream tests
stay exact; the utilization vector sums to the target exactly because the
last element absorbs the snap residue.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .errors import ResampleLimit
from .model import SporadicTask
from .rationals import Rat, as_rat, snap

DEFAULT_SNAP_DEN = 10**6
DEFAULT_RESAMPLE_CAP = 10_000


@dataclass(frozen=True)
class GenConfig:
    n: int
    u_sum: object                 # target total utilization
    period_lo: object
    period_hi: object
    dratio_lo: object             # deadline ratio interval: D = r*T, r ~ U[lo, hi]
    dratio_hi: object
    seed: int
    snap_den: int = DEFAULT_SNAP_DEN
    resample_cap: int = DEFAULT_RESAMPLE_CAP

    def __post_init__(self):
        object.__setattr__(self, "u_sum", as_rat(self.u_sum))
        object.__setattr__(self, "period_lo", as_rat(self.period_lo))
        object.__setattr__(self, "period_hi", as_rat(self.period_hi))
        object.__setattr__(self, "dratio_lo", as_rat(self.dratio_lo))
        object.__setattr__(self, "dratio_hi", as_rat(self.dratio_hi))
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if not self.u_sum > 0:
            raise ValueError("target utilization must be positive")
        if not 0 < self.period_lo <= self.period_hi:
            raise ValueError("period range must satisfy 0 < lo <= hi")
        if not 0 < self.dratio_lo <= self.dratio_hi:
            raise ValueError("deadline-ratio interval must satisfy 0 < lo <= hi")


def _uunifast(rng: random.Random, n: int, u_total: float) -> list[float]:
    values = []
    remaining = u_total
    for i in range(n - 1):
        nxt = remaining * rng.random() ** (1.0 / (n - i - 1))
        values.append(remaining - nxt)
        remaining = nxt
    values.append(remaining)
    return values


def uunifast_discard(
    n: int,
    u_sum,
    rng,
    snap_den: int = DEFAULT_SNAP_DEN,
    max_attempts: int = DEFAULT_RESAMPLE_CAP,
) -> list:
    """n utilizations in (0, 1] summing to u_sum exactly.

    Vectors with any raw sample above 1 are discarded wholesale; the first
    n-1 values are snapped to the grid and the last absorbs the residue so
    the sum is exact.  Raises ResampleLimit when the attempt cap is hit
    (it will be, whenever u_sum > n or u_sum is very close to n).
    """
    if isinstance(rng, int):
        rng = random.Random(rng)
    u_sum = as_rat(u_sum)
    if u_sum > n:
        raise ResampleLimit(f"target utilization {u_sum} exceeds n={n}")
    u_total = float(u_sum)
    for _ in range(max_attempts):
        raw = _uunifast(rng, n, u_total)
        if any(u > 1.0 for u in raw):
            continue
        snapped = [snap(u, snap_den) for u in raw[:-1]]
        last = u_sum - sum(snapped, Rat(0))
        snapped.append(last)
        if all(0 < u <= 1 for u in snapped):
            return snapped
    raise ResampleLimit(f"no valid utilization vector after {max_attempts} attempts")


def generate(config: GenConfig) -> list[SporadicTask]:
    """Draw one task set; unordered, caller applies a priority policy.

    C = U*T exactly (so task utilizations match the UUniFast vector); the
    deadline ratio r is re-drawn per task until C/D <= 1 holds post-snap.
    """
    rng = random.Random(config.seed)
    utils = uunifast_discard(
        config.n, config.u_sum, rng, config.snap_den, config.resample_cap
    )
    log_lo = math.log(float(config.period_lo))
    log_hi = math.log(float(config.period_hi))
    r_lo = float(config.dratio_lo)
    r_hi = float(config.dratio_hi)
    tasks = []
    for i, util in enumerate(utils):
        period = Rat(0)
        while not period > 0:
            period = snap(math.exp(rng.uniform(log_lo, log_hi)), config.snap_den)
        wcet = util * period
        deadline = None
        for _ in range(config.resample_cap):
            candidate = snap(rng.uniform(r_lo, r_hi) * float(period), config.snap_den)
            if candidate > 0 and wcet <= candidate:
                deadline = candidate
                break
        if deadline is None:
            raise ResampleLimit(
                f"task {i}: no deadline ratio in [{config.dratio_lo}, {config.dratio_hi}] "
                f"gives C/D <= 1 for U={util}"
            )
        tasks.append(SporadicTask(id=i, wcet=wcet, deadline=deadline, period=period))
    return tasks
