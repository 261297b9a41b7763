"""Exact rational time arithmetic shared by every other module.

All timing quantities (WCETs, deadlines, periods, window lengths) are kept
as exact rationals so that every schedulability inequality is decided
without tolerances.  gmpy2.mpq is used when available (it is an order of
magnitude faster); fractions.Fraction is the drop-in fallback.  Both keep
values in canonical reduced form, so equality is structural.

Two distinguished symbolic values exist:

* ``INFINITE``     -- period of a one-shot task (compares above every rational)
* ``NEG_INFINITY`` -- value of the workload function for negative arguments
                      (compares below every rational)

Neither is a float sentinel; they are singletons of their own types.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Union

try:
    from gmpy2 import mpq as Rat
except ImportError:  # pragma: no cover - gmpy2 is an optional speedup
    Rat = Fraction


class _Infinite:
    """Positive-infinity time marker (one-shot task period)."""

    __slots__ = ()

    def __gt__(self, other):
        return not isinstance(other, _Infinite)

    def __ge__(self, other):
        return True

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return isinstance(other, _Infinite)

    def __eq__(self, other):
        return isinstance(other, _Infinite)

    def __hash__(self):
        return hash("gfpsched.INFINITE")

    def __repr__(self):
        return "INFINITE"


class _NegInfinite:
    """Negative-infinity marker returned by work() for t < 0."""

    __slots__ = ()

    def __gt__(self, other):
        return False

    def __ge__(self, other):
        return isinstance(other, _NegInfinite)

    def __lt__(self, other):
        return not isinstance(other, _NegInfinite)

    def __le__(self, other):
        return True

    def __eq__(self, other):
        return isinstance(other, _NegInfinite)

    def __hash__(self):
        return hash("gfpsched.NEG_INFINITY")

    def __repr__(self):
        return "NEG_INFINITY"


INFINITE = _Infinite()
NEG_INFINITY = _NegInfinite()

Time = Union[Rat, _Infinite]


def is_infinite(value) -> bool:
    return isinstance(value, _Infinite)


def rat(value, den: int | None = None):
    """Build an exact rational from int, string, Fraction or another rational.

    Strings accept both 'p/q' and exact decimal forms ('0.25' -> 1/4).
    Floats are rejected: callers must go through snap() so the grid is explicit.
    """
    if den is not None:
        return Rat(value, den)
    if isinstance(value, float):
        raise TypeError("floats are not exact; use snap(value, denominator)")
    if isinstance(value, Fraction):
        return Rat(value.numerator, value.denominator)
    if isinstance(value, str):
        text = value.strip()
        # Fraction parses decimal strings exactly; mpq parses both forms too,
        # but route through Fraction so the fallback behaves identically.
        return rat(Fraction(text))
    return Rat(value)


def as_rat(value):
    """Coerce ints, strings and Fractions to Rat; pass rationals through."""
    if isinstance(value, (int, str, Fraction)):
        return rat(value)
    return value


def snap(value: float, denominator: int):
    """Round a float onto the 1/denominator grid, returning an exact rational."""
    if denominator <= 0:
        raise ValueError("snap denominator must be positive")
    return Rat(round(value * denominator), denominator)


def parse_time(text: str) -> Time:
    """Parse 'p/q', decimal, or 'inf' into a Time value."""
    stripped = text.strip().lower()
    if stripped in ("inf", "infinite", "infinity"):
        return INFINITE
    return rat(text)


def format_time(value: Time) -> str:
    if is_infinite(value):
        return "inf"
    return str(value)


def rat_floor(value) -> int:
    return math.floor(value)


def rat_ceil(value) -> int:
    return math.ceil(value)


def lcm_rats(values: Iterable) -> object:
    """Least common multiple of positive rationals: lcm(nums)/gcd(dens).

    Returns Rat(0) for an empty collection (the degenerate hyperperiod).
    """
    nums: list[int] = []
    dens: list[int] = []
    for v in values:
        nums.append(int(v.numerator))
        dens.append(int(v.denominator))
    if not nums:
        return Rat(0)
    return Rat(math.lcm(*nums), math.gcd(*dens))


def denominator_lcm(values: Iterable) -> int:
    """lcm of the denominators of a collection of rationals (the grain size)."""
    out = 1
    for v in values:
        out = math.lcm(out, int(v.denominator))
    return out
