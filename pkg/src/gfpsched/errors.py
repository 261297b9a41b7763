"""Exception types raised across the toolkit."""


class GfpschedError(Exception):
    """Base class for all toolkit errors."""


class InvalidTaskError(GfpschedError):
    """A task or task system violates the sporadic model invariants."""


class PolicyMismatch(GfpschedError):
    """A test requiring a specific priority order got a different one."""


class HyperperiodOverflow(GfpschedError):
    """An exact computation would need a hyperperiod beyond the configured bound."""


class HorizonOverflow(GfpschedError):
    """Integer rescaling of simulation times exceeded the configured bound."""


class ResampleLimit(GfpschedError):
    """The generator's discard/redraw loop exceeded its attempt cap."""


class UtilizationOverload(GfpschedError):
    """A response-time bound was requested with higher-priority utilization >= 1."""


class PreconditionError(GfpschedError):
    """An operation was called outside its stated precondition."""
