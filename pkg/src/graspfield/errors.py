"""Exception and warning types shared across the package."""


class GraspFieldError(Exception):
    """Base class for all graspfield errors."""


class DataError(GraspFieldError):
    """Invalid input data: malformed files, bad shapes, broken invariants."""


class ConfigError(DataError):
    """Invalid configuration file or value."""


class UngraspableError(GraspFieldError):
    """No grasp candidate could be generated within the attempt budget."""


class VerificationError(GraspFieldError):
    """A post-hoc consistency check on generated artifacts failed."""


class GraspFieldWarning(UserWarning):
    """Non-fatal events that callers may want to inspect (degenerate
    neighborhoods, clamped angles, under-full sample sets)."""
