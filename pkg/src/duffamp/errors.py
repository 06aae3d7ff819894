"""Exception types shared across the package."""


class CriticalPointError(ValueError):
    """Raised when a linearized quantity is evaluated exactly at a bifurcation.

    At a switching point the slowest eigenvalue of the linearized dynamics
    vanishes and the small-signal response diverges; callers get this error
    instead of a silent infinity.
    """


class EmptySweepError(RuntimeError):
    """Raised when a sweep grid yields no physical fixed points."""


class ConfigError(ValueError):
    """Raised for invalid or unknown configuration keys and values."""
