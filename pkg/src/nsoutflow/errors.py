"""Exception hierarchy shared across the package."""


class NSOutflowError(Exception):
    """Base class for all package errors."""


class ValidationError(NSOutflowError, ValueError):
    """Invalid parameters or states (bad configuration, out-of-range input)."""


class ConfigError(ValidationError):
    """Malformed or inconsistent configuration file."""


class RootBracketError(NSOutflowError, RuntimeError):
    """The characteristic foot point was not bracketed; indicates a bug."""


class StationaryDivergence(NSOutflowError, RuntimeError):
    """Stationary-solution integration left the trust region."""


class ShootingError(NSOutflowError, RuntimeError):
    """Shooting functional has no sign change over the search bracket."""


class SimulationAbort(NSOutflowError, RuntimeError):
    """Time integration aborted on a non-physical or non-finite value."""

    def __init__(self, reason: str, *, step: int, time: float, node: int, value: float):
        self.reason = reason
        self.step = step
        self.time = time
        self.node = node
        self.value = value
        super().__init__(
            f"{reason} at step {step}, t={time:.6g}, node {node}: value {value!r}"
        )
