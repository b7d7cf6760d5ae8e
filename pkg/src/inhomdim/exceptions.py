class UnsupportedConfigurationError(ValueError):
    """The requested operation is only defined for a narrower class of inputs."""


class UnreachableThresholdError(ValueError):
    """A schedule switching threshold can never be met for these parameters."""


class MaterializationError(ValueError):
    """Refusal to materialize a cube set that would exceed the size guard."""


class DivergenceError(ValueError):
    """A series whose sum was requested diverges."""
