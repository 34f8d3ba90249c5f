"""Exception types shared across the package."""


class NacgenError(Exception):
    """Base class for all package errors."""


class RefinementError(NacgenError):
    """A partition chain fails to refine its predecessor.

    Carries the offending chain level and the outcome pair that was split
    at the coarser level but merged at the finer one.
    """

    def __init__(self, level: int, outcome_a: int, outcome_b: int):
        self.level = level
        self.outcome_a = outcome_a
        self.outcome_b = outcome_b
        super().__init__(
            f"partition at level {level} does not refine level {level - 1}: "
            f"outcomes {outcome_a} and {outcome_b} are separated at level "
            f"{level - 1} but share a block at level {level}"
        )


class SizeLimitError(NacgenError):
    """A requested enumeration exceeds the configured size budget."""

    def __init__(self, cardinality: int, limit: int, what: str = "scenario set"):
        self.cardinality = cardinality
        self.limit = limit
        super().__init__(
            f"{what} has cardinality {cardinality}, exceeding the limit {limit}"
        )


class ConfigError(NacgenError):
    """Invalid experiment configuration; ``field`` is a dotted path."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"config field '{field}': {message}")
