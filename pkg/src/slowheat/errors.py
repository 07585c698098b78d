"""Exception types shared across the package.

The split follows how callers are expected to react: a DomainError means the
request itself is outside the validity window of a formula or definition and
retrying with the same inputs is pointless; a ResourceLimitError means the
computation was cut off by a configured cap and a smaller problem (or a larger
cap) would succeed; an AccuracyError means an iterative scheme exhausted its
refinement budget without reaching tolerance.
"""


class DomainError(ValueError):
    """Input violates a stated validity constraint (for example alpha <= D)."""


class DegenerateInputError(ValueError):
    """Input is formally valid but makes the requested quantity undefined."""


class ResourceLimitError(RuntimeError):
    """A configured size cap was hit before the computation finished."""

    def __init__(self, message, *, depth_reached=None, partial=None):
        super().__init__(message)
        self.depth_reached = depth_reached
        self.partial = partial


class AccuracyError(RuntimeError):
    """An adaptive scheme could not reach its tolerance within its budget."""

    def __init__(self, message, *, estimate=None):
        super().__init__(message)
        self.estimate = estimate


class SchemaError(ValueError):
    """A configuration file failed validation.  ``path`` names the field."""

    def __init__(self, path, message):
        super().__init__(f"{path}: {message}")
        self.path = path
