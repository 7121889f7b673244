class ValidationError(ValueError):
    """Input rejected: malformed table, bad descriptor, failed hom check, ..."""


class ResourceLimitError(RuntimeError):
    """A size cap was exceeded (group order, oracle bounds, search space)."""
