"""Exception types shared across the package."""


class DomainError(ValueError):
    """A library precondition was violated (bad input, not a bug)."""
