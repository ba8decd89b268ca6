"""Exception types shared across the package."""


class DomainError(ValueError):
    """An operation was called outside its mathematical domain."""


class ResourceError(RuntimeError):
    """A configured search, term or evaluation budget was exceeded."""
