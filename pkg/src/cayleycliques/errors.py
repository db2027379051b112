"""Exception types shared across the package."""


class ParameterError(ValueError):
    """Invalid parameters or violated preconditions."""


class ResourceLimitError(RuntimeError):
    """A size cap or time limit was exceeded."""
