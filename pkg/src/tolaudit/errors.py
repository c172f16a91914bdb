"""Exception types shared across the package."""


class ValidationError(ValueError):
    """An input violates a documented invariant or precondition."""


class GuardError(ValidationError):
    """A size guard was exceeded; rerun with an explicit override."""


class TheoremViolationError(AssertionError):
    """A checked mathematical invariant failed on concrete data.

    This never indicates bad user input: it means either the implementation
    or the theory check itself is wrong, so it is surfaced loudly.
    """
