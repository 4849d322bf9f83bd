"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Input violates a documented precondition or schema."""


class ResourceError(RuntimeError):
    """An enumeration or iteration cap would be exceeded."""


class VerificationError(AssertionError):
    """A checked inequality or identity failed on a concrete instance."""
