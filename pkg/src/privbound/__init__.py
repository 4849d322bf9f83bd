"""Exact privacy bounds and brute-force lemma checks for sample-releasing generative models."""

from privbound.errors import ResourceError, ValidationError, VerificationError

__version__ = "0.1.0"

__all__ = ["ResourceError", "ValidationError", "VerificationError", "__version__"]
