"""Exception hierarchy shared by every module."""

from __future__ import annotations


class RatSurfError(Exception):
    """Base class for all errors raised by this package."""


class ModelMismatchError(RatSurfError, ValueError):
    """Two classes (or a class and an operation) live on different surfaces."""


class UnsupportedBasisError(RatSurfError, ValueError):
    pass


class InvalidInputError(RatSurfError, ValueError):
    """A precondition on the input data is violated."""


class HypothesisViolation(RatSurfError, ValueError):
    """The input falls outside the hypotheses of the construction being replayed."""


class SamplingError(RatSurfError, RuntimeError):
    pass


class OracleDisagreement(RatSurfError, RuntimeError):
    """Closed-form and lattice-factorization results differ.

    This is always an internal error: it means one of the two routes is wrong.
    """
