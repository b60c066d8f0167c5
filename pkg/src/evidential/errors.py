"""
errors.py

Exception hierarchy shared by every module.

`ValidationError` marks bad input or configuration (CLI exit code 2);
every other `EvidentialError` is a runtime failure (CLI exit code 3).
"""
from __future__ import absolute_import, annotations, division, print_function


class EvidentialError(Exception):
    """Base class for all errors raised by `evidential`."""


class ValidationError(EvidentialError, ValueError):
    """Invalid input, argument range or configuration."""


class BadFrame(ValidationError):
    """Frame is malformed, or a subset refers to an index outside it."""


class FrameMismatch(ValidationError):
    """Operands are defined on different frames."""


class SumNotOne(ValidationError):
    """Masses do not sum to one."""


class EmptyFocal(ValidationError):
    """Positive mass assigned to the empty set."""


class ShapeMismatch(ValidationError):
    """Array arguments have incompatible shapes."""


class DimensionMismatch(ValidationError):
    """Feature dimension does not match the model."""


class AllZeroLikelihood(ValidationError):
    """Likelihood vector has no strictly positive entry."""


class TotalConflict(EvidentialError):
    """Dempster's rule is undefined: the degree of conflict reached one."""


class NonNormalizable(EvidentialError):
    """No mass is left to normalize."""


class AllMassEmpty(EvidentialError):
    """A credal-partition row puts all of its mass on the empty set."""


class ZeroDenominator(EvidentialError):
    """A fusion rule has nothing to normalize by."""


class NonFiniteLoss(EvidentialError):
    """Training produced a NaN or infinite loss."""


class ConvergenceWarning(UserWarning):
    """An iterative fit stopped at `max_iter` before meeting its tolerance."""
