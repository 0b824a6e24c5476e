"""Errors raised by the numerical library.

Commands map them onto exit codes, see
``regularization.management.commands._numeric``.
"""


class RegularizationError(Exception):
    """Base class of every library error."""


class DomainError(RegularizationError, ValueError):
    """An argument lies outside the domain of the operation."""


class NonConvergence(RegularizationError, ArithmeticError):
    """An adaptive integral, root search or minimization missed its tolerance."""


class PoleNotBracketed(RegularizationError):
    """The denominator does not change sign around the declared pole."""


class DegeneratePole(RegularizationError):
    """The denominator slope at the pole vanishes on its local scale."""


class NoSignChange(RegularizationError, ValueError):
    """A root bracket whose endpoints have the same sign."""
