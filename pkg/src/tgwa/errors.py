"""Exception hierarchy.

Errors split into three families so the command line can map them onto
exit codes: configuration problems, mathematical precondition failures,
and certification failures (an implementation disagreeing with its own
oracle).
"""


class TgwaError(Exception):
    """Base class for every error raised by this package."""


class ConfigError(TgwaError):
    """A configuration file or command-line value could not be parsed."""


class MathError(TgwaError):
    """A mathematical precondition of an operation does not hold."""


class DivisionByZero(MathError, ZeroDivisionError):
    pass


class QEqualsOne(MathError):
    pass


class ZeroInput(MathError):
    pass


class DenominatorVanishes(MathError):
    pass


class NotSkewSymmetric(MathError):
    pass


class DegenerateBasis(MathError):
    pass


class NotScalarGraded(MathError):
    pass


class GroupnessViolated(MathError):
    pass


class NotRootOfUnity(MathError):
    pass


class InfiniteOrder(MathError):
    pass


class NoFiniteDimensionalWeightSpaces(MathError):
    pass


class WindowRequired(MathError):
    pass


class InfiniteDimension(MathError):
    pass


class CertificationFailed(TgwaError):
    """A closed-form formula disagreed with the brute-force oracle."""
