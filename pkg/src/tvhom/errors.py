"""Exception hierarchy.

Every error raised by the package derives from :class:`TVHomError`; the ones
that describe bad user input also derive from :class:`ValueError`.
"""


class TVHomError(Exception):
    pass


class NonFiniteInput(TVHomError, ValueError):
    pass


class EmptyMeasure(TVHomError, ValueError):
    pass


class NegativeWeight(TVHomError, ValueError):
    pass


class ZeroProbability(TVHomError, ValueError):
    pass


class InvalidPmf(TVHomError, ValueError):
    pass


class AlphabetMismatch(TVHomError, ValueError):
    pass


class WeightMismatch(TVHomError, ValueError):
    pass


class BadDelta(TVHomError, ValueError):
    pass


class NotAdmissible(TVHomError, ValueError):
    pass


class DeltaTooLarge(TVHomError, ValueError):
    pass


class AtomBudgetExceeded(TVHomError, RuntimeError):
    pass


class EnumerationBudgetExceeded(TVHomError, RuntimeError):
    pass


class NoFeasiblePoint(TVHomError, RuntimeError):
    pass


class TheoremViolation(TVHomError, AssertionError):
    """A computed ratio broke a proven bound. Always an implementation bug."""


class InputParseError(TVHomError, ValueError):
    pass
