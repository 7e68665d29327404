"""Exception types shared across the engine.

Every failure mode that callers are expected to catch has its own class;
anything raised as a plain ValueError is a programming error on the caller's
side, not an engine condition.
"""


class LipsatError(Exception):
    """Base class for all engine errors."""


class UnknownSymbol(LipsatError):
    """A symbol was used that is not registered in the active field."""


class DivisionByZero(LipsatError, ZeroDivisionError):
    """Division by an element whose normal form is zero."""


class UnsupportedExtension(LipsatError):
    """The computation would leave the supported coefficient-field tower."""


class NotAUnit(LipsatError):
    """Series inversion requested for a series without an exact leading term."""


class PrecisionExceeded(LipsatError):
    """The requested truncation is insufficient (e.g. branches not separated)."""


class IndeterminateOrder(LipsatError):
    """An order comparison cannot be resolved at the current truncation.

    Carries the lower bound that was available so escalation loops can report
    it.  Catching this and retrying at doubled precision is the intended use.
    """

    def __init__(self, message, lower_bound=None):
        super().__init__(message)
        self.lower_bound = lower_bound


class NotIsolated(LipsatError):
    """The germ is not reduced with an isolated singularity, or the polar
    shares a component with it through the origin."""


class HypothesisUnmet(LipsatError):
    """A criterion's mathematical hypotheses do not hold for the given data."""


class NotAFiberPair(LipsatError):
    """The supplied pair of curves is not a fiber pair for the given germ."""


class InternalCriterionMismatch(LipsatError):
    """Bug trap: a shortcut criterion disagreed with the general engine."""


class ParseError(LipsatError):
    """Input text does not match the expression grammar.

    Carries the 0-based offset of the offending token and the set of token
    kinds that would have been accepted there.
    """

    def __init__(self, message, position, expected=()):
        super().__init__(message)
        self.position = position
        self.expected = tuple(expected)
