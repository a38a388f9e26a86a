"""Exception hierarchy shared by every module of the package."""


class EnvelopeError(Exception):
    """Base class for all errors raised by pseudoenv."""


class InadmissiblePair(EnvelopeError):
    """Two curves that do not cross exactly once (equal slope or equal shift)."""


class FamilyMismatch(EnvelopeError):
    """Curves of different families were combined in one structure."""


class OutOfSpan(EnvelopeError):
    pass


class MismatchedBoundary(EnvelopeError):
    pass


class OrderViolation(EnvelopeError):
    """Concatenation would put the segments out of the bottom-to-top order at -inf."""


class PreconditionViolation(EnvelopeError):
    """The two envelopes handed to the intersection search are not order-separated."""


class StepBudgetExceeded(EnvelopeError):
    """The intersection search ran longer than its proven step bound.

    Never expected on valid input; indicates a bug.
    """


class DuplicateId(EnvelopeError):
    pass


class UnknownId(EnvelopeError):
    pass


class EmptyStructure(EnvelopeError):
    pass


class InvariantViolation(AssertionError):
    """A structural invariant failed during validation; the message names it."""
