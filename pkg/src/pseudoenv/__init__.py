"""Fully dynamic lower envelopes of pseudo-lines with exact rational arithmetic."""
from .dynamic_envelope import DynamicEnvelope
from .envelope_tree import EnvelopeSegment, EnvelopeTree, join, split_at
from .errors import (
    DuplicateId,
    EmptyStructure,
    EnvelopeError,
    FamilyMismatch,
    InadmissiblePair,
    InvariantViolation,
    MismatchedBoundary,
    OrderViolation,
    OutOfSpan,
    PreconditionViolation,
    StepBudgetExceeded,
    UnknownId,
)
from .geometry import NEG_INF, POS_INF, Line, Parabola, Point, PseudoLine, below_at_neg_inf, cross, evaluate
from .tentative_search import SearchTrace, classify, find_intersection

__all__ = [
    "DynamicEnvelope", "EnvelopeSegment", "EnvelopeTree", "join", "split_at",
    "DuplicateId", "EmptyStructure", "EnvelopeError", "FamilyMismatch", "InadmissiblePair",
    "InvariantViolation", "MismatchedBoundary", "OrderViolation", "OutOfSpan",
    "PreconditionViolation", "StepBudgetExceeded", "UnknownId",
    "NEG_INF", "POS_INF", "Line", "Parabola", "Point", "PseudoLine", "below_at_neg_inf", "cross", "evaluate",
    "SearchTrace", "classify", "find_intersection",
]
