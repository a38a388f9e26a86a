"""Exact pseudo-line kernel.

All coordinates are ``gmpy2.mpq`` rationals, so every predicate below is
decided exactly.  Two families are built in:

* :class:`Line` -- ``y = slope * x + intercept``
* :class:`Parabola` -- ``y = (x - shift)**2 + offset``

Any other family of x-monotone curves that pairwise cross exactly once can be
plugged in by subclassing :class:`PseudoLine`.
"""
from __future__ import annotations

import enum
import functools
import re
from abc import ABC, abstractmethod
from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Iterable

from gmpy2 import mpq

from .errors import EnvelopeError, FamilyMismatch, InadmissiblePair

Rational = type(mpq())

_RATIONAL_RE = re.compile(r"^[+-]?\d+(/\d+)?$")


def rational(value) -> Rational:
    """Coerce an int, Fraction, mpq or ``"p/q"`` string to an exact rational."""
    if isinstance(value, Rational):
        return value
    if isinstance(value, str):
        return parse_rational(value)
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    if isinstance(value, int):
        return mpq(value)
    raise TypeError(f"cannot use {value!r} as an exact rational")


def parse_rational(text: str) -> Rational:
    text = text.strip()
    if not _RATIONAL_RE.match(text):
        raise ValueError(f"not a rational literal: {text!r}")
    num, _, den = text.partition("/")
    if den and int(den) == 0:
        raise ValueError(f"zero denominator: {text!r}")
    return mpq(int(num), int(den) if den else 1)


def format_rational(q: Rational) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


class Kind(enum.Enum):
    FINITE = "finite"
    NEG_INF = "-inf"
    POS_INF = "+inf"


class Point:
    """A planar point with exact coordinates, or one of the two sentinels.

    The sentinels ``NEG_INF`` and ``POS_INF`` stand for the open ends of an
    unbounded envelope segment. They carry no coordinates and count as lying
    strictly below every curve.
    """

    __slots__ = ("kind", "x", "y")

    def __init__(self, x, y):
        self.kind = Kind.FINITE
        self.x = x if type(x) is Rational else rational(x)
        self.y = y if type(y) is Rational else rational(y)

    @classmethod
    def _sentinel(cls, kind: Kind) -> Point:
        p = object.__new__(cls)
        p.kind = kind
        p.x = None
        p.y = None
        return p

    @property
    def finite(self) -> bool:
        return self.kind is Kind.FINITE

    def __eq__(self, other):
        if not isinstance(other, Point):
            return NotImplemented
        return self.kind is other.kind and self.x == other.x and self.y == other.y

    def __hash__(self):
        return hash((self.kind, self.x, self.y))

    def __repr__(self):
        if self.kind is not Kind.FINITE:
            return f"Point({self.kind.value})"
        return f"Point({format_rational(self.x)}, {format_rational(self.y)})"

    def __str__(self):
        if self.kind is not Kind.FINITE:
            return self.kind.value
        return f"({format_rational(self.x)},{format_rational(self.y)})"


NEG_INF = Point._sentinel(Kind.NEG_INF)
POS_INF = Point._sentinel(Kind.POS_INF)


def x_less(p: Point, x) -> bool:
    """``p.x < x`` with the sentinels read as -inf / +inf."""
    if p.kind is Kind.FINITE:
        return p.x < x
    return p.kind is Kind.NEG_INF


def x_greater(p: Point, x) -> bool:
    if p.kind is Kind.FINITE:
        return p.x > x
    return p.kind is Kind.POS_INF


def point_x_less(p: Point, q: Point) -> bool:
    """Strict x-order between two points, sentinels included."""
    if q.kind is Kind.FINITE:
        return x_less(p, q.x)
    if q.kind is Kind.POS_INF:
        return p.kind is not Kind.POS_INF
    return False


def format_x(p: Point) -> str:
    if p.kind is Kind.FINITE:
        return format_rational(p.x)
    return p.kind.value


class PseudoLine(ABC):
    """Contract every pseudo-line family implements.

    Subclasses must guarantee that any two admissible members cross exactly
    once, at a point with rational coordinates, and must raise
    :class:`InadmissiblePair` from :meth:`crossing` and :meth:`precedes`
    otherwise.
    """

    id: Hashable

    @abstractmethod
    def at(self, x):
        """Exact y-coordinate at ``x``."""

    @abstractmethod
    def crossing(self, other: PseudoLine) -> Point:
        """The unique crossing with a member of the same family."""

    @abstractmethod
    def precedes(self, other: PseudoLine) -> bool:
        """True iff ``self`` is below ``other`` left of their crossing."""

    def crossing_x(self, other: PseudoLine):
        return self.crossing(other).x

    def order_value(self):
        """Optional sort key agreeing with :meth:`precedes`; None if unavailable."""
        return None

    @property
    def family(self) -> type:
        return type(self)


@dataclass(frozen=True)
class Line(PseudoLine):
    id: Hashable
    slope: Rational
    intercept: Rational

    def __post_init__(self):
        if type(self.slope) is not Rational:
            object.__setattr__(self, "slope", rational(self.slope))
        if type(self.intercept) is not Rational:
            object.__setattr__(self, "intercept", rational(self.intercept))

    def at(self, x):
        return self.slope * x + self.intercept

    def crossing_x(self, other: Line) -> Rational:
        da = self.slope - other.slope
        if not da:
            raise InadmissiblePair(f"lines {self.id!r} and {other.id!r} share slope {self.slope}")
        return (other.intercept - self.intercept) / da

    def crossing(self, other: Line) -> Point:
        x = self.crossing_x(other)
        return Point(x, self.slope * x + self.intercept)

    def order_value(self) -> Rational:
        return -self.slope

    def precedes(self, other: Line) -> bool:
        if self.slope == other.slope:
            raise InadmissiblePair(f"lines {self.id!r} and {other.id!r} share slope {self.slope}")
        return self.slope > other.slope

    def params(self) -> tuple:
        return (self.slope, self.intercept)


@dataclass(frozen=True)
class Parabola(PseudoLine):
    """Unit parabola ``y = (x - shift)**2 + offset``."""

    id: Hashable
    shift: Rational
    offset: Rational

    def __post_init__(self):
        if type(self.shift) is not Rational:
            object.__setattr__(self, "shift", rational(self.shift))
        if type(self.offset) is not Rational:
            object.__setattr__(self, "offset", rational(self.offset))

    def at(self, x):
        d = x - self.shift
        return d * d + self.offset

    def crossing_x(self, other: Parabola) -> Rational:
        # the difference of two unit parabolas is linear in x
        dc = other.shift - self.shift
        if not dc:
            raise InadmissiblePair(f"parabolas {self.id!r} and {other.id!r} share shift {self.shift}")
        return (other.shift * other.shift - self.shift * self.shift + other.offset - self.offset) / (2 * dc)

    def crossing(self, other: Parabola) -> Point:
        x = self.crossing_x(other)
        return Point(x, self.at(x))

    def order_value(self) -> Rational:
        return self.shift

    def precedes(self, other: Parabola) -> bool:
        if self.shift == other.shift:
            raise InadmissiblePair(f"parabolas {self.id!r} and {other.id!r} share shift {self.shift}")
        return self.shift < other.shift

    def params(self) -> tuple:
        return (self.shift, self.offset)


FAMILIES = {"lines": Line, "parabolas": Parabola}


def family_name(family: type) -> str:
    for name, cls in FAMILIES.items():
        if cls is family:
            return name
    return family.__name__


def _check_family(a: PseudoLine, b: PseudoLine) -> None:
    if type(a) is not type(b):
        raise FamilyMismatch(f"{type(a).__name__} {a.id!r} vs {type(b).__name__} {b.id!r}")


def evaluate(pl: PseudoLine, x) -> Rational:
    return pl.at(x)


def cross(pl1: PseudoLine, pl2: PseudoLine) -> Point:
    if type(pl1) is not type(pl2):
        _check_family(pl1, pl2)
    return pl1.crossing(pl2)


def below_at_neg_inf(pl1: PseudoLine, pl2: PseudoLine) -> bool:
    if type(pl1) is not type(pl2):
        _check_family(pl1, pl2)
    return pl1.precedes(pl2)


def min2_at(pl_a: PseudoLine, pl_b: PseudoLine, x) -> Rational:
    ya = pl_a.at(x)
    yb = pl_b.at(x)
    return ya if ya <= yb else yb


def order_key():
    """Sort key for the bottom-to-top order at x = -inf."""

    def cmp(a, b):
        if a is b:
            return 0
        return -1 if below_at_neg_inf(a, b) else 1

    return functools.cmp_to_key(cmp)


def sort_by_order(lines: Iterable[PseudoLine]) -> list[PseudoLine]:
    """Sort into the order at -inf; raises InadmissiblePair on ties."""
    lines = list(lines)
    if lines and all(type(pl) is type(lines[0]) for pl in lines) and lines[0].order_value() is not None:
        out = sorted(lines, key=lambda pl: pl.order_value())
    else:
        out = sorted(lines, key=order_key())
    for a, b in zip(out, out[1:]):
        below_at_neg_inf(a, b)
    return out


def make_pseudoline(family: str | type, ident, p1, p2) -> PseudoLine:
    cls = FAMILIES.get(family, family) if isinstance(family, str) else family
    if not isinstance(cls, type) or not issubclass(cls, PseudoLine):
        raise EnvelopeError(f"unknown family {family!r}")
    return cls(ident, rational(p1), rational(p2))
