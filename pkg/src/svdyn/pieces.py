"""Closed convex pieces of a graph in the unit square: points, segments, rects.

Points, axis-parallel segments and rects are all boxes [xa, xb] x [ya, yb];
the only other shape is a slanted segment y = m*x + c over [x1, x2]. Most
operations split on that distinction.
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from svdyn.errors import DomainError
from svdyn.rational import ONE, ZERO, RationalLike, as_rational

Span = tuple[Fraction, Fraction]

KINDS = ("pt", "seg", "rect")
_KIND_RANK = {kind: rank for rank, kind in enumerate(KINDS)}


def _coords(*values: RationalLike) -> list[Fraction]:
    out = []
    for value in values:
        try:
            q = as_rational(value)
        except (TypeError, ValueError) as e:
            raise DomainError(str(e))
        if q < ZERO or q > ONE:
            raise DomainError(f"coordinate {q} outside [0, 1]")
        out.append(q)
    return out


@dataclass(frozen=True)
class Piece:
    """Use the ``point``/``segment``/``box`` constructors; they canonicalize."""

    kind: str
    x1: Fraction
    y1: Fraction
    x2: Fraction
    y2: Fraction

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown piece kind {self.kind!r}")
        _coords(self.x1, self.y1, self.x2, self.y2)

    # constructors

    @classmethod
    def point(cls, x: RationalLike, y: RationalLike) -> "Piece":
        x, y = _coords(x, y)
        return cls("pt", x, y, x, y)

    @classmethod
    def segment(cls, x1: RationalLike, y1: RationalLike, x2: RationalLike, y2: RationalLike) -> "Piece":
        x1, y1, x2, y2 = _coords(x1, y1, x2, y2)
        if (x1, y1) == (x2, y2):
            return cls("pt", x1, y1, x1, y1)
        if (x2, y2) < (x1, y1):
            x1, y1, x2, y2 = x2, y2, x1, y1
        return cls("seg", x1, y1, x2, y2)

    @classmethod
    def box(cls, xa: RationalLike, xb: RationalLike, ya: RationalLike, yb: RationalLike) -> "Piece":
        xa, xb, ya, yb = _coords(xa, xb, ya, yb)
        xa, xb = min(xa, xb), max(xa, xb)
        ya, yb = min(ya, yb), max(ya, yb)
        if xa == xb or ya == yb:
            return cls.segment(xa, ya, xb, yb)
        return cls("rect", xa, ya, xb, yb)

    @classmethod
    def rect(cls, x1: RationalLike, y1: RationalLike, x2: RationalLike, y2: RationalLike) -> "Piece":
        """Rect from two opposite corners; degenerate input collapses to a segment or point."""
        return cls.box(x1, x2, y1, y2)

    # shape

    @property
    def is_slanted(self) -> bool:
        return self.kind == "seg" and self.x1 != self.x2 and self.y1 != self.y2

    @property
    def is_box(self) -> bool:
        return not self.is_slanted

    @property
    def is_horizontal(self) -> bool:
        return self.kind == "seg" and self.y1 == self.y2

    @property
    def is_vertical(self) -> bool:
        return self.kind == "seg" and self.x1 == self.x2

    @property
    def x_lo(self) -> Fraction:
        return self.x1

    @property
    def x_hi(self) -> Fraction:
        return self.x2

    @property
    def y_lo(self) -> Fraction:
        return min(self.y1, self.y2)

    @property
    def y_hi(self) -> Fraction:
        return max(self.y1, self.y2)

    @property
    def bounds(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.x_lo, self.x_hi, self.y_lo, self.y_hi)

    @property
    def slope(self) -> Fraction:
        return (self.y2 - self.y1) / (self.x2 - self.x1)

    @property
    def intercept(self) -> Fraction:
        return self.y1 - self.slope * self.x1

    def y_at(self, x: Fraction) -> Fraction:
        return self.y1 + self.slope * (x - self.x1)

    def sort_key(self) -> tuple:
        return (_KIND_RANK[self.kind], self.x1, self.y1, self.x2, self.y2)

    def __str__(self) -> str:
        if self.kind == "pt":
            return f"pt {self.x1} {self.y1}"
        return f"{self.kind} {self.x1} {self.y1} {self.x2} {self.y2}"

    # set operations

    def contains(self, x: Fraction, y: Fraction) -> bool:
        if not (self.x_lo <= x <= self.x_hi):
            return False
        if self.is_slanted:
            return y == self.y_at(x)
        return self.y_lo <= y <= self.y_hi

    def image(self, lo: Fraction, hi: Fraction) -> Optional[Span]:
        """y-values over x in [lo, hi], or None when the piece misses that range."""
        a = max(lo, self.x_lo)
        b = min(hi, self.x_hi)
        if a > b:
            return None
        if self.is_box:
            return (self.y_lo, self.y_hi)
        ya, yb = self.y_at(a), self.y_at(b)
        return (min(ya, yb), max(ya, yb))

    def preimage(self, lo: Fraction, hi: Fraction) -> Optional[Span]:
        return self.transpose().image(lo, hi)

    def left_limit(self, x: Fraction) -> Optional[Span]:
        """Contribution to the closure of the graph over x' < x, at x."""
        if not (self.x_lo < x <= self.x_hi):
            return None
        return self.image(x, x)

    def right_limit(self, x: Fraction) -> Optional[Span]:
        if not (self.x_lo <= x < self.x_hi):
            return None
        return self.image(x, x)

    def transpose(self) -> "Piece":
        if self.kind == "pt":
            return Piece.point(self.y1, self.x1)
        if self.kind == "seg":
            return Piece.segment(self.y1, self.x1, self.y2, self.x2)
        return Piece.box(self.y_lo, self.y_hi, self.x_lo, self.x_hi)

    def clip(self, xa: Fraction, xb: Fraction, ya: Fraction, yb: Fraction) -> Optional["Piece"]:
        """Intersection with the closed box [xa, xb] x [ya, yb]."""
        if self.is_box:
            lo_x, hi_x = max(xa, self.x_lo), min(xb, self.x_hi)
            lo_y, hi_y = max(ya, self.y_lo), min(yb, self.y_hi)
            if lo_x > hi_x or lo_y > hi_y:
                return None
            return Piece.box(lo_x, hi_x, lo_y, hi_y)
        dx = self.x2 - self.x1
        dy = self.y2 - self.y1
        t_lo = max(ZERO, (xa - self.x1) / dx)
        t_hi = min(ONE, (xb - self.x1) / dx)
        ta, tb = (ya - self.y1) / dy, (yb - self.y1) / dy
        t_lo = max(t_lo, min(ta, tb))
        t_hi = min(t_hi, max(ta, tb))
        if t_lo > t_hi:
            return None
        return self.subsegment(t_lo, t_hi)

    def at(self, t: Fraction) -> tuple[Fraction, Fraction]:
        return (self.x1 + t * (self.x2 - self.x1), self.y1 + t * (self.y2 - self.y1))

    def param_of(self, x: Fraction, y: Fraction) -> Fraction:
        """Parameter t of a point known to lie on this segment."""
        if self.x2 != self.x1:
            return (x - self.x1) / (self.x2 - self.x1)
        return (y - self.y1) / (self.y2 - self.y1)

    def subsegment(self, t_lo: Fraction, t_hi: Fraction) -> "Piece":
        return Piece.segment(*self.at(t_lo), *self.at(t_hi))

    def covered_params(self, other: "Piece") -> Optional[Span]:
        """Parameter interval of this segment lying inside ``other``."""
        common = self.intersect(other)
        if common is None:
            return None
        ta = self.param_of(common.x1, common.y1)
        tb = self.param_of(common.x2, common.y2)
        return (min(ta, tb), max(ta, tb))

    def intersect(self, other: "Piece") -> Optional["Piece"]:
        if other.is_box:
            return self.clip(*other.bounds)
        if self.is_box:
            return other.clip(*self.bounds)
        m1, m2 = self.slope, other.slope
        c1, c2 = self.intercept, other.intercept
        if m1 == m2:
            if c1 != c2:
                return None
            return self.clip(max(self.x_lo, other.x_lo), min(self.x_hi, other.x_hi), ZERO, ONE)
        x = (c2 - c1) / (m1 - m2)
        if self.x_lo <= x <= self.x_hi and other.x_lo <= x <= other.x_hi:
            return Piece.point(x, m1 * x + c1)
        return None

    def line_key(self) -> tuple:
        """Identifies the supporting line of a segment; collinear segments share it."""
        if self.is_vertical:
            return ("v", self.x1)
        return ("s", self.slope, self.intercept)

    def line_params(self) -> Span:
        if self.is_vertical:
            return (self.y1, self.y2)
        return (self.x1, self.x2)


def compose_pieces(first: Piece, then: Piece) -> Optional[Piece]:
    """{(x, z) : (x, y) in first and (y, z) in then for some y}.

    A box composed with anything is a box, which is how a horizontal segment
    followed by a vertical one produces a rect.
    """
    if first.is_box:
        values = then.image(first.y_lo, first.y_hi)
        if values is None:
            return None
        return Piece.box(first.x_lo, first.x_hi, *values)
    if then.is_box:
        xs = first.preimage(then.x_lo, then.x_hi)
        if xs is None:
            return None
        return Piece.box(*xs, then.y_lo, then.y_hi)
    part = first.clip(ZERO, ONE, then.x_lo, then.x_hi)
    if part is None:
        return None
    return Piece.segment(part.x1, then.y_at(part.y1), part.x2, then.y_at(part.y2))
