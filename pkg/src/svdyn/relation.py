"""Piecewise-linear closed relations on the unit square.

A ``PLRelation`` is the canonical form of a finite union of pieces: rect
unions are rebuilt as maximal vertical slabs, segments are cut back to the
parts outside the rects and merged along shared lines, and points already
covered by another piece are dropped. Two relations are equal exactly when
their point sets are equal.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Iterable, Iterator, Optional

from svdyn.errors import RestrictionError, UsageError
from svdyn.intervals import IntervalSet, Span
from svdyn.pieces import Piece, compose_pieces
from svdyn.rational import ONE, ZERO, midpoint

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PLRelation:
    pieces: tuple[Piece, ...]

    def __iter__(self) -> Iterator[Piece]:
        return iter(self.pieces)

    def __len__(self) -> int:
        return len(self.pieces)

    @cached_property
    def intersections(self) -> dict[tuple[int, int], Piece]:
        """Nonempty pairwise intersections, keyed by piece index pairs i < j."""
        out = {}
        for (i, p), (j, q) in combinations(enumerate(self.pieces), 2):
            if p.x_hi < q.x_lo or q.x_hi < p.x_lo or p.y_hi < q.y_lo or q.y_hi < p.y_lo:
                continue
            common = p.intersect(q)
            if common is not None:
                out[(i, j)] = common
        return out

    @cached_property
    def events(self) -> tuple[Fraction, ...]:
        """x-values where slice structure can change; always includes 0 and 1."""
        xs = {ZERO, ONE}
        for p in self.pieces:
            xs.update((p.x_lo, p.x_hi))
        for common in self.intersections.values():
            xs.update((common.x_lo, common.x_hi))
        return tuple(sorted(xs))

    @cached_property
    def samples(self) -> tuple[Fraction, ...]:
        """One midpoint per open gap between consecutive events."""
        return tuple(midpoint(a, b) for a, b in zip(self.events, self.events[1:]))

    @property
    def rects(self) -> list[Piece]:
        return [p for p in self.pieces if p.kind == "rect"]

    def slice(self, x: Fraction) -> IntervalSet:
        return slice_at(self, x)

    def __str__(self) -> str:
        return "\n".join(str(p) for p in self.pieces)


def normalize(pieces: Iterable[Piece]) -> PLRelation:
    pieces = list(pieces)
    rects = _union_rects([p for p in pieces if p.kind == "rect"])
    segments = []
    for p in pieces:
        if p.kind == "seg":
            segments.extend(_outside_rects(p, rects))
    segments = _merge_collinear(segments)
    covering = rects + segments
    points = {
        p for p in pieces
        if p.kind == "pt" and not any(q.contains(p.x1, p.y1) for q in covering)
    }
    ordered = sorted(list(points) + segments + rects, key=Piece.sort_key)
    return PLRelation(tuple(ordered))


def relation(*pieces: Piece) -> PLRelation:
    return normalize(pieces)


def _union_rects(rects: list[Piece]) -> list[Piece]:
    xs = sorted({v for r in rects for v in (r.x_lo, r.x_hi)})
    slabs: list[tuple[Fraction, Fraction, IntervalSet]] = []
    for u, v in zip(xs, xs[1:]):
        ys = IntervalSet.of((r.y_lo, r.y_hi) for r in rects if r.x_lo <= u and r.x_hi >= v)
        if ys.is_empty():
            continue
        if slabs and slabs[-1][1] == u and slabs[-1][2] == ys:
            slabs[-1] = (slabs[-1][0], v, ys)
        else:
            slabs.append((u, v, ys))
    return [Piece.box(u, v, lo, hi) for u, v, ys in slabs for lo, hi in ys]


def _outside_rects(segment: Piece, rects: list[Piece]) -> list[Piece]:
    """Closures of the parts of a segment not covered by the rect region."""
    covered = IntervalSet.of(
        span for span in (segment.covered_params(r) for r in rects) if span is not None
    )
    parts = []
    start = ZERO
    for lo, hi in covered:
        if lo > start:
            parts.append(segment.subsegment(start, lo))
        start = max(start, hi)
    if start < ONE:
        parts.append(segment.subsegment(start, ONE))
    return parts


def _merge_collinear(segments: list[Piece]) -> list[Piece]:
    lines: dict[tuple, list[Span]] = {}
    for s in segments:
        lines.setdefault(s.line_key(), []).append(s.line_params())
    merged = []
    for key, spans in lines.items():
        for lo, hi in IntervalSet.of(spans):
            if key[0] == "v":
                merged.append(Piece.segment(key[1], lo, key[1], hi))
            else:
                _, slope, intercept = key
                merged.append(Piece.segment(lo, slope * lo + intercept, hi, slope * hi + intercept))
    return merged


def transpose(rel: PLRelation) -> PLRelation:
    return normalize(p.transpose() for p in rel.pieces)


def image(rel: PLRelation, values: IntervalSet) -> IntervalSet:
    spans = []
    for p in rel.pieces:
        for lo, hi in values:
            span = p.image(lo, hi)
            if span is not None:
                spans.append(span)
    return IntervalSet.of(spans)


def slice_at(rel: PLRelation, x: Fraction) -> IntervalSet:
    return image(rel, IntervalSet.point(x))


def preimage(rel: PLRelation, values: IntervalSet) -> IntervalSet:
    spans = []
    for p in rel.pieces:
        for lo, hi in values:
            span = p.preimage(lo, hi)
            if span is not None:
                spans.append(span)
    return IntervalSet.of(spans)


def left_limit(rel: PLRelation, x: Fraction) -> IntervalSet:
    return IntervalSet.of(s for s in (p.left_limit(x) for p in rel.pieces) if s is not None)


def right_limit(rel: PLRelation, x: Fraction) -> IntervalSet:
    return IntervalSet.of(s for s in (p.right_limit(x) for p in rel.pieces) if s is not None)


def compose(first: PLRelation, then: PLRelation) -> PLRelation:
    """Apply ``first``, then ``then``."""
    out = []
    for p in first.pieces:
        for q in then.pieces:
            if p.y_hi < q.x_lo or q.x_hi < p.y_lo:
                continue
            piece = compose_pieces(p, q)
            if piece is not None:
                out.append(piece)
    return normalize(out)


def x_projection(rel: PLRelation) -> IntervalSet:
    return IntervalSet.of((p.x_lo, p.x_hi) for p in rel.pieces)


def uncovered_point(covered: IntervalSet, lo: Fraction, hi: Fraction) -> Optional[Fraction]:
    """Smallest-first point of [lo, hi] outside ``covered``, or None."""
    part = covered.intersection(IntervalSet.closed(lo, hi))
    if part.is_empty() or part.lo > lo:
        return lo
    if len(part) > 1:
        return midpoint(part.intervals[0][1], part.intervals[1][0])
    if part.hi < hi:
        return hi
    return None


def domain_is_full(rel: PLRelation) -> bool:
    return x_projection(rel).is_unit()


def is_surjective(rel: PLRelation) -> bool:
    return image(rel, IntervalSet.unit()).is_unit()


def contains_point(rel: PLRelation, x: Fraction, y: Fraction) -> bool:
    return any(p.contains(x, y) for p in rel.pieces)


def contains_piece(rel: PLRelation, piece: Piece) -> bool:
    """Exact point-set containment of one piece in the relation."""
    if piece.kind == "pt":
        return contains_point(rel, piece.x1, piece.y1)
    if piece.kind == "seg":
        covered = IntervalSet.of(
            span for span in (piece.covered_params(q) for q in rel.pieces) if span is not None
        )
        return covered == IntervalSet.unit()
    clipped = [r.clip(*piece.bounds) for r in rel.rects]
    return normalize(c for c in clipped if c is not None).pieces == (piece,)


def restrict(
    rel: PLRelation,
    xs: Span,
    ys: Span,
    rescale: bool = False,
) -> PLRelation:
    """R intersected with I x J; every x in I must keep a value in J."""
    a, b = xs
    c, d = ys
    if a > b or c > d:
        raise UsageError(f"restriction intervals must satisfy lo <= hi, got {xs} and {ys}")
    clipped = normalize(
        piece for piece in (p.clip(a, b, c, d) for p in rel.pieces) if piece is not None
    )
    witness = uncovered_point(x_projection(clipped), a, b)
    if witness is not None:
        raise RestrictionError(f"f({witness}) misses [{c}, {d}]", x=witness)
    if not rescale:
        return clipped
    if a == b or c == d:
        raise UsageError("cannot rescale onto a degenerate interval")
    logger.debug(f"Rescaling [{a}, {b}] x [{c}, {d}] onto the unit square")

    def sx(v):
        return (v - a) / (b - a)

    def sy(v):
        return (v - c) / (d - c)

    scaled = []
    for p in clipped.pieces:
        if p.is_box:
            scaled.append(Piece.box(sx(p.x_lo), sx(p.x_hi), sy(p.y_lo), sy(p.y_hi)))
        else:
            scaled.append(Piece.segment(sx(p.x1), sy(p.y1), sx(p.x2), sy(p.y2)))
    return normalize(scaled)
