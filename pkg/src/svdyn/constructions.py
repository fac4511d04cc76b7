"""Named example relations and the desingularization of fat graphs."""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from svdyn.classify import classify
from svdyn.dynamics import Cycle
from svdyn.errors import UsageError
from svdyn.intervals import IntervalSet, Span
from svdyn.pieces import Piece
from svdyn.rational import midpoint
from svdyn.relation import (
    PLRelation,
    contains_piece,
    contains_point,
    image,
    normalize,
    relation,
    slice_at,
)

logger = logging.getLogger(__name__)

Point = tuple[Fraction, Fraction]


def _polyline(*vertices: tuple) -> list[Piece]:
    return [Piece.segment(*a, *b) for a, b in zip(vertices, vertices[1:])]


def _corpus() -> dict[str, PLRelation]:
    q = Fraction
    return {
        "ex2_10": relation(Piece.segment(0, 0, 1, 1), Piece.segment(0, 1, 1, 0)),
        "ex2_11": relation(Piece.segment(0, 0, 1, q(1, 3)), Piece.segment(q(1, 2), 0, 1, 1)),
        "ex2_15": relation(Piece.segment(0, 0, 1, 0), Piece.segment(1, 0, 1, 1)),
        # zigzag between 0 and 1/2 near 0, then a rising tail through 1
        "ex2_9_pl": relation(*_polyline(
            (0, q(1, 4)), (q(1, 20), q(1, 2)), (q(1, 10), 0), (q(3, 20), q(1, 2)),
            (q(1, 5), 0), (q(8, 25), q(1, 4)), (q(19, 20), 1), (1, q(7, 8)),
        )),
        "tent": relation(Piece.segment(0, 0, q(1, 2), 1), Piece.segment(q(1, 2), 1, 1, 0)),
        "diag": relation(Piece.segment(0, 0, 1, 1)),
        "diag_plus_point": relation(Piece.segment(0, 0, 1, 1), Piece.point(0, 1)),
        "square": relation(Piece.rect(0, 0, 1, 1)),
    }


CORPUS_NAMES = tuple(sorted(_corpus()))


def corpus_names() -> tuple[str, ...]:
    return CORPUS_NAMES


def corpus(name: str) -> PLRelation:
    relations = _corpus()
    if name not in relations:
        raise UsageError(f"unknown corpus relation {name!r}; choose from {', '.join(CORPUS_NAMES)}")
    return relations[name]


@dataclass(frozen=True)
class DesingularizationPlan:
    """Components of the rect region, their mandatory points, and the routed paths."""

    components: tuple[Span, ...]
    mandatory: tuple[tuple[Point, ...], ...]
    paths: tuple[tuple[Point, ...], ...]

    def pieces(self) -> list[Piece]:
        out = []
        for path in self.paths:
            out.extend(Piece.segment(*a, *b) for a, b in zip(path, path[1:]))
        return out


def _boundary_value(rel: PLRelation, x: Fraction, cycle_values: dict[Fraction, Fraction]) -> Fraction:
    if x in cycle_values:
        return cycle_values[x]
    return slice_at(rel, x).lo


def _route(rel: PLRelation, start: Point, end: Point, band: Span) -> list[Point]:
    """Vertices after ``start`` joining it to ``end`` by non-horizontal segments inside R."""

    def fits(a: Point, b: Point) -> bool:
        return a[1] != b[1] and contains_piece(rel, Piece.segment(*a, *b))

    if fits(start, end):
        return [end]
    x = midpoint(start[0], end[0])
    low, high = band
    for y in (high, low, midpoint(low, high), midpoint(low, start[1]), midpoint(start[1], high)):
        vertex = (x, y)
        if fits(start, vertex) and fits(vertex, end):
            return [vertex, end]
    raise UsageError(f"cannot route a light path from {start} to {end} inside the graph")


def plan_desingularization(rel: PLRelation, cycle: Cycle) -> DesingularizationPlan:
    points = cycle.points
    if len(set(points)) != len(points):
        raise UsageError("desingularization needs a cycle of pairwise distinct points")
    components = IntervalSet.of((r.x_lo, r.x_hi) for r in rel.rects)
    # an IVP relation with a rect is all rect columns over [0, 1]
    if not components.is_unit() or any(p.kind != "rect" for p in rel.pieces):
        raise UsageError("desingularization needs rects spanning [0, 1] and nothing else")
    cycle_values = dict(cycle.pairs())

    mandatory_all, paths = [], []
    for lo, hi in components:
        band = image(rel, IntervalSet.closed(lo, hi))
        top, bottom = band.hi, band.lo
        mandatory: dict[Fraction, Fraction] = {
            x: y for x, y in cycle_values.items() if lo <= x <= hi
        }
        mandatory[lo] = _boundary_value(rel, lo, cycle_values)
        mandatory[hi] = _boundary_value(rel, hi, cycle_values)

        taken = sorted(mandatory)
        gap_lo, gap_hi = taken[0], taken[1]
        third = (gap_hi - gap_lo) / 3
        anchor_max, anchor_min = gap_lo + third, gap_hi - third
        for x, y in ((anchor_max, top), (anchor_min, bottom)):
            if not contains_point(rel, x, y):
                raise UsageError(f"extremal value {y} is not attained at x = {x}")
            mandatory[x] = y

        ordered = sorted(mandatory.items())
        path = [ordered[0]]
        for point in ordered[1:]:
            path.extend(_route(rel, path[-1], point, (bottom, top)))
        logger.debug(f"Component [{lo}, {hi}]: {len(ordered)} mandatory points, {len(path)} vertices")
        mandatory_all.append(tuple(ordered))
        paths.append(tuple(path))

    return DesingularizationPlan(
        components=components.intervals,
        mandatory=tuple(mandatory_all),
        paths=tuple(paths),
    )


def desingularize(rel: PLRelation, cycle: Cycle | Sequence[Fraction]) -> PLRelation:
    """Light, empty-interior, almost nonfissile g inside R that keeps the cycle."""
    points = cycle.points if isinstance(cycle, Cycle) else cycle
    cycle = Cycle.validated(rel, points)
    report = classify(rel)
    if not report.ivp:
        raise UsageError("desingularization needs a relation with the intermediate value property")
    if not report.surjective:
        raise UsageError("desingularization needs a surjective relation")
    if not rel.rects:
        return rel

    plan = plan_desingularization(rel, cycle)
    g = normalize(plan.pieces())
    Cycle.validated(g, cycle.points)
    logger.info(f"Desingularized {len(rel.pieces)} pieces into {len(g.pieces)}")
    return g
