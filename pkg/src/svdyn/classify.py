"""Decision procedures for the properties of a PL set-valued map.

Everything is decided on the event set E of the relation (piece endpoints,
pairwise intersection extents, 0 and 1) plus one midpoint per gap. Between
consecutive events every piece meeting a vertical line spans the whole gap,
so slices move affinely and no property except weak IVP can change there.
Weak IVP looks at f over a whole interval [x1, x2], whose components can
merge inside a gap; it is decided on a finer arrangement of merge lines.

IVP is decided twice: once as weak continuity plus connected values, once by
the strip test (every G(f) n [a, b] x [0, 1] connected and equal to the closure
of its open-strip part). The two must agree; disagreement raises
``InvariantError``.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Any, Iterator, Optional

from svdyn.errors import InvariantError
from svdyn.intervals import FissileSet, IntervalSet, Span
from svdyn.pieces import Piece
from svdyn.rational import ONE, ZERO, midpoint, pq
from svdyn.relation import (
    PLRelation,
    contains_piece,
    domain_is_full,
    image,
    is_surjective,
    left_limit,
    normalize,
    right_limit,
    uncovered_point,
    x_projection,
)

logger = logging.getLogger(__name__)

PROPERTY_NAMES = (
    "domain_full",
    "surjective",
    "graph_connected",
    "interior_empty",
    "slices_connected",
    "weakly_continuous",
    "ivp",
    "weak_ivp",
    "light",
    "almost_nonfissile",
)


@dataclass(frozen=True)
class PropertyReport:
    """Properties of one relation. Function-only predicates are None when the domain is not full."""

    domain_full: bool
    surjective: bool
    graph_connected: bool
    interior_empty: bool
    slices_connected: Optional[bool] = None
    weakly_continuous: Optional[bool] = None
    ivp: Optional[bool] = None
    weak_ivp: Optional[bool] = None
    light: Optional[bool] = None
    almost_nonfissile: Optional[bool] = None
    fissile_xset: Optional[FissileSet] = None
    witnesses: dict[str, dict[str, Any]] = field(default_factory=dict)

    def value(self, name: str) -> Optional[bool]:
        if name not in PROPERTY_NAMES:
            raise KeyError(name)
        return getattr(self, name)


class UnionFind:
    def __init__(self, items):
        self.parent = {item: item for item in items}

    def find(self, item):
        root = item
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[item] != root:
            self.parent[item], item = root, self.parent[item]
        return root

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[rb] = ra
        return True

    def count(self) -> int:
        return len({self.find(item) for item in self.parent})


class EventSweep:
    """Slices and one-sided limits of a relation at its events and gap samples."""

    def __init__(self, rel: PLRelation):
        self.rel = rel
        self.events = rel.events
        self.samples = rel.samples
        self._slices: dict[Fraction, IntervalSet] = {}
        self._images: dict[tuple[Fraction, Fraction], IntervalSet] = {}

    def slice(self, x: Fraction) -> IntervalSet:
        if x not in self._slices:
            self._slices[x] = image(self.rel, IntervalSet.point(x))
        return self._slices[x]

    def image_between(self, a: Fraction, b: Fraction) -> IntervalSet:
        key = (min(a, b), max(a, b))
        if key not in self._images:
            self._images[key] = image(self.rel, IntervalSet.closed(*key))
        return self._images[key]

    def gaps(self) -> list[tuple[Fraction, Fraction]]:
        return list(zip(self.events, self.events[1:]))

    def candidates(self) -> list[Fraction]:
        """Events first, then gap samples, each ascending."""
        return list(self.events) + list(self.samples)


def graph_connected(rel: PLRelation) -> tuple[bool, int]:
    groups = UnionFind(range(len(rel.pieces)))
    for i, j in rel.intersections:
        groups.union(i, j)
    count = groups.count()
    return count <= 1, count


def slices_connected(sweep: EventSweep) -> tuple[bool, Optional[dict]]:
    for x in sweep.candidates():
        values = sweep.slice(x)
        if not values.is_connected():
            return False, {"x": x, "slice": str(values)}
    return True, None


def weakly_continuous(sweep: EventSweep) -> tuple[bool, Optional[dict]]:
    """Two-sided on (0, 1), from the right at 0 and from the left at 1."""
    for x in sweep.events:
        values = sweep.slice(x)
        sides = []
        if x > ZERO:
            sides.append(("left", left_limit(sweep.rel, x)))
        if x < ONE:
            sides.append(("right", right_limit(sweep.rel, x)))
        for side, limit in sides:
            outside = values.point_outside(limit)
            if outside is not None:
                return False, {"x": x, "side": side, "y": outside}
    return True, None


def strip_test(sweep: EventSweep) -> tuple[bool, Optional[dict]]:
    """Check G(f) n V[a, b] is connected and equals the closure of G(f) n V(a, b)."""
    rel = sweep.rel
    points = sorted(set(sweep.candidates()))
    strips = [(a, b) for i, a in enumerate(points) for b in points[i + 1:]]
    for lo, hi in sweep.gaps():
        third = (hi - lo) / 3
        strips.append((lo + third, hi - third))
    meeting = rel.intersections
    for a, b in strips:
        active = [i for i, p in enumerate(rel.pieces) if p.x_lo <= b and p.x_hi >= a]
        groups = UnionFind(active)
        for (i, j), common in meeting.items():
            if common.x_lo <= b and common.x_hi >= a:
                groups.union(i, j)
        if groups.count() > 1:
            return False, {"a": a, "b": b, "reason": "disconnected"}
        inner, edges = [], []
        for i in active:
            p = rel.pieces[i]
            lo, hi = max(p.x_lo, a), min(p.x_hi, b)
            if lo == hi and lo in (a, b):
                edges.append((lo, p))
            else:
                inner.append(p)
        for x, p in edges:
            closure = IntervalSet.of(s for s in (q.image(x, x) for q in inner) if s is not None)
            extra = IntervalSet.of([p.image(x, x)])
            if not extra.issubset(closure):
                return False, {"a": a, "b": b, "reason": "not closure of open strip", "x": x}
    return True, None


def weak_ivp(sweep: EventSweep) -> tuple[bool, Optional[dict]]:
    """For x1 != x2 and y1 in f(x1), some y2 in f(x2) with [y1, y2] inside f[conv(x1, x2)].

    Equivalently the component of f[conv(x1, x2)] containing y1 meets f(x2).
    Each slice component of f(x1) lies in a single such component, so y1 is
    quantified exactly. Events and gap samples are tried first; then every
    pair of gaps is swept with ``merge_samples``, which puts a point in each
    region where the components of f[conv(x1, x2)] keep their shape.
    """
    candidates = sweep.candidates()
    for x1 in candidates:
        for x2 in candidates:
            if x2 != x1:
                witness = _escape(sweep, x1, x2)
                if witness is not None:
                    return False, witness
    seen = {(x1, x2) for x1 in candidates for x2 in candidates}
    gaps = sweep.gaps()
    for i, first in enumerate(gaps):
        for second in gaps[i:]:
            for u, v in merge_samples(sweep.rel, first, second):
                for x1, x2 in ((u, v), (v, u)):
                    if (x1, x2) in seen:
                        continue
                    seen.add((x1, x2))
                    witness = _escape(sweep, x1, x2)
                    if witness is not None:
                        return False, witness
    return True, None


def _escape(sweep: EventSweep, x1: Fraction, x2: Fraction) -> Optional[dict]:
    target = sweep.slice(x2)
    for y_lo, _ in sweep.slice(x1):
        reach = sweep.image_between(x1, x2).component_containing(y_lo)
        if not IntervalSet((reach,)).meets(target):
            return {"x1": x1, "y1": y_lo, "x2": x2}
    return None


def _event_values(rel: PLRelation, lo: Fraction, hi: Fraction) -> set[Fraction]:
    """Piece values at the events in [lo, hi]."""
    values = set()
    for e in rel.events:
        if lo <= e <= hi:
            for p in rel.pieces:
                span = p.image(e, e)
                if span is not None:
                    values.update(span)
    return values


def _tracks(rel: PLRelation, lo: Fraction, hi: Fraction) -> list[tuple[Fraction, Fraction]]:
    """(slope, intercept) of the slanted pieces spanning [lo, hi]."""
    return [(p.slope, p.intercept) for p in rel.pieces if p.is_slanted and p.x_lo <= lo and p.x_hi >= hi]


def _roots(tracks, values, lo: Fraction, hi: Fraction) -> set[Fraction]:
    roots = {(c - k) / m for m, k in tracks for c in values}
    return {x for x in roots if lo < x < hi}


def _refine(points) -> list[Fraction]:
    """Sorted points with the midpoint of each consecutive pair inserted."""
    ordered = sorted(set(points))
    out = ordered[:1]
    for a, b in zip(ordered, ordered[1:]):
        out.extend((midpoint(a, b), b))
    return out


def merge_samples(rel: PLRelation, first: Span, second: Span) -> Iterator[tuple[Fraction, Fraction]]:
    """Pairs u < v with u in the closed gap ``first`` and v in ``second``.

    Inside a pair of gaps every piece image over [u, v] has ends that are
    either fixed values at events or moving values y(u), y(v) of slanted
    pieces. Components of f[u, v] change only where a moving end meets a fixed
    value or a moving end on the other side, which cuts the (u, v) rectangle
    along finitely many lines. One pair is yielded in every face, edge and
    vertex of that arrangement.
    """
    (a1, b1), (a2, b2) = first, second
    values = _event_values(rel, a1, b2)
    near, far = _tracks(rel, a1, b1), _tracks(rel, a2, b2)
    # y_p(u) = y_q(v) solved as v = r * u + s
    moving = [(m1 / m2, (k1 - k2) / m2) for m1, k1 in near for m2, k2 in far]
    if first == second:
        moving.append((ONE, ZERO))
    crossings = {(bound - s) / r for r, s in moving if r for bound in (a2, b2)}
    crossings.update((s2 - s1) / (r1 - r2) for (r1, s1), (r2, s2) in combinations(moving, 2) if r1 != r2)
    us = {a1, b1} | _roots(near, values, a1, b1) | {u for u in crossings if a1 < u < b1}
    fixed = {a2, b2} | _roots(far, values, a2, b2)
    for u in _refine(us):
        ends = {r * u + s for r, s in moving}
        vs = fixed | {v for v in ends if a2 < v < b2}
        for v in _refine(vs):
            if v > u:
                yield u, v


def weak_ivp_fails_at(rel: PLRelation, x1: Fraction, y1: Fraction, x2: Fraction) -> bool:
    """True when (x1, y1) and x2 violate the weak intermediate value property."""
    reach = image(rel, IntervalSet.closed(min(x1, x2), max(x1, x2))).component_containing(y1)
    if reach is None:
        return False
    return not IntervalSet((reach,)).meets(image(rel, IntervalSet.point(x2)))


def light(rel: PLRelation) -> tuple[bool, Optional[dict]]:
    for p in rel.pieces:
        if p.kind == "rect":
            return False, {"piece": str(p), "y": p.y_lo}
        if p.is_horizontal:
            return False, {"piece": str(p), "y": p.y1}
    return True, None


def fissile_xset(sweep: EventSweep) -> FissileSet:
    """{x : f(x) has more than one point}."""
    points = [x for x in sweep.events if not sweep.slice(x).is_single_point()]
    gaps = [
        (lo, hi) for (lo, hi), m in zip(sweep.gaps(), sweep.samples)
        if not sweep.slice(m).is_single_point()
    ]
    return FissileSet.from_atoms(points, gaps)


def nonfissile_closure(rel: PLRelation, fissile: Optional[FissileSet] = None) -> PLRelation:
    """Closure of the graph over the x-values where f is single-valued."""
    sweep = EventSweep(rel)
    if fissile is None:
        fissile = fissile_xset(sweep)
    kept = []
    for lo, hi in sweep.gaps():
        if fissile.contains((lo + hi) / 2):
            continue
        for p in rel.pieces:
            if p.x_lo <= lo and p.x_hi >= hi:
                kept.append(p.clip(lo, hi, ZERO, ONE))
    for x in sweep.events:
        if not fissile.contains(x):
            values = sweep.slice(x)
            if values:
                kept.append(Piece.point(x, values.lo))
    return normalize(p for p in kept if p is not None)


def classify(rel: PLRelation) -> PropertyReport:
    witnesses: dict[str, dict] = {}
    connected, components = graph_connected(rel)
    if not connected:
        witnesses["graph_connected"] = {"components": components}
    rects = rel.rects
    if rects:
        witnesses["interior_empty"] = {"piece": str(rects[0])}
    surjective = is_surjective(rel)
    if not surjective:
        witnesses["surjective"] = {"image": str(image(rel, IntervalSet.unit()))}

    if not domain_is_full(rel):
        witnesses["domain_full"] = {"x": uncovered_point(x_projection(rel), ZERO, ONE)}
        logger.info("Domain is not full; skipping function-only predicates")
        return PropertyReport(
            domain_full=False,
            surjective=surjective,
            graph_connected=connected,
            interior_empty=not rects,
            witnesses=witnesses,
        )

    sweep = EventSweep(rel)
    logger.debug(f"Event sweep over {len(sweep.events)} events")
    checks = {
        "slices_connected": slices_connected(sweep),
        "weakly_continuous": weakly_continuous(sweep),
        "weak_ivp": weak_ivp(sweep),
        "light": light(rel),
    }
    for name, (ok, witness) in checks.items():
        if not ok:
            witnesses[name] = witness

    ivp = checks["slices_connected"][0] and checks["weakly_continuous"][0]
    strip_ok, strip_witness = strip_test(sweep)
    if ivp != strip_ok:
        raise InvariantError(
            "IVP criterion and strip test disagree",
            {
                "criterion": ivp,
                "strip": strip_ok,
                "strip_witness": strip_witness,
                "pieces": [str(p) for p in rel.pieces],
            },
        )
    if not ivp:
        witnesses["ivp"] = strip_witness or {}
    if ivp and not checks["weak_ivp"][0]:
        raise InvariantError(
            "ivp holds but weak_ivp does not",
            {"witness": checks["weak_ivp"][1], "pieces": [str(p) for p in rel.pieces]},
        )

    fissile = fissile_xset(sweep)
    closure = nonfissile_closure(rel, fissile)
    anf = closure == rel
    if not anf:
        missing = next(p for p in rel.pieces if not contains_piece(closure, p))
        witnesses["almost_nonfissile"] = {"piece": str(missing)}

    return PropertyReport(
        domain_full=True,
        surjective=surjective,
        graph_connected=connected,
        interior_empty=not rects,
        slices_connected=checks["slices_connected"][0],
        weakly_continuous=checks["weakly_continuous"][0],
        ivp=ivp,
        weak_ivp=checks["weak_ivp"][0],
        light=checks["light"][0],
        almost_nonfissile=anf,
        fissile_xset=fissile,
        witnesses=witnesses,
    )


def witness_json(witness: dict[str, Any]) -> dict[str, Any]:
    return {k: pq(v) if isinstance(v, Fraction) else v for k, v in witness.items()}
