"""Orbits of set-valued PL maps: iterated images, cycles, Sarkovskii, towers."""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Optional, Sequence

from svdyn import config
from svdyn.classify import classify
from svdyn.errors import UsageError
from svdyn.intervals import IntervalSet
from svdyn.pieces import Piece
from svdyn.rational import ONE, ZERO
from svdyn.relation import PLRelation, domain_is_full, image, is_surjective, preimage, slice_at

logger = logging.getLogger(__name__)

# Candidate combinations tried per feasible polytope before giving up on it.
MAX_REPRESENTATIVE_TRIES = 10_000


def iterate_image(rel: PLRelation, values: IntervalSet, n: int) -> IntervalSet:
    """f^n[I] by n successive images."""
    if n < 0:
        raise UsageError(f"iteration count must be >= 0, got {n}")
    for _ in range(n):
        if values.is_empty():
            break
        values = image(rel, values)
    return values


def proper_divisors(n: int) -> list[int]:
    return [d for d in range(1, n // 2 + 1) if n % d == 0]


def exact_period(points: Sequence[Fraction]) -> int:
    p = len(points)
    for d in proper_divisors(p):
        if all(points[(i + d) % p] == points[i] for i in range(p)):
            return d
    return p


def canonical_rotation(points: Sequence[Fraction]) -> tuple[Fraction, ...]:
    return min(tuple(points[i:]) + tuple(points[:i]) for i in range(len(points)))


@dataclass(frozen=True)
class Cycle:
    points: tuple[Fraction, ...]

    @property
    def period(self) -> int:
        return len(self.points)

    @classmethod
    def validated(cls, rel: PLRelation, points: Sequence[Fraction]) -> "Cycle":
        """Check x_{i+1} in f(x_i) around the cycle and that the period is exact."""
        points = tuple(Fraction(x) for x in points)
        if not points:
            raise UsageError("a cycle needs at least one point")
        p = len(points)
        for i, x in enumerate(points):
            successor = points[(i + 1) % p]
            if not slice_at(rel, x).contains(successor):
                raise UsageError(f"{successor} is not in f({x})", index=i)
        period = exact_period(points)
        if period != p:
            raise UsageError(f"sequence of length {p} has smaller period {period}")
        return cls(points)

    def canonical(self) -> "Cycle":
        return Cycle(canonical_rotation(self.points))

    def pairs(self) -> list[tuple[Fraction, Fraction]]:
        p = self.period
        return [(self.points[i], self.points[(i + 1) % p]) for i in range(p)]

    def backward_chain(self, depth: int) -> tuple[Fraction, ...]:
        """Chain (x_0, ..., x_depth) with x_{i-1} in f(x_i) running the cycle backwards."""
        p = self.period
        return tuple(self.points[(-i) % p] for i in range(depth + 1))

    def __str__(self) -> str:
        return "(" + ", ".join(str(x) for x in self.points) + ")"


@dataclass
class CycleSearch:
    period: int
    cycles: list[Cycle]
    complete: bool
    explored: int

    @property
    def none_exist(self) -> bool:
        return self.complete and not self.cycles


def _interval_candidates(lo: Fraction, hi: Fraction, period: int) -> list[Fraction]:
    if lo == hi:
        return [lo]
    n = len(proper_divisors(period)) + 1
    step = (hi - lo) / (n + 1)
    return [lo + step * j for j in range(1, n + 1)] + [lo, hi]


def _bound(expr: tuple[int, Fraction, Fraction], lo: Fraction, hi: Fraction, roots: dict) -> bool:
    """Narrow the root interval so that a*t + b stays in [lo, hi]; False when infeasible."""
    root, a, b = expr
    t_lo, t_hi = roots[root]
    if a == 0:
        return lo <= b <= hi
    ends = ((lo - b) / a, (hi - b) / a)
    t_lo = max(t_lo, min(ends))
    t_hi = min(t_hi, max(ends))
    roots[root] = (t_lo, t_hi)
    return t_lo <= t_hi


def _solve_sequence(sequence: Sequence[Piece], period: int) -> tuple[Optional[tuple], bool]:
    """Exact representative of {(x_i, x_{i+1 mod p}) in s_i}, as (points, tried_all).

    Each variable is affine in the root of its run; runs restart after every
    box constraint, which only bounds its two variables.
    """
    p = len(sequence)
    boxes = [i for i, s in enumerate(sequence) if s.is_box]
    expr: list[Optional[tuple[int, Fraction, Fraction]]] = [None] * p
    roots: dict[int, tuple[Fraction, Fraction]] = {}

    if not boxes:
        roots[0] = (ZERO, ONE)
        expr[0] = (0, ONE, ZERO)
        a, b = ONE, ZERO
        for i, s in enumerate(sequence):
            a, b = s.slope * a, s.slope * b + s.intercept
            if i + 1 < p:
                expr[i + 1] = (0, a, b)
        if a != ONE:
            t = b / (ONE - a)
            if not ZERO <= t <= ONE:
                return None, True
            roots[0] = (t, t)
        elif b != ZERO:
            return None, True
    else:
        for r in sorted({(i + 1) % p for i in boxes}):
            roots[r] = (ZERO, ONE)
            expr[r] = (r, ONE, ZERO)
            k = r
            while sequence[k].is_slanted:
                s = sequence[k]
                _, a, b = expr[k]
                nxt = (k + 1) % p
                expr[nxt] = (r, s.slope * a, s.slope * b + s.intercept)
                k = nxt

    for i, s in enumerate(sequence):
        if not _bound(expr[i], s.x_lo, s.x_hi, roots):
            return None, True
        if s.is_box and not _bound(expr[(i + 1) % p], s.y_lo, s.y_hi, roots):
            return None, True

    order = sorted(roots)
    choices = [_interval_candidates(*roots[r], period) for r in order]
    tries = 0
    for combo in product(*choices):
        tries += 1
        if tries > MAX_REPRESENTATIVE_TRIES:
            return None, False
        value = dict(zip(order, combo))
        points = tuple(a * value[root] + b for root, a, b in expr)
        if exact_period(points) == p:
            return points, True
    return None, True


def find_cycles(rel: PLRelation, period: int, budget: Optional[int] = None) -> CycleSearch:
    """All exact-period cycles, one representative per feasible piece sequence.

    ``complete`` is False when the budget of explored sequences ran out or a
    polytope was too large to settle; only a complete empty search means no
    cycle of that period exists.
    """
    if period < 1:
        raise UsageError(f"period must be positive, got {period}")
    if not domain_is_full(rel):
        raise UsageError("cycle search needs a relation with full domain")
    budget = budget or config.cycle_budget()
    pieces = rel.pieces
    found: dict[tuple[Fraction, ...], Cycle] = {}
    state = {"explored": 0, "complete": True}

    def extend(sequence: list[Piece], reach: tuple[Fraction, Fraction]) -> bool:
        if len(sequence) == period:
            first = sequence[0]
            if reach[1] < first.x_lo or reach[0] > first.x_hi:
                return True
            if state["explored"] >= budget:
                state["complete"] = False
                return False
            state["explored"] += 1
            points, settled = _solve_sequence(sequence, period)
            if not settled:
                state["complete"] = False
            if points is not None:
                cycle = Cycle.validated(rel, points).canonical()
                found.setdefault(cycle.points, cycle)
            return True
        lo, hi = reach
        for s in pieces:
            if hi < s.x_lo or lo > s.x_hi:
                continue
            nxt = s.image(max(lo, s.x_lo), min(hi, s.x_hi))
            if not extend(sequence + [s], nxt):
                return False
        return True

    extend([], (ZERO, ONE))
    if not state["complete"]:
        logger.warning(
            f"Cycle search for period {period} stopped after {state['explored']} sequences"
        )
    cycles = [found[key] for key in sorted(found)]
    return CycleSearch(period, cycles, state["complete"], state["explored"])


def sarkovskii_key(m: int) -> tuple:
    if m < 1:
        raise UsageError(f"Sarkovskii order is on positive integers, got {m}")
    power = 0
    while m % 2 == 0:
        m //= 2
        power += 1
    if m > 1:
        return (0, power, m)
    return (1, -power)


def sarkovskii_precedes(m: int, n: int) -> bool:
    """m comes strictly before n: 3, 5, 7, ..., 2*3, 2*5, ..., 4*3, ..., 8, 4, 2, 1."""
    return sarkovskii_key(m) < sarkovskii_key(n)


FOUND = "found"
NOT_FOUND = "not_found_within_budget"
VIOLATION = "violation"


@dataclass
class SpanReport:
    n: int
    max_m: int
    statuses: dict[int, str] = field(default_factory=dict)
    examples: dict[int, Cycle] = field(default_factory=dict)

    @property
    def violations(self) -> list[int]:
        return [m for m, status in self.statuses.items() if status == VIOLATION]

    @property
    def ok(self) -> bool:
        return not self.violations


def verify_sarkovskii_span(
    rel: PLRelation, n: int, max_m: int, budget: Optional[int] = None
) -> SpanReport:
    """Look for a cycle of every period m <= max_m that n precedes."""
    report = classify(rel)
    if not report.ivp:
        raise UsageError("Sarkovskii span needs a relation with the intermediate value property")
    base = find_cycles(rel, n, budget)
    if not base.cycles:
        raise UsageError(f"relation has no cycle of period {n} to start from")
    span = SpanReport(n=n, max_m=max_m)
    span.examples[n] = base.cycles[0]
    for m in range(1, max_m + 1):
        if not sarkovskii_precedes(n, m):
            continue
        search = find_cycles(rel, m, budget)
        if search.cycles:
            span.statuses[m] = FOUND
            span.examples[m] = search.cycles[0]
        elif search.complete:
            span.statuses[m] = VIOLATION
            logger.error(f"No cycle of period {m} exists although {n} precedes it")
        else:
            span.statuses[m] = NOT_FOUND
    return span


@dataclass(frozen=True)
class IntervalTower:
    levels: tuple[IntervalSet, ...]
    nested: bool
    full_at_zero: bool

    @property
    def depth(self) -> int:
        return len(self.levels) - 1


def _check_backward(rel: PLRelation, trajectory: Sequence[Fraction], name: str) -> None:
    for i in range(len(trajectory) - 1):
        if not slice_at(rel, trajectory[i + 1]).contains(trajectory[i]):
            raise UsageError(
                f"{name}[{i}] = {trajectory[i]} is not in f({name}[{i + 1}])", index=i
            )


def j_tower(rel: PLRelation, xtraj: Sequence[Fraction], ytraj: Sequence[Fraction]) -> IntervalTower:
    """Levels J_k = union over k <= n <= N of f^(n-k)(conv(x_n, y_n)) for backward trajectories."""
    if len(xtraj) != len(ytraj) or not xtraj:
        raise UsageError("trajectories must be nonempty and of equal length")
    xtraj = [Fraction(x) for x in xtraj]
    ytraj = [Fraction(y) for y in ytraj]
    _check_backward(rel, xtraj, "x")
    _check_backward(rel, ytraj, "y")
    depth = len(xtraj) - 1
    hulls = [IntervalSet.closed(min(x, y), max(x, y)) for x, y in zip(xtraj, ytraj)]

    levels = []
    for k in range(depth + 1):
        level = IntervalSet()
        for n in range(k, depth + 1):
            level = level.union(iterate_image(rel, hulls[n], n - k))
        levels.append(level)
    nested = all(
        levels[k].issubset(image(rel, levels[k + 1])) for k in range(depth)
    )
    return IntervalTower(tuple(levels), nested, levels[0].is_unit())


@dataclass(frozen=True)
class OrganicResult:
    status: str
    p: Optional[Fraction] = None
    r: Optional[int] = None
    q: Optional[Fraction] = None
    s: Optional[int] = None


def _interior_point(values: IntervalSet) -> Optional[Fraction]:
    for lo, hi in values.intersection(IntervalSet.unit()):
        if lo == hi:
            if ZERO < lo < ONE:
                return lo
        else:
            return (lo + hi) / 2
    return None


def _reach_back(rel: PLRelation, target: Fraction, max_depth: int) -> tuple[Optional[Fraction], Optional[int]]:
    """Smallest r <= max_depth with some p in (0, 1) and target in f^r(p)."""
    values = IntervalSet.point(target)
    for r in range(1, max_depth + 1):
        values = preimage(rel, values)
        if values.is_empty():
            break
        point = _interior_point(values)
        if point is not None:
            return point, r
    return None, None


def organic_sufficient(rel: PLRelation, max_depth: int) -> OrganicResult:
    """Sufficient condition: 0 in f^r(p) and 1 in f^s(q) for some p, q in (0, 1)."""
    if not classify(rel).ivp:
        raise UsageError("organic check needs a relation with the intermediate value property")
    if not is_surjective(rel):
        raise UsageError("organic check needs a surjective relation")
    p, r = _reach_back(rel, ZERO, max_depth)
    q, s = _reach_back(rel, ONE, max_depth)
    if p is None or q is None:
        return OrganicResult("unknown")
    return OrganicResult("true", p=p, r=r, q=q, s=s)
