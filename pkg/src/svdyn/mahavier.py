"""Finite truncations G_n = {(x_0, ..., x_n) : x_{i-1} in f(x_i)} as cell complexes.

A cell is a chain of pieces (s_1, ..., s_n) with (x_i, x_{i-1}) in s_i. Its
solution set is a convex polytope, and because every constraint couples two
consecutive coordinates, one forward and one backward interval pass give the
exact projection of that polytope onto each coordinate. Two cells meet exactly
when the chain of pairwise piece intersections is feasible.
"""
import logging
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Optional, Sequence

from svdyn import config
from svdyn.classify import EventSweep, UnionFind, fissile_xset
from svdyn.errors import ResourceError, UsageError
from svdyn.intervals import FissileSet, FissileSpan, IntervalSet, Span
from svdyn.pieces import Piece, compose_pieces
from svdyn.rational import ONE, ZERO
from svdyn.relation import PLRelation, domain_is_full, normalize

logger = logging.getLogger(__name__)


def propagate(chain: Sequence[Piece]) -> Optional[tuple[Span, ...]]:
    """Exact per-coordinate domains (D_0, ..., D_n) of a chain, or None when infeasible."""
    domains: list[Span] = [(ZERO, ONE)]
    for s in chain:
        span = s.preimage(*domains[-1])
        if span is None:
            return None
        domains.append(span)
    for i in range(len(chain), 0, -1):
        values = chain[i - 1].image(*domains[i])
        lo = max(domains[i - 1][0], values[0])
        hi = min(domains[i - 1][1], values[1])
        if lo > hi:
            return None
        domains[i - 1] = (lo, hi)
    return tuple(domains)


def _boxes_overlap(a: Sequence[Span], b: Sequence[Span]) -> bool:
    return all(p[0] <= q[1] and q[0] <= p[1] for p, q in zip(a, b))


@dataclass(frozen=True)
class CellChain:
    pieces: tuple[int, ...]
    domains: tuple[Span, ...]

    @property
    def depth(self) -> int:
        return len(self.pieces)


@dataclass(frozen=True)
class FissileDiagnostic:
    fraction: Fraction
    cells: tuple[int, ...]


@dataclass(frozen=True)
class IrreducibilityProbe:
    """Cells on a shortest adjacency path joining two points.

    A cell-level heuristic only: ``whole_complex`` says the path needs every
    cell, which says nothing definite about the inverse limit itself.
    """

    whole_complex: bool
    cells: tuple[int, ...]


class TruncationComplex:
    def __init__(self, rel: PLRelation, depth: int, cells: list[CellChain]):
        self.rel = rel
        self.depth = depth
        self.cells = cells

    def __len__(self) -> int:
        return len(self.cells)

    def _common(self, i: int, j: int) -> Optional[Piece]:
        if i == j:
            return self.rel.pieces[i]
        return self.rel.intersections.get((min(i, j), max(i, j)))

    def meet(self, a: int, b: int) -> bool:
        """Whether the closed polytopes of cells a and b intersect."""
        first, second = self.cells[a], self.cells[b]
        if not _boxes_overlap(first.domains, second.domains):
            return False
        chain = []
        for i, j in zip(first.pieces, second.pieces):
            common = self._common(i, j)
            if common is None:
                return False
            chain.append(common)
        return propagate(chain) is not None

    @cached_property
    def adjacency(self) -> dict[int, set[int]]:
        neighbours: dict[int, set[int]] = {i: set() for i in range(len(self.cells))}
        for a, b in self._overlapping_pairs():
            if self.meet(a, b):
                neighbours[a].add(b)
                neighbours[b].add(a)
        return neighbours

    def _overlapping_pairs(self):
        """Pairs of cells whose x_0 domains overlap, by a sweep on D_0."""
        order = sorted(range(len(self.cells)), key=lambda i: self.cells[i].domains[0])
        active: list[int] = []
        for i in order:
            lo = self.cells[i].domains[0][0]
            active = [j for j in active if self.cells[j].domains[0][1] >= lo]
            for j in active:
                yield (j, i)
            active.append(i)

    def components(self) -> int:
        """Number of connected components of the union of cells."""
        groups = UnionFind(range(len(self.cells)))
        # cells differing in a single piece are the usual neighbours
        for k in range(self.depth):
            buckets: dict[tuple, list[int]] = {}
            for index, cell in enumerate(self.cells):
                key = cell.pieces[:k] + cell.pieces[k + 1:]
                buckets.setdefault(key, []).append(index)
            for members in buckets.values():
                for n, a in enumerate(members):
                    for b in members[n + 1:]:
                        if groups.find(a) != groups.find(b) and self.meet(a, b):
                            groups.union(a, b)
        if groups.count() <= 1:
            return groups.count()
        for a, b in self._overlapping_pairs():
            if groups.find(a) != groups.find(b) and self.meet(a, b):
                groups.union(a, b)
        return groups.count()

    def cell_containing(self, point: Sequence[Fraction]) -> Optional[int]:
        if len(point) != self.depth + 1:
            raise UsageError(f"chain points have {self.depth + 1} coordinates, got {len(point)}")
        for index, cell in enumerate(self.cells):
            if all(
                self.rel.pieces[s].contains(point[i + 1], point[i])
                for i, s in enumerate(cell.pieces)
            ):
                return index
        return None

    def cells_containing(self, point: Sequence[Fraction]) -> list[int]:
        return [
            index for index, cell in enumerate(self.cells)
            if all(
                self.rel.pieces[s].contains(point[i + 1], point[i])
                for i, s in enumerate(cell.pieces)
            )
        ]

    def contains(self, point: Sequence[Fraction]) -> bool:
        return self.cell_containing(point) is not None

    def project(self, k: int) -> IntervalSet:
        if not 0 <= k <= self.depth:
            raise UsageError(f"coordinate {k} outside 0..{self.depth}")
        return IntervalSet.of(cell.domains[k] for cell in self.cells)

    def shift(self) -> "TruncationComplex":
        """Forget x_0: the depth n-1 complex of the chain suffixes."""
        if self.depth < 2:
            raise UsageError("shift needs a truncation of depth at least 2")
        suffixes = sorted({cell.pieces[1:] for cell in self.cells})
        cells = []
        for chain in suffixes:
            domains = propagate([self.rel.pieces[i] for i in chain])
            if domains is not None:
                cells.append(CellChain(chain, domains))
        return TruncationComplex(self.rel, self.depth - 1, cells)

    def _clipped(self, cell: CellChain, k: int) -> Piece:
        """s_k cut down to D_k x D_{k-1}."""
        piece = self.rel.pieces[cell.pieces[k - 1]]
        return piece.clip(*cell.domains[k], *cell.domains[k - 1])

    def projection_pieces(self, i: int, j: int) -> list[Piece]:
        """Each cell's image under (x_0, ..., x_n) -> (x_i, x_j)."""
        for k in (i, j):
            if not 0 <= k <= self.depth:
                raise UsageError(f"coordinate {k} outside 0..{self.depth}")
        out = []
        for cell in self.cells:
            if i == j:
                lo, hi = cell.domains[i]
                out.append(Piece.segment(lo, lo, hi, hi))
                continue
            low, high = min(i, j), max(i, j)
            # (x_high, x_low) by composing s_high, ..., s_{low+1}
            acc = self._clipped(cell, high)
            for k in range(high - 1, low, -1):
                acc = compose_pieces(acc, self._clipped(cell, k))
            out.append(acc if i > j else acc.transpose())
        return out

    def projection(self, i: int, j: int) -> PLRelation:
        return normalize(self.projection_pieces(i, j))


def build_truncation(
    rel: PLRelation,
    depth: int,
    cap: Optional[int] = None,
    max_depth: Optional[int] = None,
) -> TruncationComplex:
    if depth < 1:
        raise UsageError(f"truncation depth must be at least 1, got {depth}")
    if not domain_is_full(rel):
        raise UsageError("truncations need a relation with full domain")
    cap = cap or config.cell_cap()
    max_depth = max_depth or config.max_depth()
    if depth > max_depth:
        raise ResourceError(f"depth {depth} exceeds the depth cap {max_depth}", cap=max_depth)

    level: list[tuple[tuple[int, ...], Span]] = [((), (ZERO, ONE))]
    for k in range(1, depth + 1):
        grown = []
        for chain, reach in level:
            for index, s in enumerate(rel.pieces):
                span = s.preimage(*reach)
                if span is not None:
                    grown.append((chain + (index,), span))
        if len(grown) > cap:
            raise ResourceError(f"truncation exceeds the cell cap {cap} at level {k}", cap=cap)
        logger.debug(f"Level {k}: {len(grown)} partial chains")
        level = grown

    cells = []
    for chain, _ in level:
        domains = propagate([rel.pieces[i] for i in chain])
        if domains is not None:
            cells.append(CellChain(chain, domains))
    logger.info(f"Built depth {depth} truncation with {len(cells)} cells")
    return TruncationComplex(rel, depth, cells)


def truncation_connected(complex_: TruncationComplex) -> bool:
    return complex_.components() <= 1


def shift_and_project(complex_: TruncationComplex, mode: str, k: Optional[int] = None):
    """``mode="shift"`` returns the shifted complex, ``mode="project"`` the x_k values."""
    if mode == "shift":
        return complex_.shift()
    if mode == "project":
        if k is None:
            raise UsageError("project needs a coordinate index")
        return complex_.project(k)
    raise UsageError(f"unknown mode {mode!r}")


def _reaches(span: FissileSpan, lo: Fraction, hi: Fraction) -> bool:
    """Whether [lo, hi], lying in the closure of ``span``, meets ``span`` itself."""
    if hi == span.lo and not span.lo_closed:
        return False
    return not (lo == span.hi and not span.hi_closed)


def _avoids_fissile(pieces: Sequence[Piece], spans: Sequence[FissileSpan]) -> bool:
    """Whether the chain has a point with x_k in spans[k - 1] for k = 1..len(spans).

    The chain pieces are clipped to the closed spans; the solution set is then
    convex, so it meets the half-open spans as soon as each coordinate's exact
    domain does.
    """
    ranges = [(ZERO, ONE)] + [(s.lo, s.hi) for s in spans]
    ranges += [(ZERO, ONE)] * (len(pieces) + 1 - len(ranges))
    chain = []
    for k, s in enumerate(pieces, start=1):
        part = s.clip(*ranges[k], *ranges[k - 1])
        if part is None:
            return False
        chain.append(part)
    domains = propagate(chain)
    if domains is None:
        return False
    return all(_reaches(span, *domains[k]) for k, span in enumerate(spans, start=1))


def fissile_cell_diagnostic(
    rel: PLRelation,
    complex_: TruncationComplex,
    fissile: Optional[FissileSet] = None,
) -> FissileDiagnostic:
    """Cells in which every point has some coordinate x_i, i >= 1, in the fissile x-set.

    A cell is kept out exactly when one choice of nonfissile span per
    coordinate leaves its polytope nonempty. A diagnostic for the inverse
    limit, not a decision about it.
    """
    if fissile is None:
        fissile = fissile_xset(EventSweep(rel))
    allowed = fissile.complement()

    def clean(pieces: list[Piece], domains: tuple[Span, ...], chosen: list[FissileSpan]) -> bool:
        if not _avoids_fissile(pieces, chosen):
            return False
        if len(chosen) == len(pieces):
            return True
        lo, hi = domains[len(chosen) + 1]
        return any(
            clean(pieces, domains, chosen + [span])
            for span in allowed if span.lo <= hi and span.hi >= lo
        )

    flagged = tuple(
        index for index, cell in enumerate(complex_.cells)
        if not clean([rel.pieces[i] for i in cell.pieces], cell.domains, [])
    )
    total = len(complex_.cells)
    fraction = Fraction(len(flagged), total) if total else ZERO
    return FissileDiagnostic(fraction, flagged)


def irreducibility_probe(
    complex_: TruncationComplex,
    a: Sequence[Fraction],
    b: Sequence[Fraction],
) -> IrreducibilityProbe:
    starts = complex_.cells_containing(a)
    targets = set(complex_.cells_containing(b))
    if not starts:
        raise UsageError(f"point {tuple(str(x) for x in a)} lies in no cell")
    if not targets:
        raise UsageError(f"point {tuple(str(x) for x in b)} lies in no cell")

    previous: dict[int, Optional[int]] = {s: None for s in starts}
    queue = deque(starts)
    end = None
    while queue:
        current = queue.popleft()
        if current in targets:
            end = current
            break
        for nxt in sorted(complex_.adjacency[current]):
            if nxt not in previous:
                previous[nxt] = current
                queue.append(nxt)
    if end is None:
        raise UsageError("the two points lie in different components")

    path = []
    while end is not None:
        path.append(end)
        end = previous[end]
    cells = tuple(sorted(path))
    return IrreducibilityProbe(len(cells) == len(complex_.cells), cells)
