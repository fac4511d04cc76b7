"""Finite unions of closed rational intervals, plus the fissile x-set type.

``IntervalSet`` holds slices f(x), images f[I] and tower levels. Intervals are
kept sorted and disjoint; touching intervals are merged on construction.

``FissileSet`` needs open and half-open spans (the fissile set of an X made
of two crossing diagonals is [0, 1/2) U (1/2, 1]), so it keeps per-endpoint
closedness.
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Optional

from svdyn.rational import ONE, ZERO, midpoint, pq

Span = tuple[Fraction, Fraction]


def _merge(spans: Iterable[Span]) -> tuple[Span, ...]:
    ordered = sorted((lo, hi) for lo, hi in spans if lo <= hi)
    merged: list[list[Fraction]] = []
    for lo, hi in ordered:
        if merged and lo <= merged[-1][1]:
            if hi > merged[-1][1]:
                merged[-1][1] = hi
        else:
            merged.append([lo, hi])
    return tuple((lo, hi) for lo, hi in merged)


@dataclass(frozen=True)
class IntervalSet:
    intervals: tuple[Span, ...] = ()

    @classmethod
    def of(cls, spans: Iterable[Span]) -> "IntervalSet":
        return cls(_merge(spans))

    @classmethod
    def closed(cls, lo: Fraction, hi: Fraction) -> "IntervalSet":
        if lo > hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        return cls(((Fraction(lo), Fraction(hi)),))

    @classmethod
    def point(cls, x: Fraction) -> "IntervalSet":
        return cls.closed(x, x)

    @classmethod
    def unit(cls) -> "IntervalSet":
        return cls.closed(ZERO, ONE)

    def __iter__(self) -> Iterator[Span]:
        return iter(self.intervals)

    def __len__(self) -> int:
        return len(self.intervals)

    def __bool__(self) -> bool:
        return bool(self.intervals)

    @property
    def lo(self) -> Fraction:
        return self.intervals[0][0]

    @property
    def hi(self) -> Fraction:
        return self.intervals[-1][1]

    def is_empty(self) -> bool:
        return not self.intervals

    def is_connected(self) -> bool:
        """Empty sets count as connected."""
        return len(self.intervals) <= 1

    def is_single_point(self) -> bool:
        return len(self.intervals) == 1 and self.intervals[0][0] == self.intervals[0][1]

    def has_interior(self) -> bool:
        return any(lo < hi for lo, hi in self.intervals)

    def is_unit(self) -> bool:
        return self.intervals == ((ZERO, ONE),)

    def union(self, other: "IntervalSet") -> "IntervalSet":
        return IntervalSet.of(self.intervals + other.intervals)

    def intersection(self, other: "IntervalSet") -> "IntervalSet":
        out = []
        i = j = 0
        a, b = self.intervals, other.intervals
        while i < len(a) and j < len(b):
            lo = max(a[i][0], b[j][0])
            hi = min(a[i][1], b[j][1])
            if lo <= hi:
                out.append((lo, hi))
            if a[i][1] < b[j][1]:
                i += 1
            else:
                j += 1
        return IntervalSet(tuple(out))

    def contains(self, x: Fraction) -> bool:
        return any(lo <= x <= hi for lo, hi in self.intervals)

    def issubset(self, other: "IntervalSet") -> bool:
        return all(
            any(olo <= lo and hi <= ohi for olo, ohi in other.intervals)
            for lo, hi in self.intervals
        )

    def meets(self, other: "IntervalSet") -> bool:
        return not self.intersection(other).is_empty()

    def component_containing(self, x: Fraction) -> Optional[Span]:
        for lo, hi in self.intervals:
            if lo <= x <= hi:
                return (lo, hi)
        return None

    def components(self) -> list["IntervalSet"]:
        return [IntervalSet((span,)) for span in self.intervals]

    def point_outside(self, other: "IntervalSet") -> Optional[Fraction]:
        """Some point of self that is not in other, or None when self is a subset."""
        for lo, hi in self.intervals:
            cuts = sorted({lo, hi} | {v for span in other.intervals for v in span if lo < v < hi})
            candidates = list(cuts) + [midpoint(a, b) for a, b in zip(cuts, cuts[1:])]
            for c in candidates:
                if not other.contains(c):
                    return c
        return None

    def __str__(self) -> str:
        if not self.intervals:
            return "{}"
        return " U ".join(
            f"{{{lo}}}" if lo == hi else f"[{lo}, {hi}]" for lo, hi in self.intervals
        )

    def to_json(self) -> list[list[str]]:
        return [[pq(lo), pq(hi)] for lo, hi in self.intervals]


@dataclass(frozen=True)
class FissileSpan:
    lo: Fraction
    hi: Fraction
    lo_closed: bool
    hi_closed: bool

    def contains(self, x: Fraction) -> bool:
        above = x > self.lo or (x == self.lo and self.lo_closed)
        below = x < self.hi or (x == self.hi and self.hi_closed)
        return above and below

    def __str__(self) -> str:
        if self.lo == self.hi:
            return f"{{{self.lo}}}"
        left = "[" if self.lo_closed else "("
        right = "]" if self.hi_closed else ")"
        return f"{left}{self.lo}, {self.hi}{right}"


@dataclass(frozen=True)
class FissileSet:
    """Finite union of points and intervals of any closedness, stored as maximal spans."""

    spans: tuple[FissileSpan, ...] = ()

    @classmethod
    def from_atoms(cls, points: Iterable[Fraction], gaps: Iterable[Span]) -> "FissileSet":
        """Build from event points (closed) and open gaps between events."""
        atoms = [FissileSpan(p, p, True, True) for p in points]
        atoms += [FissileSpan(lo, hi, False, False) for lo, hi in gaps]
        atoms.sort(key=lambda s: (s.lo, s.hi))
        merged: list[FissileSpan] = []
        for atom in atoms:
            if merged:
                last = merged[-1]
                joined = last.hi > atom.lo or (
                    last.hi == atom.lo and (last.hi_closed or atom.lo_closed)
                )
                if joined:
                    if atom.hi > last.hi:
                        merged[-1] = FissileSpan(last.lo, atom.hi, last.lo_closed, atom.hi_closed)
                    elif atom.hi == last.hi:
                        merged[-1] = FissileSpan(
                            last.lo, last.hi, last.lo_closed, last.hi_closed or atom.hi_closed
                        )
                    continue
            merged.append(atom)
        return cls(tuple(merged))

    def __bool__(self) -> bool:
        return bool(self.spans)

    def is_empty(self) -> bool:
        return not self.spans

    def contains(self, x: Fraction) -> bool:
        return any(span.contains(x) for span in self.spans)

    def has_interior(self) -> bool:
        return any(span.lo < span.hi for span in self.spans)

    def complement(self) -> tuple[FissileSpan, ...]:
        """Maximal spans of [0, 1] outside the set."""
        out = []
        lo, lo_closed = ZERO, True
        for span in self.spans:
            if span.lo > lo or (lo_closed and not span.lo_closed):
                out.append(FissileSpan(lo, span.lo, lo_closed, not span.lo_closed))
            lo, lo_closed = span.hi, not span.hi_closed
        if lo < ONE or lo_closed:
            out.append(FissileSpan(lo, ONE, lo_closed, True))
        return tuple(out)

    def __str__(self) -> str:
        if not self.spans:
            return "{}"
        return " U ".join(str(span) for span in self.spans)

    def to_json(self) -> list[dict]:
        return [
            {"lo": pq(s.lo), "hi": pq(s.hi), "lo_closed": s.lo_closed, "hi_closed": s.hi_closed}
            for s in self.spans
        ]
