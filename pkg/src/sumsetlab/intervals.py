"""Exact arithmetic on finite unions of closed rational intervals.

Sets are represented in a canonical form: components sorted by left
endpoint, pairwise disjoint, and separated by gaps of positive length.
Degenerate components (single points) are allowed.  All endpoints are
`fractions.Fraction`, so every operation below is exact; no floats are
involved anywhere.

The difference operator follows the closed-set convention: it returns
the closure of the literal set difference.  Removing a single interior
point therefore leaves a set unchanged, while cutting with an interval
keeps the shared boundary points.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence, Union

RatLike = Union[Fraction, int, str]


def as_fraction(value: RatLike) -> Fraction:
    """Coerce ints and strings like ``"3/4"`` or ``"0.25"`` to Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("floats are not accepted; pass a Fraction or string")
    return Fraction(value)


@dataclass(frozen=True, slots=True)
class Interval:
    """A closed interval [lo, hi] with rational endpoints, lo <= hi."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "lo", as_fraction(self.lo))
        object.__setattr__(self, "hi", as_fraction(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"interval endpoints out of order: [{self.lo}, {self.hi}]")

    @property
    def length(self) -> Fraction:
        return self.hi - self.lo

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    def contains(self, x: RatLike) -> bool:
        x = as_fraction(x)
        return self.lo <= x <= self.hi

    def shift(self, t: Fraction) -> "Interval":
        return Interval(self.lo + t, self.hi + t)

    def __str__(self) -> str:
        return f"[{self.lo}, {self.hi}]"


PairLike = Union[Interval, tuple, list]


def _coerce_intervals(items: Iterable[PairLike]) -> list[Interval]:
    out = []
    for item in items:
        if isinstance(item, Interval):
            out.append(item)
        else:
            lo, hi = item
            out.append(Interval(as_fraction(lo), as_fraction(hi)))
    return out


@dataclass(frozen=True, slots=True)
class IntervalSet:
    """Canonical finite union of closed intervals.

    Construct via :func:`normalize`, :meth:`IntervalSet.of`, or the
    module-level helpers; the constructor validates canonical form and
    raises ValueError when components overlap, touch, or are unsorted.
    """

    components: tuple[Interval, ...]

    def __post_init__(self) -> None:
        comps = tuple(self.components)
        object.__setattr__(self, "components", comps)
        for prev, cur in zip(comps, comps[1:]):
            if cur.lo <= prev.hi:
                raise ValueError(
                    f"components not canonical: {prev} then {cur} "
                    "(overlapping, touching, or unsorted)"
                )

    @classmethod
    def of(cls, *pairs: PairLike) -> "IntervalSet":
        return normalize(pairs)

    @classmethod
    def empty(cls) -> "IntervalSet":
        return cls(())

    @classmethod
    def point(cls, x: RatLike) -> "IntervalSet":
        x = as_fraction(x)
        return cls((Interval(x, x),))

    def __iter__(self) -> Iterator[Interval]:
        return iter(self.components)

    def __len__(self) -> int:
        return len(self.components)

    def __bool__(self) -> bool:
        return bool(self.components)

    @property
    def is_empty(self) -> bool:
        return not self.components

    @property
    def measure(self) -> Fraction:
        """Total length (Lebesgue measure); points contribute zero."""
        return sum((c.length for c in self.components), Fraction(0))

    @property
    def min_point(self) -> Fraction:
        self._require_nonempty("min_point")
        return self.components[0].lo

    @property
    def max_point(self) -> Fraction:
        self._require_nonempty("max_point")
        return self.components[-1].hi

    @property
    def diameter(self) -> Fraction:
        """max - min; zero for a single point."""
        self._require_nonempty("diameter")
        return self.max_point - self.min_point

    def _require_nonempty(self, what: str) -> None:
        if self.is_empty:
            raise ValueError(f"{what} is undefined for the empty set")

    def contains_point(self, x: RatLike) -> bool:
        x = as_fraction(x)
        # Components are sorted, so bisection would do; linear is fine
        # at the component counts used here.
        return any(c.lo <= x <= c.hi for c in self.components)

    def is_subset_of(self, other: "IntervalSet") -> bool:
        return difference(self, other).is_empty

    def translate(self, t: RatLike) -> "IntervalSet":
        t = as_fraction(t)
        return IntervalSet(tuple(c.shift(t) for c in self.components))

    def scale(self, c: RatLike) -> "IntervalSet":
        """Image under x -> c*x for nonzero rational c."""
        c = as_fraction(c)
        if c == 0:
            raise ValueError("scale factor must be nonzero")
        if c > 0:
            return IntervalSet(tuple(Interval(k.lo * c, k.hi * c) for k in self.components))
        return IntervalSet(tuple(Interval(k.hi * c, k.lo * c) for k in reversed(self.components)))

    def reflect(self) -> "IntervalSet":
        """Image under x -> (max of the set) - x; keeps the minimum at 0
        when the set starts at 0."""
        self._require_nonempty("reflect")
        m = self.max_point
        return IntervalSet(tuple(Interval(m - k.hi, m - k.lo) for k in reversed(self.components)))

    def sumset(self, other: "IntervalSet") -> "IntervalSet":
        return minkowski_sum(self, other)

    def union(self, other: "IntervalSet") -> "IntervalSet":
        return normalize(self.components + other.components)

    def intersection(self, other: "IntervalSet") -> "IntervalSet":
        out = []
        i = j = 0
        a, b = self.components, other.components
        while i < len(a) and j < len(b):
            lo = max(a[i].lo, b[j].lo)
            hi = min(a[i].hi, b[j].hi)
            if lo <= hi:
                out.append(Interval(lo, hi))
            # Advance whichever component ends first.
            if a[i].hi < b[j].hi:
                i += 1
            else:
                j += 1
        return normalize(out)

    def difference(self, other: "IntervalSet") -> "IntervalSet":
        return difference(self, other)

    def symmetric_difference(self, other: "IntervalSet") -> "IntervalSet":
        return difference(self, other).union(difference(other, self))

    def gaps(self) -> list[Interval]:
        """Closed spans [hi_i, lo_{i+1}] between consecutive components.

        Each returned interval has positive length by canonicity; its
        interior is disjoint from the set.
        """
        return [
            Interval(prev.hi, cur.lo)
            for prev, cur in zip(self.components, self.components[1:])
        ]

    def pairs(self) -> list[tuple[Fraction, Fraction]]:
        return [(c.lo, c.hi) for c in self.components]

    def __str__(self) -> str:
        if self.is_empty:
            return "{}"
        return " u ".join(str(c) for c in self.components)


def normalize(items: Iterable[PairLike]) -> IntervalSet:
    """Sort components and merge any that overlap or touch.

    Touching components merge because the union of [0, 1/2] and
    [1/2, 1] is the single closed interval [0, 1].  Points inside or on
    the boundary of a longer component are absorbed.
    """
    comps = sorted(_coerce_intervals(items), key=lambda c: (c.lo, c.hi))
    merged: list[Interval] = []
    for c in comps:
        if merged and c.lo <= merged[-1].hi:
            if c.hi > merged[-1].hi:
                merged[-1] = Interval(merged[-1].lo, c.hi)
        else:
            merged.append(c)
    return IntervalSet(tuple(merged))


def measure(s: IntervalSet) -> Fraction:
    return s.measure


def diameter(s: IntervalSet) -> Fraction:
    return s.diameter


def minkowski_sum(s: IntervalSet, t: IntervalSet) -> IntervalSet:
    """Pointwise sum {x + y}.  Exact: component sums are enumerated
    pairwise and merged.  Undefined (ValueError) if either set is empty.
    """
    s._require_nonempty("minkowski_sum")
    t._require_nonempty("minkowski_sum")
    sums = [
        Interval(a.lo + b.lo, a.hi + b.hi)
        for a in s.components
        for b in t.components
    ]
    return normalize(sums)


def difference(s: IntervalSet, t: IntervalSet) -> IntervalSet:
    """Closure of the literal difference s minus t.

    Point components of t never cut positive-length material (their
    removal does not survive closure); they only remove equal point
    components of s.  Cutting with a positive-length component keeps
    the shared endpoints closed.
    """
    out: list[Interval] = []
    for comp in s.components:
        if comp.is_point:
            if not t.contains_point(comp.lo):
                out.append(comp)
            continue
        pieces = [comp]
        for tc in t.components:
            if tc.is_point:
                continue
            if tc.hi < comp.lo or tc.lo > comp.hi:
                continue
            nxt: list[Interval] = []
            for p in pieces:
                if tc.hi <= p.lo or tc.lo >= p.hi:
                    nxt.append(p)
                    continue
                if tc.lo > p.lo:
                    nxt.append(Interval(p.lo, tc.lo))
                if tc.hi < p.hi:
                    nxt.append(Interval(tc.hi, p.hi))
            pieces = nxt
            if not pieces:
                break
        out.extend(pieces)
    return normalize(out)


def feasible_translates(a: IntervalSet, v: IntervalSet) -> IntervalSet:
    """All t with `a` contained in t + v, as an exact interval set.

    A connected component [a1, a2] of `a` fits inside the translate
    t + v exactly when it lands within a single component [v1, v2] of
    `v`, i.e. t lies in the window [a2 - v2, a1 - v1].  The feasible
    set is the intersection over a-components of the union of windows,
    so the computation is complete: an empty result is a certificate
    that no translate of v covers `a`.
    """
    a._require_nonempty("feasible_translates")
    v._require_nonempty("feasible_translates")
    result: IntervalSet | None = None
    for comp in a.components:
        windows = [
            Interval(comp.hi - vc.hi, comp.lo - vc.lo)
            for vc in v.components
            if comp.length <= vc.length
        ]
        wins = normalize(windows)
        result = wins if result is None else result.intersection(wins)
        if result.is_empty:
            return result
    assert result is not None
    return result
