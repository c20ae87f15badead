"""Sets on a rational circle and periodized level decompositions.

A :class:`TorusSet` stores a subset of the circle of circumference
``period`` as a canonical line representation inside [0, period]: a
set that wraps across the seam is stored as two components, one with
lo = 0 and one with hi = period, and a full circle is the single
component [0, period].  A point sitting exactly on the seam is stored
at 0, never at period.

The level decomposition slices a bounded line set E (min E >= 0) into
the fragments E intersected with [n*period, (n+1)*period], overlays
them on one period, and returns the multiplicity levels: level k is
the closed set of circle points covered by at least k fragments.
Levels are nested, and their measures add up exactly to the measure
of E.  Fragments are closed, so shared endpoints at fragment seams do
count toward multiplicity; a level may be a null set (isolated points)
and still counts toward the depth.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .intervals import Interval, IntervalSet, RatLike, as_fraction, normalize


@dataclass(frozen=True, slots=True)
class TorusSet:
    """A finite union of closed arcs on the circle R / period Z."""

    period: Fraction
    components: IntervalSet

    def __post_init__(self) -> None:
        object.__setattr__(self, "period", as_fraction(self.period))
        if self.period <= 0:
            raise ValueError("period must be positive")
        comps = self.components
        if not comps.is_empty:
            if comps.min_point < 0 or comps.max_point > self.period:
                raise ValueError("components must lie within [0, period]")
            last = comps.components[-1]
            if last.is_point and last.lo == self.period:
                raise ValueError("seam point must be stored at 0, not at period")
            # A component ending at the period contains the circle point
            # 0, so the canonical form must carry it at 0 as well; set
            # algebra on the line representation relies on this.
            if last.hi == self.period and comps.min_point > 0:
                raise ValueError("a set reaching the seam must also contain the point 0")

    @classmethod
    def empty(cls, period: RatLike) -> "TorusSet":
        return cls(as_fraction(period), IntervalSet.empty())

    @classmethod
    def full(cls, period: RatLike) -> "TorusSet":
        period = as_fraction(period)
        return cls(period, IntervalSet.of((0, period)))

    @property
    def is_empty(self) -> bool:
        return self.components.is_empty

    @property
    def is_full(self) -> bool:
        comps = self.components.components
        return len(comps) == 1 and comps[0].lo == 0 and comps[0].hi == self.period

    @property
    def measure(self) -> Fraction:
        """Haar measure of the arc union; the seam point is null, so
        the wrap representation never double counts."""
        return self.components.measure

    def contains_point(self, x: RatLike) -> bool:
        x = as_fraction(x) % self.period
        if self.components.contains_point(x):
            return True
        # x = 0 is also represented by the seam at period.
        return x == 0 and self.components.contains_point(self.period)

    def is_subset_of(self, other: "TorusSet") -> bool:
        if self.period != other.period:
            raise ValueError("subset comparison requires equal periods")
        return self.components.is_subset_of(other.components)

    def gap_arcs(self) -> list[tuple[Fraction, Fraction]]:
        """Maximal open arcs of the complement as (start, end) pairs.

        Start lies in [0, period); end may exceed period when the gap
        wraps through the seam.  Empty for the full circle.
        """
        if self.is_empty:
            raise ValueError("gap arcs are undefined for the empty set")
        if self.is_full:
            return []
        comps = self.components.components
        arcs: list[tuple[Fraction, Fraction]] = [
            (prev.hi, cur.lo) for prev, cur in zip(comps, comps[1:])
        ]
        first_lo = comps[0].lo
        last_hi = comps[-1].hi
        if first_lo > 0 or last_hi < self.period:
            # Wrapping seam gap; degenerate to a plain gap when the set
            # touches one end only.
            arcs.append((last_hi, first_lo + self.period))
        return [a for a in arcs if a[1] > a[0]]

    def __str__(self) -> str:
        return f"{self.components} (mod {self.period})"


def _canonical_torus(line: IntervalSet, period: Fraction) -> TorusSet:
    """Canonicalize a line subset of [0, period] as a TorusSet: a point
    component at period moves to 0, a component ending at period gets
    its seam image added at 0, and a union covering everything
    collapses to the full-circle form."""
    comps = list(line.components)
    if comps:
        last = comps[-1]
        if last.is_point and last.lo == period:
            comps = [Interval(Fraction(0), Fraction(0))] + comps[:-1]
            line = normalize(comps)
            comps = list(line.components)
        if comps[-1].hi == period and comps[0].lo > 0:
            line = normalize([Interval(Fraction(0), Fraction(0))] + comps)
    return TorusSet(period, line)


def project(s: IntervalSet, period: RatLike) -> TorusSet:
    """Reduce a bounded line set mod period onto the circle."""
    period = as_fraction(period)
    if period <= 0:
        raise ValueError("period must be positive")
    if s.is_empty:
        return TorusSet.empty(period)
    pieces: list[Interval] = []
    for comp in s.components:
        if comp.length >= period:
            return TorusSet.full(period)
        k = comp.lo // period
        lo = comp.lo - k * period
        hi = comp.hi - k * period
        if hi <= period:
            pieces.append(Interval(lo, hi))
        else:
            pieces.append(Interval(lo, period))
            pieces.append(Interval(Fraction(0), hi - period))
    merged = normalize(pieces)
    if merged.measure >= period:
        return TorusSet.full(period)
    return _canonical_torus(merged, period)


def torus_sum(t1: TorusSet, t2: TorusSet) -> TorusSet:
    """Pointwise sum on the circle, via lifting to the line and
    projecting back."""
    if t1.period != t2.period:
        raise ValueError("sum requires equal periods")
    lifted = t1.components.sumset(t2.components)
    return project(lifted, t1.period)


def dilate(t: TorusSet, n: int) -> TorusSet:
    """Image under x -> n*x mod period, for a positive integer n."""
    if n < 1:
        raise ValueError("dilation factor must be a positive integer")
    if t.is_empty:
        return t
    return project(t.components.scale(n), t.period)


def arc_hull(t: TorusSet) -> tuple[Fraction, Fraction]:
    """Shortest closed arc containing the set, as (start, length).

    The hull is the complement of a largest gap arc.  Among equally
    large gaps the hull whose start point is smallest in [0, period)
    is returned.  Undefined for the empty set and for the full circle,
    which no proper arc contains.
    """
    if t.is_empty:
        raise ValueError("arc hull is undefined for the empty set")
    arcs = t.gap_arcs()
    if not arcs:
        raise ValueError("arc hull is undefined for the full circle")
    best_len = max(end - start for start, end in arcs)
    starts = sorted(
        (end % t.period) for start, end in arcs if end - start == best_len
    )
    return starts[0], t.period - best_len


def find_small_dilation(
    t: TorusSet, n_max: int, slack: RatLike = 0
) -> tuple[int, Fraction] | None:
    """Smallest n in 1..n_max whose dilation fits in an arc of length
    at most measure + slack; returns (n, hull length) or None.

    A dilation that covers the whole circle is admissible only if the
    period itself is within the target, since the only covering arc is
    then the full circle.
    """
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    slack = as_fraction(slack)
    if t.is_empty:
        raise ValueError("dilation search is undefined for the empty set")
    target = t.measure + slack
    for n in range(1, n_max + 1):
        d = dilate(t, n)
        if d.is_full:
            if t.period <= target:
                return n, t.period
            continue
        _, hull_len = arc_hull(d)
        if hull_len <= target:
            return n, hull_len
    return None


@dataclass(frozen=True, slots=True)
class LevelDecomposition:
    """Multiplicity levels of a periodized line set.

    ``levels[k-1]`` is the closed circle set covered by at least k
    fragments; ``k_max`` is the number of nonempty levels, counting
    levels of measure zero.
    """

    period: Fraction
    source_measure: Fraction
    levels: tuple[TorusSet, ...]

    @property
    def k_max(self) -> int:
        return len(self.levels)

    def level(self, k: int) -> TorusSet:
        """Level k (1-indexed); empty beyond k_max."""
        if k < 1:
            raise ValueError("levels are indexed from 1")
        if k > len(self.levels):
            return TorusSet.empty(self.period)
        return self.levels[k - 1]

    def level_measure(self, k: int) -> Fraction:
        return self.level(k).measure

    @property
    def level_measures(self) -> tuple[Fraction, ...]:
        return tuple(t.measure for t in self.levels)


def level_sets(e: IntervalSet, period: RatLike) -> LevelDecomposition:
    """Decompose a bounded line set with min >= 0 into circle levels.

    Fragment n is (E intersected with [n*period, (n+1)*period]) shifted
    down by n*period; fragments are closed, so a point of E at an exact
    multiple of the period lands in two adjacent fragments, once at 0
    and once at the seam, and both placements describe the same circle
    point.  Multiplicity at the seam is therefore evaluated at 0, which
    always dominates the count at period.

    The sum of the level measures equals the measure of E exactly; this
    identity is asserted before returning.
    """
    period = as_fraction(period)
    if period <= 0:
        raise ValueError("period must be positive")
    if e.is_empty:
        raise ValueError("level decomposition is undefined for the empty set")
    if e.min_point < 0:
        raise ValueError("level decomposition requires min >= 0")

    window = IntervalSet.of((0, period))
    fragment_comps: list[Interval] = []
    n = 0
    top = e.max_point
    while n * period <= top:
        shifted = e.translate(-n * period).intersection(window)
        fragment_comps.extend(shifted.components)
        n += 1

    # Elementary cells: the sorted endpoints and the open intervals
    # between consecutive ones.  Multiplicities come from two sorted
    # endpoint arrays swept in step with the cells.
    xs = sorted({c.lo for c in fragment_comps} | {c.hi for c in fragment_comps})
    los = sorted(c.lo for c in fragment_comps)
    his = sorted(c.hi for c in fragment_comps)

    point_mult: list[int] = []
    open_mult: list[int] = []
    li = hi_strict = hi_loose = 0
    for idx, x in enumerate(xs):
        while li < len(los) and los[li] <= x:
            li += 1
        while hi_strict < len(his) and his[hi_strict] < x:
            hi_strict += 1
        point_mult.append(li - hi_strict)
        if idx + 1 < len(xs):
            while hi_loose < len(his) and his[hi_loose] <= x:
                hi_loose += 1
            open_mult.append(li - hi_loose)

    max_mult = max(point_mult)
    levels: list[TorusSet] = []
    for k in range(1, max_mult + 1):
        pieces: list[Interval] = []
        cur_lo: Fraction | None = None
        for idx, x in enumerate(xs):
            point_in = point_mult[idx] >= k
            open_in = idx < len(open_mult) and open_mult[idx] >= k
            if open_in:
                # Closed fragments make multiplicity upper semicontinuous,
                # so both endpoints of an included open cell are included.
                assert point_in and point_mult[idx + 1] >= k
                if cur_lo is None:
                    cur_lo = x
            else:
                if cur_lo is not None:
                    pieces.append(Interval(cur_lo, x))
                    cur_lo = None
                elif point_in:
                    pieces.append(Interval(x, x))
        assert cur_lo is None
        levels.append(_canonical_torus(normalize(pieces), period))

    for shallow, deep in zip(levels, levels[1:]):
        assert deep.is_subset_of(shallow)
    total = sum((t.measure for t in levels), Fraction(0))
    assert total == e.measure, "level measures must add up to the set measure"
    return LevelDecomposition(period=period, source_measure=e.measure, levels=tuple(levels))
