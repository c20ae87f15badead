"""Sumset lower bounds and the per-level excess profile.

For nonempty compact sets A, B on the line with measures a >= b > 0,
the measure ratio a/b splits uniquely as k(k-1)/2 + k*d with k a
positive integer and 0 <= d < 1.  Ruzsa's inequality bounds the sumset
measure below by a + min(diam B, (k+d)*b); the dichotomy bound trades
the diameter branch against a level-depth branch; and when the sumset
is close to the Ruzsa bound, the slack decomposes exactly into
nonnegative per-level coefficients tied to the circle levels of A and
of A+B at period diam B.  Everything here is exact rational arithmetic
except the explicitly bracketed log terms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .enclosure import Bracket, Verdict, log_bracket
from .intervals import IntervalSet, RatLike, as_fraction, minkowski_sum
from .torus import LevelDecomposition, TorusSet, arc_hull, level_sets

RHO_0 = Fraction(31, 10**1550)
"""Smallness threshold used by the deep-level hypotheses: 3.1e-1549."""


@dataclass(frozen=True, slots=True)
class RatioSplit:
    """ratio = k*(k-1)/2 + k*delta with k >= 1 and 0 <= delta < 1."""

    k: int
    delta: Fraction
    ratio: Fraction


def split_ratio(ratio: RatLike) -> RatioSplit:
    """Unique split of a positive rational ratio; k is the integer with
    k(k-1)/2 <= ratio < k(k+1)/2."""
    ratio = as_fraction(ratio)
    if ratio <= 0:
        raise ValueError("ratio must be positive")
    # Start from the integer square root of 2*ratio and adjust; the
    # window test below is exact.
    k = max(1, math.isqrt(int(2 * ratio)))
    while Fraction(k * (k - 1), 2) > ratio:
        k -= 1
    while Fraction(k * (k + 1), 2) <= ratio:
        k += 1
    assert k >= 1
    delta = (ratio - Fraction(k * (k - 1), 2)) / k
    assert 0 <= delta < 1
    if ratio >= 1:
        assert k >= 2
    return RatioSplit(k=k, delta=delta, ratio=ratio)


@dataclass(frozen=True, slots=True)
class RuzsaBoundReport:
    split: RatioSplit
    diam_b: Fraction
    bound: Fraction
    sum_measure: Fraction
    holds: bool
    tight: bool


def ruzsa_bound(a: IntervalSet, b: IntervalSet) -> RuzsaBoundReport:
    """Check measure(A+B) >= measure(A) + min(diam B, (k+d)*measure(B)).

    The bound is order-specific: the split uses measure(A)/measure(B)
    as given, without swapping arguments.  Requires positive measures.
    """
    la, lb = a.measure, b.measure
    if la <= 0 or lb <= 0:
        raise ValueError("both sets must have positive measure")
    split = split_ratio(la / lb)
    diam_b = b.diameter
    bound = la + min(diam_b, (split.k + split.delta) * lb)
    s = minkowski_sum(a, b).measure
    return RuzsaBoundReport(
        split=split,
        diam_b=diam_b,
        bound=bound,
        sum_measure=s,
        holds=s >= bound,
        tight=s == bound,
    )


@dataclass(frozen=True, slots=True)
class RefinedBoundReport:
    """Conditional sharpening: when measure(A+B) < measure(A) + diam(B),
    the sumset measure is at least (1 + 1/k_a) * measure(A)
    + ((k_a + 1)/2) * measure(B), with k_a the level depth of A at
    period diam(B)."""

    applicable: bool
    k_a: int | None
    split: RatioSplit
    depth_matches_split: bool | None
    bound: Fraction | None
    sum_measure: Fraction
    holds: bool | None


def refined_bound_check(a: IntervalSet, b: IntervalSet) -> RefinedBoundReport:
    la, lb = a.measure, b.measure
    if la <= 0 or lb <= 0:
        raise ValueError("both sets must have positive measure")
    if b.min_point != 0:
        raise ValueError("requires min(B) = 0; normalize the pair first")
    if a.min_point < 0:
        raise ValueError("requires min(A) >= 0; normalize the pair first")
    diam_b = b.diameter
    if diam_b == 0:
        raise ValueError("requires a non-degenerate B")
    split = split_ratio(la / lb)
    s = minkowski_sum(a, b).measure
    if s >= la + diam_b:
        return RefinedBoundReport(
            applicable=False,
            k_a=None,
            split=split,
            depth_matches_split=None,
            bound=None,
            sum_measure=s,
            holds=None,
        )
    k_a = level_sets(a, diam_b).k_max
    bound = Fraction(k_a + 1, k_a) * la + Fraction(k_a + 1, 2) * lb
    return RefinedBoundReport(
        applicable=True,
        k_a=k_a,
        split=split,
        depth_matches_split=(k_a == split.k),
        bound=bound,
        sum_measure=s,
        holds=s >= bound,
    )


@dataclass(frozen=True, slots=True)
class DichotomyReport:
    """Two-branch lower bound for measure(E+F): either the diameter
    branch measure(E) + diam(F), or the level branch
    (1 + 1/k) * measure(E) + ((k+1)/2) * measure(F)."""

    k: int | None
    degenerate: bool
    diameter_branch: Fraction | None
    level_branch: Fraction | None
    bound: Fraction
    branch: str
    sum_measure: Fraction
    holds: bool
    tight: bool


def dichotomy_bound(e: IntervalSet, f: IntervalSet) -> DichotomyReport:
    """min of the two branches is a valid lower bound for measure(E+F).

    The level depth k is computed on E shifted to start at 0, at period
    diam(F).  A single-point F gives the degenerate bound measure(E),
    attained exactly.
    """
    if e.is_empty or f.is_empty:
        raise ValueError("both sets must be nonempty")
    le, lf = e.measure, f.measure
    s = minkowski_sum(e, f).measure
    diam_f = f.diameter
    if diam_f == 0:
        return DichotomyReport(
            k=None,
            degenerate=True,
            diameter_branch=None,
            level_branch=None,
            bound=le,
            branch="degenerate",
            sum_measure=s,
            holds=s >= le,
            tight=s == le,
        )
    k = level_sets(e.translate(-e.min_point), diam_f).k_max
    diameter_branch = le + diam_f
    level_branch = Fraction(k + 1, k) * le + Fraction(k + 1, 2) * lf
    bound = min(diameter_branch, level_branch)
    branch = "diameter" if diameter_branch <= level_branch else "level"
    return DichotomyReport(
        k=k,
        degenerate=False,
        diameter_branch=diameter_branch,
        level_branch=level_branch,
        bound=bound,
        branch=branch,
        sum_measure=s,
        holds=s >= bound,
        tight=s == bound,
    )


@dataclass(frozen=True, slots=True)
class ExcessProfile:
    """Exact per-level decomposition of the sumset excess.

    For a normalized pair (min B = 0, diam B = 1, 0 <= min A < 1,
    measure(A) >= measure(B) > 0) with S = A + B and circle levels at
    period 1, the coefficient families are defined by

        mu(S_k) = mu(A_{k-1}) + eps1[k] * b      for 2 <= k <= K+1,
        mu(S_k) = mu(A_k) + b + eps2[k] * b      for 1 <= k <= K,
        mu(S_k) = eps3[k] * b                    for K+2 <= k,

    where b = measure(B), K is the ratio split, mu(A_k) and mu(S_k) are
    the level measures (zero beyond the depth).  The total excess

        epsilon = (measure(S) - measure(A)) / b - K - delta

    satisfies the exact convex-split identity

        epsilon = sum(eps3) + sum_{k=1..K} (k/K) * (eps1[k+1] + eps2[K+1-k])

    whenever the level depth of A equals K; ``split_residual`` records
    the difference, and ``depth_matches`` flags the precondition.  With
    0 and 1 both in B every coefficient is nonnegative as long as the
    relevant level sums stay below one full circle; ``nonnegative``
    reports it.  The tail bounds eps3-sum <= epsilon,
    eps1[k] <= K*epsilon/(k-1) and eps2[k] <= K*epsilon/(K+1-k) follow
    from the identity and nonnegativity; ``tail_bounds_ok`` reports
    them.
    """

    split: RatioSplit
    b: Fraction
    epsilon: Fraction
    k_a: int
    k_s: int
    depth_matches: bool
    mu_a: tuple[Fraction, ...]
    mu_s: tuple[Fraction, ...]
    eps1: dict[int, Fraction]
    eps2: dict[int, Fraction]
    eps3: dict[int, Fraction]
    split_residual: Fraction | None
    nonnegative: bool
    tail_bounds_ok: bool | None
    decomposition_a: LevelDecomposition
    decomposition_s: LevelDecomposition

    @property
    def max_entry(self) -> Fraction:
        entries = [*self.eps1.values(), *self.eps2.values(), *self.eps3.values()]
        return max(entries, default=Fraction(0))


def _require_normalized(a: IntervalSet, b: IntervalSet) -> None:
    if a.is_empty or b.is_empty:
        raise ValueError("both sets must be nonempty")
    if b.min_point != 0 or b.diameter != 1:
        raise ValueError("requires a normalized pair: min(B) = 0 and diam(B) = 1")
    if not (0 <= a.min_point < 1):
        raise ValueError("requires a normalized pair: min(A) in [0, 1)")
    if b.measure <= 0:
        raise ValueError("requires measure(B) > 0")
    if a.measure < b.measure:
        raise ValueError("requires measure(A) >= measure(B); swap the pair first")


def excess_profile(a: IntervalSet, b: IntervalSet) -> ExcessProfile:
    _require_normalized(a, b)
    la, lb = a.measure, b.measure
    split = split_ratio(la / lb)
    kk = split.k
    s = minkowski_sum(a, b)
    ls = s.measure
    epsilon = (ls - la) / lb - kk - split.delta

    dec_a = level_sets(a, Fraction(1))
    dec_s = level_sets(s, Fraction(1))
    k_a, k_s = dec_a.k_max, dec_s.k_max

    def mu_a(k: int) -> Fraction:
        return dec_a.level_measure(k)

    def mu_s(k: int) -> Fraction:
        return dec_s.level_measure(k)

    eps1 = {k: (mu_s(k) - mu_a(k - 1)) / lb for k in range(2, kk + 2)}
    eps2 = {k: (mu_s(k) - mu_a(k) - lb) / lb for k in range(1, kk + 1)}
    eps3 = {k: mu_s(k) / lb for k in range(kk + 2, k_s + 1)}

    depth_matches = k_a == kk
    nonnegative = all(
        v >= 0 for v in [*eps1.values(), *eps2.values(), *eps3.values()]
    )

    split_residual: Fraction | None = None
    tail_bounds_ok: bool | None = None
    if depth_matches:
        recomposed = sum(eps3.values(), Fraction(0)) + sum(
            (Fraction(k, kk) * (eps1[k + 1] + eps2[kk + 1 - k]) for k in range(1, kk + 1)),
            Fraction(0),
        )
        split_residual = epsilon - recomposed
        tail_bounds_ok = (
            sum(eps3.values(), Fraction(0)) <= epsilon
            and all(eps1[k] <= kk * epsilon / (k - 1) for k in eps1)
            and all(eps2[k] <= kk * epsilon / (kk + 1 - k) for k in eps2)
        )

    return ExcessProfile(
        split=split,
        b=lb,
        epsilon=epsilon,
        k_a=k_a,
        k_s=k_s,
        depth_matches=depth_matches,
        mu_a=dec_a.level_measures,
        mu_s=dec_s.level_measures,
        eps1=eps1,
        eps2=eps2,
        eps3=eps3,
        split_residual=split_residual,
        nonnegative=nonnegative,
        tail_bounds_ok=tail_bounds_ok,
        decomposition_a=dec_a,
        decomposition_s=dec_s,
    )


def harmonic_number(n: int) -> Fraction:
    return sum((Fraction(1, j) for j in range(1, n + 1)), Fraction(0))


@dataclass(frozen=True, slots=True)
class DeepLevelReport:
    """Identity and hull bounds for the deepest level of A.

    When the level depth of A equals the split K >= 2, the deepest
    level measure satisfies the exact identity

        mu(A_K) = delta*b + (b/K) * sum_{k=1..K-1} k*(eps1[k+1] - eps2[k+1]),

    and the shortest arc containing A_K has length between
    delta*b - K*(ln K - 1)*epsilon*b (log bracketed; this stated lower
    bound fails on easy perturbed instances, see ``hull_lower_harmonic``
    for a provable variant) and delta*b + 2*epsilon*b (exact).
    """

    applicable: bool
    reason: str | None
    identity_residual: Fraction | None
    hull_start: Fraction | None
    hull_length: Fraction | None
    hull_upper: Verdict | None
    hull_lower: Verdict | None
    hull_lower_harmonic: Verdict | None


def deep_level_check(profile: ExcessProfile) -> DeepLevelReport:
    """Evaluate the deepest-level identity and hull bounds on a profile.

    Applicable only when the depth matches the split and K >= 2; the
    identity is algebraic, so a nonzero residual indicates a defect in
    the level computation, not in the instance.
    """
    kk = profile.split.k
    if not profile.depth_matches:
        return DeepLevelReport(
            applicable=False,
            reason="level depth of A differs from the ratio split",
            identity_residual=None,
            hull_start=None,
            hull_length=None,
            hull_upper=None,
            hull_lower=None,
            hull_lower_harmonic=None,
        )
    if kk < 2:
        return DeepLevelReport(
            applicable=False,
            reason="requires split k >= 2",
            identity_residual=None,
            hull_start=None,
            hull_length=None,
            hull_upper=None,
            hull_lower=None,
            hull_lower_harmonic=None,
        )
    b = profile.b
    delta = profile.split.delta
    epsilon = profile.epsilon
    deepest = profile.decomposition_a.level(kk)
    predicted = delta * b + Fraction(1, kk) * sum(
        (Fraction(k) * (profile.eps1[k + 1] - profile.eps2[k + 1]) * b for k in range(1, kk)),
        Fraction(0),
    )
    residual = deepest.measure - predicted

    if deepest.is_full:
        hull_start, hull_length = Fraction(0), profile.decomposition_a.period
    else:
        hull_start, hull_length = arc_hull(deepest)

    upper = Verdict.HOLDS if hull_length <= delta * b + 2 * epsilon * b else Verdict.FAILS
    # Stated lower bound: delta*b - K*(ln K - 1)*epsilon*b <= hull.
    coeff = Fraction(kk) * (log_bracket(kk) - 1)
    stated = Bracket.exact(delta * b) - coeff * Bracket.exact(epsilon * b)
    if hull_length >= stated.hi:
        lower = Verdict.HOLDS
    elif hull_length < stated.lo:
        lower = Verdict.FAILS
    else:
        lower = Verdict.INDETERMINATE
    # Provable variant with the exact harmonic coefficient
    # K*H_{K-1} - (K-1) >= 0; rational, so the comparison is exact.
    harmonic_coeff = kk * harmonic_number(kk - 1) - (kk - 1)
    harmonic_lower = delta * b - harmonic_coeff * epsilon * b
    lower_harmonic = Verdict.HOLDS if hull_length >= harmonic_lower else Verdict.FAILS

    return DeepLevelReport(
        applicable=True,
        reason=None,
        identity_residual=residual,
        hull_start=hull_start,
        hull_length=hull_length,
        hull_upper=upper,
        hull_lower=lower,
        hull_lower_harmonic=lower_harmonic,
    )
