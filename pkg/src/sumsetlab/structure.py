"""Near-equality structure verification.

When the sumset measure of a pair (A, B) exceeds Ruzsa's lower bound
by only a tiny excess epsilon, both sets are rigid: B is covered by a
pair of blocks at the two ends of its hull, and A is covered by a
translate of the canonical floor structure fattened by epsilon times
measure(B).  This module builds the canonical equality structures and
the one-parameter extremal family deforming them, decides the
smallness hypotheses under which rigidity is proven, and searches for
the covering witnesses.  All set computations are exact; only log
factors in the hypothesis thresholds carry certified brackets.

The overall verdict of :func:`verify_main_theorem` is

* ``pass``: all required hypotheses hold and both witnesses exist;
* ``fail``: hypotheses hold but a witness is missing or an exact
  internal identity broke (a counterexample or a library defect);
* ``out_of_scope``: some hypothesis does not provably hold, witnesses
  not attempted;
* ``explored``: same, but witnesses were attempted anyway
  (``explore=True``).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from .enclosure import Bracket, Verdict, log_bracket
from .intervals import Interval, IntervalSet, RatLike, as_fraction, feasible_translates, minkowski_sum, normalize
from .ruzsa import (
    RHO_0,
    DeepLevelReport,
    ExcessProfile,
    RatioSplit,
    deep_level_check,
    excess_profile,
    split_ratio,
)
from . import serialize


@dataclass(frozen=True, slots=True)
class AffineMap:
    """Record of the normalization x -> (x - offset)/scale, plus the
    integer shift applied to A alone and whether the roles of A and B
    were swapped (sumsets commute; the analysis needs the larger set
    first)."""

    offset: Fraction
    scale: Fraction
    int_shift_a: int
    swapped: bool = False

    def to_original_a(self, x: RatLike) -> Fraction:
        """Map a point from normalized A-coordinates back."""
        return (as_fraction(x) + self.int_shift_a) * self.scale + self.offset


def normalize_pair(a: IntervalSet, b: IntervalSet) -> tuple[IntervalSet, IntervalSet, AffineMap]:
    """Rescale so that min(B) = 0 and diam(B) = 1, then translate A by
    an integer so its minimum lies in [0, 1)."""
    if a.is_empty or b.is_empty:
        raise ValueError("both sets must be nonempty")
    offset = b.min_point
    scale = b.diameter
    if scale == 0:
        raise ValueError("diam(B) = 0: the pair cannot be normalized")
    b2 = b.translate(-offset).scale(Fraction(1) / scale)
    a1 = a.translate(-offset).scale(Fraction(1) / scale)
    n = a1.min_point // 1
    a2 = a1.translate(-n)
    assert b2.min_point == 0 and b2.diameter == 1
    assert 0 <= a2.min_point < 1
    return a2, b2, AffineMap(offset=offset, scale=scale, int_shift_a=int(n))


@dataclass(frozen=True, slots=True)
class StructureParams:
    """Parameters of the canonical floor structure.

    ``b`` is the measure of B; ``b_plus`` and ``b_minus`` are the block
    lengths at the two ends of B's hull, ``diam`` the hull length.  The
    canonical equality structures require b_plus + b_minus = b; the
    covering check allows slack up to epsilon * b.
    """

    k: int
    delta: Fraction
    b: Fraction
    b_plus: Fraction
    b_minus: Fraction
    diam: Fraction = Fraction(1)

    def __post_init__(self) -> None:
        for name in ("delta", "b", "b_plus", "b_minus", "diam"):
            object.__setattr__(self, name, as_fraction(getattr(self, name)))
        if self.k < 1:
            raise ValueError("k must be a positive integer")
        if not 0 <= self.delta < 1:
            raise ValueError("delta must lie in [0, 1)")
        if self.b <= 0:
            raise ValueError("b must be positive")
        if self.b_plus < 0 or self.b_minus < 0:
            raise ValueError("block lengths must be nonnegative")
        if self.diam <= 0:
            raise ValueError("diam must be positive")

    @property
    def floor_measure_total(self) -> Fraction:
        return (
            self.k * self.delta * self.b
            + Fraction(self.k * (self.k - 1), 2) * (self.b_plus + self.b_minus)
        )


def build_floors(p: StructureParams) -> IntervalSet:
    """Union of the k canonical floors: floor j (1-indexed) is
    [(j-1)(diam - b_minus), (j-1)diam + (k-j)b_plus + delta*b]."""
    floors = []
    for j in range(1, p.k + 1):
        lo = (j - 1) * (p.diam - p.b_minus)
        hi = (j - 1) * p.diam + (p.k - j) * p.b_plus + p.delta * p.b
        if hi < lo:
            raise ValueError(f"floor {j} is empty for these parameters")
        floors.append(Interval(lo, hi))
    return normalize(floors)


@dataclass(frozen=True, slots=True)
class EqualityStructures:
    params: StructureParams
    a: IntervalSet
    b: IntervalSet


def build_equality_structures(p: StructureParams) -> EqualityStructures:
    """The extremal pair attaining Ruzsa's bound exactly.

    B_0 is a block of length b_plus at 0 and one of length b_minus at
    the end of [0, diam]; A_0 is the floor union.  Requires
    b_plus + b_minus = b and (k + delta) * b < diam.  Both equality
    identities are asserted at construction: measure(A_0) equals
    (k(k-1)/2 + k*delta) * b, and measure(A_0 + B_0) equals
    measure(A_0) + (k + delta) * b.
    """
    if p.b_plus + p.b_minus != p.b:
        raise ValueError("equality structures require b_plus + b_minus = b")
    if (p.k + p.delta) * p.b >= p.diam:
        raise ValueError("equality structures require (k + delta) * b < diam")
    b0 = normalize([
        Interval(Fraction(0), p.b_plus),
        Interval(p.diam - p.b_minus, p.diam),
    ])
    a0 = build_floors(p)
    if len(a0) != p.k:
        raise AssertionError("canonical floors must stay pairwise separated")
    expected_a0 = (Fraction(p.k * (p.k - 1), 2) + p.k * p.delta) * p.b
    assert a0.measure == expected_a0, "floor measure identity failed"
    s = minkowski_sum(a0, b0)
    assert s.measure == a0.measure + (p.k + p.delta) * p.b, "sumset measure identity failed"
    return EqualityStructures(params=p, a=a0, b=b0)


def extremal_base(p: StructureParams) -> IntervalSet:
    """The companion set for the extremal family: [0, b] with the far
    endpoint of the hull added as an isolated point."""
    if p.diam != 1 or p.b_plus != p.b or p.b_minus != 0:
        raise ValueError("the extremal family uses diam = 1, b_plus = b, b_minus = 0")
    if p.b >= 1:
        raise ValueError("requires b < 1")
    return normalize([Interval(Fraction(0), p.b), Interval(Fraction(1), Fraction(1))])


def build_extremal_family(
    p: StructureParams, epsilon: RatLike, eps_prime: RatLike, i: int
) -> IntervalSet:
    """Member (i, eps_prime) of the family deforming the floor union.

    Floor i gains a protrusion of length eps_prime * b on its right and
    is extended by (epsilon - eps_prime) * b on its left, so every
    member has measure(A_0) + epsilon * b regardless of the split point
    eps_prime in [0, epsilon].
    """
    epsilon = as_fraction(epsilon)
    eps_prime = as_fraction(eps_prime)
    if p.diam != 1 or p.b_plus != p.b or p.b_minus != 0:
        raise ValueError("the extremal family uses diam = 1, b_plus = b, b_minus = 0")
    if not 0 <= eps_prime <= epsilon:
        raise ValueError("requires 0 <= eps_prime <= epsilon")
    if not 1 <= i <= p.k:
        raise ValueError(f"floor index must lie in 1..{p.k}")
    a0 = build_floors(p)
    floor_top = (i - 1) + (p.k - i) * p.b + p.delta * p.b
    floor_bottom = Fraction(i - 1)
    member = a0.union(
        normalize([
            Interval(floor_top, floor_top + eps_prime * p.b),
            Interval(floor_bottom - (epsilon - eps_prime) * p.b, floor_bottom),
        ])
    )
    assert member.measure == a0.measure + epsilon * p.b
    return member


@dataclass(frozen=True, slots=True)
class HypothesisReport:
    """Verdicts for the smallness hypotheses, each provable-only.

    ``b_fits_base_level`` and the cube and rho thresholds are exact
    rational comparisons; the log-bearing thresholds use certified
    brackets and may come back indeterminate at exact boundaries.
    ``weaker_condition`` is informational and not required."""

    split: RatioSplit
    b: Fraction
    epsilon: Fraction
    mu_a1: Fraction
    b_fits_base_level: Verdict
    epsilon_cube: Verdict
    epsilon_log: Verdict
    epsilon_rho: Verdict
    main_condition: Verdict
    weaker_condition: Verdict

    @property
    def required(self) -> tuple[Verdict, ...]:
        return (
            self.b_fits_base_level,
            self.epsilon_cube,
            self.epsilon_log,
            self.epsilon_rho,
            self.main_condition,
        )

    @property
    def required_all_hold(self) -> bool:
        return all(v is Verdict.HOLDS for v in self.required)

    def as_dict(self) -> dict[str, str]:
        return {
            "b_fits_base_level": self.b_fits_base_level.value,
            "epsilon_cube": self.epsilon_cube.value,
            "epsilon_log": self.epsilon_log.value,
            "epsilon_rho": self.epsilon_rho.value,
            "main_condition": self.main_condition.value,
            "weaker_condition": self.weaker_condition.value,
        }


def hypothesis_check(
    a: IntervalSet, b: IntervalSet, *, profile: ExcessProfile | None = None
) -> HypothesisReport:
    """Decide the hypotheses on a normalized pair.

    Raises ValueError when the excess is negative: that only happens
    outside the near-equality regime this check is for.
    """
    if profile is None:
        profile = excess_profile(a, b)
    split = profile.split
    kk, delta, lb = split.k, split.delta, profile.b
    epsilon = profile.epsilon
    if epsilon < 0:
        raise ValueError("negative excess: the pair is outside the near-equality regime")
    mu_a1 = profile.mu_a[0] if profile.mu_a else Fraction(0)

    fits = Verdict.HOLDS if lb <= mu_a1 else Verdict.FAILS
    cube = Verdict.HOLDS if epsilon < (delta / (3 * kk)) ** 3 else Verdict.FAILS
    ln_k = log_bracket(kk)
    log_verdict = (Fraction(kk**3) * ln_k * epsilon).compare_lt(1 - delta)
    rho = Verdict.HOLDS if epsilon < RHO_0 / (kk * lb) else Verdict.FAILS
    main_coeff = Fraction(kk**2) * ln_k + 12
    main = ((kk + delta + main_coeff * epsilon) * lb).compare_lt(1)
    ln4 = 2 * log_bracket(2)
    weak_coeff = (
        Fraction(kk**2) * ln_k
        - Fraction(kk) * (Fraction(kk) * (1 + ln4) - ln_k - 7 + ln4)
        + 8
    )
    weaker = ((kk + delta + weak_coeff * epsilon) * lb).compare_lt(1)

    return HypothesisReport(
        split=split,
        b=lb,
        epsilon=epsilon,
        mu_a1=mu_a1,
        b_fits_base_level=fits,
        epsilon_cube=cube,
        epsilon_log=log_verdict,
        epsilon_rho=rho,
        main_condition=main,
        weaker_condition=weaker,
    )


@dataclass(frozen=True, slots=True)
class BCoverReport:
    """Minimal two-block cover of a normalized B.

    The covering pair anchors blocks [0, b_plus] and [1 - b_minus, 1];
    minimizing b_plus + b_minus means maximizing the uncovered gap, so
    the search over all rotations reduces to taking a largest internal
    gap of B (leftmost among ties).  ``admissible`` states whether the
    minimal cover is within the allowance measure(B) * (1 + epsilon).
    """

    translate: Fraction
    b_plus: Fraction
    b_minus: Fraction
    cover_sum: Fraction
    allowance: Fraction
    admissible: bool
    gap: tuple[Fraction, Fraction] | None


def conclusion_check_b(b: IntervalSet, epsilon: RatLike) -> BCoverReport:
    epsilon = as_fraction(epsilon)
    if b.is_empty or b.min_point != 0 or b.diameter != 1:
        raise ValueError("requires a normalized B: min 0, diam 1")
    gaps = b.gaps()
    if gaps:
        best = max(g.length for g in gaps)
        gap = next(g for g in gaps if g.length == best)
        b_plus, b_minus = gap.lo, 1 - gap.hi
        gap_pair = (gap.lo, gap.hi)
    else:
        b_plus, b_minus = Fraction(1), Fraction(0)
        gap_pair = None
    cover = b_plus + b_minus
    allowance = b.measure * (1 + epsilon)
    return BCoverReport(
        translate=Fraction(0),
        b_plus=b_plus,
        b_minus=b_minus,
        cover_sum=cover,
        allowance=allowance,
        admissible=cover <= allowance,
        gap=gap_pair,
    )


@dataclass(frozen=True, slots=True)
class ACoverReport:
    """Result of embedding A into a fattened floor structure.

    ``feasible`` is the exact set of admissible translates t with
    A contained in t + floors + [0, epsilon*b]; empty means provably no
    translate works.  ``translate`` is the smallest element when one
    exists (smallest for determinism)."""

    feasible: IntervalSet
    translate: Fraction | None
    window: Fraction


def conclusion_check_a(a: IntervalSet, p: StructureParams, epsilon: RatLike) -> ACoverReport:
    epsilon = as_fraction(epsilon)
    window = max(Fraction(0), epsilon * p.b)
    target = build_floors(p)
    if window > 0:
        target = minkowski_sum(target, IntervalSet.of((0, window)))
    feas = feasible_translates(a, target)
    return ACoverReport(
        feasible=feas,
        translate=None if feas.is_empty else feas.min_point,
        window=window,
    )


@dataclass(frozen=True, slots=True)
class StructureReport:
    """Full pipeline result on one pair, in normalized coordinates."""

    normalized_a: IntervalSet
    normalized_b: IntervalSet
    affine: AffineMap
    split: RatioSplit
    epsilon: Fraction
    profile: ExcessProfile | None
    hypotheses: HypothesisReport | None
    deep_level: DeepLevelReport | None
    entry_bound_ok: bool | None
    b_cover: BCoverReport | None
    a_cover: ACoverReport | None
    equality_measure_residual: Fraction | None
    failure_certificates: tuple[dict[str, str], ...]
    overall: str

    def to_obj(self) -> dict[str, Any]:
        sc = serialize.scalar
        prof = None
        if self.profile is not None:
            p = self.profile
            prof = {
                "k_a": p.k_a,
                "k_s": p.k_s,
                "depth_matches": p.depth_matches,
                "nonnegative": p.nonnegative,
                "tail_bounds_ok": p.tail_bounds_ok,
                "eps1": {str(k): sc(v) for k, v in p.eps1.items()},
                "eps2": {str(k): sc(v) for k, v in p.eps2.items()},
                "eps3": {str(k): sc(v) for k, v in p.eps3.items()},
                "split_residual": None if p.split_residual is None else sc(p.split_residual),
                "mu_a": [sc(m) for m in p.mu_a],
                "mu_s": [sc(m) for m in p.mu_s],
            }
        deep = None
        if self.deep_level is not None:
            d = self.deep_level
            deep = {
                "applicable": d.applicable,
                "reason": d.reason,
                "identity_residual": None if d.identity_residual is None else sc(d.identity_residual),
                "hull_length": None if d.hull_length is None else sc(d.hull_length),
                "hull_upper": None if d.hull_upper is None else d.hull_upper.value,
                "hull_lower": None if d.hull_lower is None else d.hull_lower.value,
                "hull_lower_harmonic": (
                    None if d.hull_lower_harmonic is None else d.hull_lower_harmonic.value
                ),
            }
        return {
            "schema": "structure-report/1",
            "normalized": {
                "a": serialize.interval_set_to_obj(self.normalized_a),
                "b": serialize.interval_set_to_obj(self.normalized_b),
            },
            "affine": {
                "offset": sc(self.affine.offset),
                "scale": sc(self.affine.scale),
                "int_shift_a": self.affine.int_shift_a,
                "swapped": self.affine.swapped,
            },
            "split": {"k": self.split.k, "delta": sc(self.split.delta), "ratio": sc(self.split.ratio)},
            "epsilon": sc(self.epsilon),
            "profile": prof,
            "hypotheses": None if self.hypotheses is None else self.hypotheses.as_dict(),
            "deep_level": deep,
            "entry_bound_ok": self.entry_bound_ok,
            "b_cover": None
            if self.b_cover is None
            else {
                "translate": sc(self.b_cover.translate),
                "b_plus": sc(self.b_cover.b_plus),
                "b_minus": sc(self.b_cover.b_minus),
                "cover_sum": sc(self.b_cover.cover_sum),
                "allowance": sc(self.b_cover.allowance),
                "admissible": self.b_cover.admissible,
            },
            "a_cover": None
            if self.a_cover is None
            else {
                "translate": None if self.a_cover.translate is None else sc(self.a_cover.translate),
                "feasible": serialize.interval_set_to_obj(self.a_cover.feasible),
                "window": sc(self.a_cover.window),
            },
            "equality_measure_residual": (
                None
                if self.equality_measure_residual is None
                else sc(self.equality_measure_residual)
            ),
            "failure_certificates": list(self.failure_certificates),
            "overall": self.overall,
        }


def verify_main_theorem(a: IntervalSet, b: IntervalSet, *, explore: bool = False) -> StructureReport:
    """Run the whole pipeline on an arbitrary pair of interval sets.

    Normalization and swapping are applied first, then the excess
    profile, the hypothesis verdicts, and (inside the hypothesis region,
    or always under ``explore=True``) the two covering witnesses.
    Stage failures turn into failure certificates rather than
    exceptions; genuinely malformed inputs (empty sets, a single-point
    B) still raise ValueError.
    """
    if a.is_empty or b.is_empty:
        raise ValueError("both sets must be nonempty")
    if a.measure == 0 or b.measure == 0:
        raise ValueError("both sets must have positive measure")
    swapped = False
    if a.measure < b.measure:
        a, b = b, a
        swapped = True
    na, nb, affine = normalize_pair(a, b)
    affine = AffineMap(
        offset=affine.offset,
        scale=affine.scale,
        int_shift_a=affine.int_shift_a,
        swapped=swapped,
    )

    certificates: list[dict[str, str]] = []
    profile = excess_profile(na, nb)
    split = profile.split
    epsilon = profile.epsilon

    if epsilon < 0:
        certificates.append(
            {
                "stage": "excess",
                "detail": "sumset excess is negative; the pair lies outside the near-equality regime",
            }
        )
        b_cover = conclusion_check_b(nb, epsilon) if explore else None
        a_cover = None
        if explore and b_cover is not None:
            params = StructureParams(
                k=split.k,
                delta=split.delta,
                b=profile.b,
                b_plus=b_cover.b_plus,
                b_minus=b_cover.b_minus,
            )
            a_cover = conclusion_check_a(na, params, epsilon)
        return StructureReport(
            normalized_a=na,
            normalized_b=nb,
            affine=affine,
            split=split,
            epsilon=epsilon,
            profile=profile,
            hypotheses=None,
            deep_level=None,
            entry_bound_ok=None,
            b_cover=b_cover,
            a_cover=a_cover,
            equality_measure_residual=None,
            failure_certificates=tuple(certificates),
            overall="explored" if explore else "out_of_scope",
        )

    hypotheses = hypothesis_check(na, nb, profile=profile)
    in_region = hypotheses.required_all_hold

    deep = deep_level_check(profile)
    if deep.applicable and deep.identity_residual != 0:
        certificates.append(
            {
                "stage": "deep_level",
                "detail": f"deepest-level identity residual {deep.identity_residual} != 0",
            }
        )

    entry_bound_ok: bool | None = None
    if hypotheses.epsilon_rho is Verdict.HOLDS and profile.depth_matches:
        kk = split.k
        entry_bound_ok = (
            profile.max_entry <= kk * epsilon and kk * epsilon <= RHO_0 / profile.b
        )
        if not entry_bound_ok:
            certificates.append(
                {
                    "stage": "profile",
                    "detail": "an excess coefficient exceeds K*epsilon under the rho hypothesis",
                }
            )

    if in_region:
        if not profile.depth_matches:
            certificates.append(
                {
                    "stage": "profile",
                    "detail": f"level depth of A is {profile.k_a}, expected the split k = {split.k}",
                }
            )
        if not profile.nonnegative:
            certificates.append(
                {"stage": "profile", "detail": "a profile coefficient is negative"}
            )
        if profile.split_residual is not None and profile.split_residual != 0:
            certificates.append(
                {
                    "stage": "profile",
                    "detail": f"convex-split identity residual {profile.split_residual} != 0",
                }
            )
        if profile.k_s < split.k + 1:
            certificates.append(
                {
                    "stage": "profile",
                    "detail": "sumset level depth below k + 1",
                }
            )

    b_cover: BCoverReport | None = None
    a_cover: ACoverReport | None = None
    equality_residual: Fraction | None = None
    if in_region or explore:
        b_cover = conclusion_check_b(nb, epsilon)
        if in_region and not b_cover.admissible:
            certificates.append(
                {
                    "stage": "conclusion_b",
                    "detail": (
                        f"minimal cover {b_cover.cover_sum} exceeds allowance "
                        f"{b_cover.allowance}"
                    ),
                }
            )
        params = StructureParams(
            k=split.k,
            delta=split.delta,
            b=profile.b,
            b_plus=b_cover.b_plus,
            b_minus=b_cover.b_minus,
        )
        a_cover = conclusion_check_a(na, params, epsilon)
        if in_region and a_cover.translate is None:
            certificates.append(
                {
                    "stage": "conclusion_a",
                    "detail": "no translate embeds A into the fattened floor structure",
                }
            )
        if epsilon == 0 and b_cover.admissible:
            floors = build_floors(params)
            equality_residual = floors.measure - na.measure
            if equality_residual != 0:
                certificates.append(
                    {
                        "stage": "equality",
                        "detail": (
                            "at zero excess the floor structure measure must match A: "
                            f"residual {equality_residual}"
                        ),
                    }
                )

    if in_region:
        witnesses_ok = (
            b_cover is not None
            and b_cover.admissible
            and a_cover is not None
            and a_cover.translate is not None
        )
        overall = "pass" if witnesses_ok and not certificates else "fail"
    else:
        overall = "explored" if explore else "out_of_scope"

    return StructureReport(
        normalized_a=na,
        normalized_b=nb,
        affine=affine,
        split=split,
        epsilon=epsilon,
        profile=profile,
        hypotheses=hypotheses,
        deep_level=deep,
        entry_bound_ok=entry_bound_ok,
        b_cover=b_cover,
        a_cover=a_cover,
        equality_measure_residual=equality_residual,
        failure_certificates=tuple(certificates),
        overall=overall,
    )
