"""Deterministic instance generation, corpus runs, and tightness sweeps.

Instances derive from a seeded `random.Random`; the same spec and
index always reproduce the same pair, so corpus outputs are
byte-identical across runs.  Three generation modes:

* ``equality``: a random canonical extremal pair, zero excess.
* ``perturbed``: an extremal pair deformed by a few tiny defects
  (holes, edge erosions, pinholes, protrusions) whose scale is chosen
  inside the hypothesis region of the rigidity theorem, then verified
  there exactly and shrunk deterministically if needed.  Because the
  strictest hypothesis caps the excess near 1e-1549, these defects are
  far below any practical denominator bound; base structure parameters
  still respect ``denominator_bound``, the defect scale deliberately
  does not (it is a signed power of ten, so coordinates stay compact).
* ``adversarial``: pairs built to violate selected hypotheses or
  conclusions, for exploration and frontier mapping.

Every corpus run re-asserts the unconditional inequalities (Ruzsa
bound, dichotomy bound) and the reflection symmetry of all verdicts on
each instance.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Sequence

from .enclosure import Verdict, log_bracket
from .intervals import Interval, IntervalSet, RatLike, as_fraction, normalize
from .ruzsa import RHO_0, dichotomy_bound, excess_profile, ruzsa_bound
from .structure import (
    StructureParams,
    StructureReport,
    build_equality_structures,
    build_floors,
    conclusion_check_a,
    hypothesis_check,
    verify_main_theorem,
)
from . import serialize

log = logging.getLogger("sumsetlab.harness")

MODES = ("equality", "perturbed", "adversarial")


@dataclass(frozen=True, slots=True)
class InstanceSpec:
    """Reproducible description of an instance family."""

    seed: int
    mode: str = "perturbed"
    k_range: tuple[int, int] = (2, 5)
    denominator_bound: int = 1000
    hole_budget: Fraction = Fraction(1, 100)
    shift_budget: Fraction = Fraction(1, 100)

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        lo, hi = self.k_range
        if not (1 <= lo <= hi):
            raise ValueError("k_range must satisfy 1 <= lo <= hi")
        if self.denominator_bound < 64:
            raise ValueError("denominator_bound must be at least 64")
        object.__setattr__(self, "hole_budget", as_fraction(self.hole_budget))
        object.__setattr__(self, "shift_budget", as_fraction(self.shift_budget))
        if self.hole_budget < 0 or self.shift_budget < 0:
            raise ValueError("budgets must be nonnegative")

    def to_obj(self) -> dict[str, Any]:
        return {
            "seed": self.seed,
            "mode": self.mode,
            "k_range": list(self.k_range),
            "denominator_bound": self.denominator_bound,
            "hole_budget": str(self.hole_budget),
            "shift_budget": str(self.shift_budget),
        }

    @classmethod
    def from_obj(cls, obj: dict[str, Any]) -> "InstanceSpec":
        return cls(
            seed=int(obj["seed"]),
            mode=obj.get("mode", "perturbed"),
            k_range=tuple(obj.get("k_range", (2, 5))),  # type: ignore[arg-type]
            denominator_bound=int(obj.get("denominator_bound", 1000)),
            hole_budget=Fraction(str(obj.get("hole_budget", "1/100"))),
            shift_budget=Fraction(str(obj.get("shift_budget", "1/100"))),
        )


@dataclass(frozen=True, slots=True)
class Instance:
    index: int
    mode: str
    a: IntervalSet
    b: IntervalSet
    params: StructureParams
    note: str


def _draw_params(rng: random.Random, spec: InstanceSpec, *, allow_zero_delta: bool) -> StructureParams:
    lo, hi = spec.k_range
    k = rng.randint(lo, hi)
    q1 = rng.randint(2, 31)
    d_lo = 0 if allow_zero_delta else 1
    delta = Fraction(rng.randint(d_lo, q1 - 1), q1)
    q2_max = spec.denominator_bound // q1
    q2 = rng.randint(k + 2, max(k + 2, q2_max))
    m = rng.randint(1, max(1, q2 // (k + 1)))
    b = Fraction(m, q2)
    w = rng.randint(0, m)
    return StructureParams(
        k=k,
        delta=delta,
        b=b,
        b_plus=Fraction(w, q2),
        b_minus=Fraction(m - w, q2),
    )


def region_epsilon_cap(p: StructureParams) -> Fraction:
    """A rational lower estimate of the largest excess still inside all
    required hypotheses for these parameters; positive when delta > 0
    and (k + delta) * b < 1."""
    if p.delta <= 0:
        raise ValueError("the hypothesis region is empty for delta = 0")
    k = p.k
    ln_hi = log_bracket(k).hi if k > 1 else Fraction(0)
    cube = (p.delta / (3 * k)) ** 3
    caps = [cube, RHO_0 / (k * p.b)]
    if k > 1:
        caps.append((1 - p.delta) / (k**3 * ln_hi))
    slack = 1 - (k + p.delta) * p.b
    if slack <= 0:
        raise ValueError("requires (k + delta) * b < 1")
    caps.append(slack / ((k**2 * ln_hi + 12) * p.b))
    return min(caps)


def _pow10_at_most(x: Fraction) -> Fraction:
    """Largest power of ten not exceeding x, for x > 0."""
    if x <= 0:
        raise ValueError("requires a positive value")
    num, den = x.numerator, x.denominator
    e = len(str(den)) - len(str(num))
    candidate = Fraction(1, 10**e) if e >= 0 else Fraction(10 ** (-e))
    while candidate > x:
        candidate /= 10
    while candidate * 10 <= x:
        candidate *= 10
    return candidate


_PERTURBATIONS = ("hole_a", "erode_a", "pinhole_b", "erode_b", "protrude_a", "shift_a")


def _apply_perturbations(
    rng_choices: list[tuple[str, int, int]],
    p: StructureParams,
    h: Fraction,
) -> tuple[IntervalSet, IntervalSet, str]:
    """Apply the drawn defect list at scale h to the equality pair."""
    eq = build_equality_structures(p)
    a, b = eq.a, eq.b
    notes = []
    for kind, floor_idx, pos in rng_choices:
        floors = list(a.components)
        if kind == "hole_a":
            comp = floors[min(floor_idx, len(floors)) - 1]
            center = comp.lo + comp.length * Fraction(pos, 8)
            hole = IntervalSet.of((center - h / 2, center + h / 2))
            a = a.difference(hole)
        elif kind == "erode_a":
            comp = floors[min(floor_idx, len(floors)) - 1]
            a = a.difference(IntervalSet.of((comp.hi - h, comp.hi)))
        elif kind == "pinhole_b":
            if p.b_plus > 2 * h:
                cut = IntervalSet.of((p.b_plus - h, p.b_plus))
                b = b.difference(cut).union(IntervalSet.point(p.b_plus))
            else:
                kind = "skipped_pinhole_b"
        elif kind == "erode_b":
            if p.b_plus > 2 * h:
                b = b.difference(IntervalSet.of((p.b_plus - h, p.b_plus)))
            else:
                kind = "skipped_erode_b"
        elif kind == "protrude_a":
            top = a.max_point
            a = a.union(IntervalSet.of((top, top + h)))
        elif kind == "shift_a":
            if p.k >= 3:
                idx = 1 + (floor_idx % (p.k - 2)) if p.k > 3 else 1
                comp = floors[idx]
                shifted = IntervalSet(tuple(floors[:idx] + floors[idx + 1 :]))
                a = shifted.union(IntervalSet.of((comp.lo + h, comp.hi + h)))
            else:
                top = a.max_point
                a = a.union(IntervalSet.of((top, top + h)))
                kind = "protrude_a_fallback"
        notes.append(kind)
    return a, b, "+".join(notes)


def generate_instance(spec: InstanceSpec, index: int = 0) -> Instance:
    """Deterministically build instance `index` of the family."""
    rng = random.Random(f"{spec.seed}:{spec.mode}:{index}")
    if spec.mode == "equality":
        p = _draw_params(rng, spec, allow_zero_delta=True)
        eq = build_equality_structures(p)
        return Instance(index=index, mode=spec.mode, a=eq.a, b=eq.b, params=p, note="equality")

    if spec.mode == "perturbed":
        p = _draw_params(rng, spec, allow_zero_delta=False)
        cap = region_epsilon_cap(p)
        n_defects = rng.randint(1, 3)
        choices = [
            (rng.choice(_PERTURBATIONS), rng.randint(1, p.k), rng.randint(1, 7))
            for _ in range(n_defects)
        ]
        digit = rng.randint(1, 9)
        unit = cap * p.b / (32 * (p.k + 1))
        if spec.hole_budget > 0:
            unit = min(unit, spec.hole_budget)
        h = digit * _pow10_at_most(unit) / 10
        for attempt in range(6):
            a, b, note = _apply_perturbations(choices, p, h)
            profile = excess_profile(a, b)
            if profile.epsilon >= 0 and profile.depth_matches:
                hyp = hypothesis_check(a, b, profile=profile)
                if hyp.required_all_hold:
                    return Instance(index=index, mode=spec.mode, a=a, b=b, params=p, note=note)
            log.debug("index %d attempt %d at scale %s rejected", index, attempt, h)
            h /= 10
        raise RuntimeError(
            f"could not place instance {index} inside the hypothesis region "
            f"(seed {spec.seed}, params {p})"
        )

    # adversarial
    p = _draw_params(rng, spec, allow_zero_delta=False)
    kind = rng.choice(("flat_delta", "middle_mass", "big_shift", "fat"))
    if kind == "flat_delta":
        p0 = StructureParams(
            k=p.k, delta=Fraction(0), b=p.b, b_plus=p.b_plus, b_minus=p.b_minus
        )
        eq = build_equality_structures(p0)
        return Instance(index=index, mode=spec.mode, a=eq.a, b=eq.b, params=p0, note=kind)
    if kind == "middle_mass":
        fifth = p.b / 5
        mid = (1 - fifth) / 2
        b3 = normalize(
            [
                Interval(Fraction(0), 2 * fifth),
                Interval(mid, mid + fifth),
                Interval(1 - 2 * fifth, Fraction(1)),
            ]
        )
        pm = StructureParams(
            k=p.k, delta=p.delta, b=p.b, b_plus=2 * fifth, b_minus=2 * fifth
        )
        a = build_floors(pm)
        return Instance(index=index, mode=spec.mode, a=a, b=b3, params=pm, note=kind)
    if kind == "big_shift":
        eq = build_equality_structures(p)
        sigma = max(spec.shift_budget * p.b, Fraction(1, 100) * p.b)
        comps = list(eq.a.components)
        if len(comps) >= 2:
            moved = comps[-1]
            rest = IntervalSet(tuple(comps[:-1]))
            a = rest.union(IntervalSet.of((moved.lo + sigma, moved.hi + sigma)))
        else:
            a = eq.a.union(IntervalSet.of((eq.a.max_point + sigma, eq.a.max_point + 2 * sigma)))
        return Instance(index=index, mode=spec.mode, a=a, b=eq.b, params=p, note=kind)
    # fat: measure(B) so large that (k + delta) * b exceeds the hull
    pf = StructureParams(
        k=p.k, delta=p.delta, b=Fraction(1), b_plus=Fraction(1, 2), b_minus=Fraction(1, 2)
    )
    a = build_floors(pf)
    return Instance(
        index=index,
        mode=spec.mode,
        a=a,
        b=IntervalSet.of((0, 1)),
        params=pf,
        note=kind,
    )


def _verdict_projection(report: StructureReport) -> tuple:
    """The invariant content of a report: everything but coordinates."""
    return (
        report.overall,
        report.split.k,
        report.split.delta,
        report.epsilon,
        None if report.hypotheses is None else tuple(sorted(report.hypotheses.as_dict().items())),
        None if report.b_cover is None else report.b_cover.admissible,
        None if report.a_cover is None else (report.a_cover.translate is not None),
    )


@dataclass(frozen=True, slots=True)
class CorpusResult:
    spec: InstanceSpec
    n: int
    explore: bool
    digests: tuple[dict[str, Any], ...]
    aggregates: dict[str, Any]

    def to_obj(self) -> dict[str, Any]:
        return {
            "schema": "corpus-result/1",
            "spec": self.spec.to_obj(),
            "n": self.n,
            "explore": self.explore,
            "aggregates": self.aggregates,
            "instances": list(self.digests),
        }

    def to_json_bytes(self) -> bytes:
        return serialize.dump_bytes(self.to_obj())

    def to_csv(self) -> str:
        return serialize.rows_to_csv(list(self.digests))


def run_corpus(spec: InstanceSpec, n: int, *, explore: bool = False) -> CorpusResult:
    """Generate and verify n instances; returns a deterministic result.

    Instances are independent, so the loop could be sharded by index
    and merged in order; the sequential run already meets the library's
    time budgets, and keeping one code path keeps outputs canonical.
    """
    if n < 1:
        raise ValueError("n must be positive")
    use_explore = explore or spec.mode == "adversarial"
    digests: list[dict[str, Any]] = []
    overall_counts: dict[str, int] = {}
    ruzsa_violations = 0
    dichotomy_violations = 0
    chi_mismatches = 0
    max_split_residual = Fraction(0)
    witnesses_b = witnesses_a = 0

    for index in range(n):
        inst = generate_instance(spec, index)
        report = verify_main_theorem(inst.a, inst.b, explore=use_explore)

        rz = ruzsa_bound(inst.a, inst.b)
        if not rz.holds:
            ruzsa_violations += 1
        dich = dichotomy_bound(inst.a, inst.b)
        if not dich.holds:
            dichotomy_violations += 1
        mirror = verify_main_theorem(inst.a.reflect(), inst.b.reflect(), explore=use_explore)
        if _verdict_projection(mirror) != _verdict_projection(report):
            chi_mismatches += 1

        if report.profile is not None and report.profile.split_residual is not None:
            max_split_residual = max(max_split_residual, abs(report.profile.split_residual))
        if report.b_cover is not None and report.b_cover.admissible:
            witnesses_b += 1
        if report.a_cover is not None and report.a_cover.translate is not None:
            witnesses_a += 1
        overall_counts[report.overall] = overall_counts.get(report.overall, 0) + 1

        digests.append(
            {
                "index": index,
                "mode": inst.mode,
                "note": inst.note,
                "k": report.split.k,
                "delta": serialize.scalar(report.split.delta),
                "b": serialize.scalar(inst.b.measure),
                "epsilon": serialize.scalar(report.epsilon),
                "overall": report.overall,
                "hypotheses": None if report.hypotheses is None else report.hypotheses.as_dict(),
                "b_admissible": None if report.b_cover is None else report.b_cover.admissible,
                "a_translate": (
                    None
                    if report.a_cover is None or report.a_cover.translate is None
                    else serialize.scalar(report.a_cover.translate)
                ),
                "certificates": [c["stage"] for c in report.failure_certificates],
            }
        )

    aggregates = {
        "overall": dict(sorted(overall_counts.items())),
        "ruzsa_violations": ruzsa_violations,
        "dichotomy_violations": dichotomy_violations,
        "reflection_mismatches": chi_mismatches,
        "max_split_residual": serialize.scalar(max_split_residual),
        "b_witnesses": witnesses_b,
        "a_witnesses": witnesses_a,
    }
    return CorpusResult(
        spec=spec, n=n, explore=use_explore, digests=tuple(digests), aggregates=aggregates
    )


@dataclass(frozen=True, slots=True)
class SweepResult:
    params: StructureParams
    rows: tuple[dict[str, Any], ...]
    frontier: dict[str, Any]

    def to_obj(self) -> dict[str, Any]:
        return {
            "schema": "sweep-result/1",
            "params": {
                "k": self.params.k,
                "delta": serialize.scalar(self.params.delta),
                "b": serialize.scalar(self.params.b),
                "b_plus": serialize.scalar(self.params.b_plus),
                "b_minus": serialize.scalar(self.params.b_minus),
            },
            "rows": list(self.rows),
            "frontier": self.frontier,
        }

    def to_json_bytes(self) -> bytes:
        return serialize.dump_bytes(self.to_obj())

    def to_csv(self) -> str:
        return serialize.rows_to_csv(list(self.rows))


def _threshold_verdicts(p: StructureParams, eps: Fraction) -> dict[str, str]:
    """Hypothesis verdicts at the base parameters for a nominal excess,
    independent of any concrete instance; exact thresholds flip here."""
    k = p.k
    ln_k = log_bracket(k)
    cube = Verdict.HOLDS if eps < (p.delta / (3 * k)) ** 3 else Verdict.FAILS
    log_v = (Fraction(k**3) * ln_k * eps).compare_lt(1 - p.delta)
    rho = Verdict.HOLDS if eps < RHO_0 / (k * p.b) else Verdict.FAILS
    main = ((k + p.delta + (Fraction(k**2) * ln_k + 12) * eps) * p.b).compare_lt(1)
    return {
        "epsilon_cube": cube.value,
        "epsilon_log": log_v.value,
        "epsilon_rho": rho.value,
        "main_condition": main.value,
    }


def tightness_sweep(spec: InstanceSpec, epsilon_grid: Sequence[RatLike]) -> SweepResult:
    """Walk an excess grid with two arms per point.

    The calibrated arm realizes each grid excess exactly with a
    protrusion of length eps * b * k/(k-1) on the top floor and runs
    the full pipeline; the adversarial arm shifts the top floor by
    2 * eps * b and additionally embeds against the window of the grid
    excess, where the shifted member must fail to embed.  Rows also
    carry parameter-level threshold verdicts, which flip exactly at
    the stated boundaries; the frontier summary reports the first grid
    point at which each hypothesis stops holding.
    """
    rng = random.Random(f"{spec.seed}:sweep")
    lo, hi = spec.k_range
    sweep_spec = spec if lo >= 2 else InstanceSpec(
        seed=spec.seed,
        mode=spec.mode,
        k_range=(2, max(2, hi)),
        denominator_bound=spec.denominator_bound,
        hole_budget=spec.hole_budget,
        shift_budget=spec.shift_budget,
    )
    p = _draw_params(rng, sweep_spec, allow_zero_delta=False)
    eq = build_equality_structures(p)
    rows: list[dict[str, Any]] = []
    first_flip: dict[str, Any] = {
        "epsilon_cube": None,
        "epsilon_log": None,
        "epsilon_rho": None,
        "main_condition": None,
    }

    for eps in (as_fraction(e) for e in epsilon_grid):
        if eps < 0:
            raise ValueError("the excess grid must be nonnegative")
        thresholds = _threshold_verdicts(p, eps)
        for name, value in thresholds.items():
            if value != Verdict.HOLDS.value and first_flip[name] is None:
                first_flip[name] = serialize.scalar(eps)

        # Calibrated arm: exact excess via a top-floor protrusion.
        s = eps * p.b * Fraction(p.k, p.k - 1)
        top = eq.a.max_point
        a_cal = eq.a.union(IntervalSet.of((top, top + s))) if s > 0 else eq.a
        rep_cal = verify_main_theorem(a_cal, eq.b, explore=True)
        rows.append(
            {
                "eps_requested": serialize.scalar(eps),
                "arm": "calibrated",
                "eps_actual": serialize.scalar(rep_cal.epsilon),
                "eps_matches": rep_cal.epsilon == eps,
                "overall": rep_cal.overall,
                "hypotheses": None if rep_cal.hypotheses is None else rep_cal.hypotheses.as_dict(),
                "thresholds": thresholds,
                "b_admissible": None if rep_cal.b_cover is None else rep_cal.b_cover.admissible,
                "a_witness": rep_cal.a_cover is not None and rep_cal.a_cover.translate is not None,
                "a_witness_at_grid": None,
            }
        )

        # Adversarial arm: top floor shifted by twice the grid excess.
        sigma = 2 * eps * p.b
        comps = list(eq.a.components)
        moved = comps[-1]
        rest = IntervalSet(tuple(comps[:-1]))
        a_adv = (
            rest.union(IntervalSet.of((moved.lo + sigma, moved.hi + sigma)))
            if sigma > 0
            else eq.a
        )
        rep_adv = verify_main_theorem(a_adv, eq.b, explore=True)
        at_grid = None
        if rep_adv.b_cover is not None:
            grid_params = StructureParams(
                k=rep_adv.split.k,
                delta=rep_adv.split.delta,
                b=rep_adv.profile.b if rep_adv.profile else p.b,
                b_plus=rep_adv.b_cover.b_plus,
                b_minus=rep_adv.b_cover.b_minus,
            )
            at_grid = (
                conclusion_check_a(rep_adv.normalized_a, grid_params, eps).translate is not None
            )
        rows.append(
            {
                "eps_requested": serialize.scalar(eps),
                "arm": "adversarial",
                "eps_actual": serialize.scalar(rep_adv.epsilon),
                "eps_matches": rep_adv.epsilon == eps,
                "overall": rep_adv.overall,
                "hypotheses": None if rep_adv.hypotheses is None else rep_adv.hypotheses.as_dict(),
                "thresholds": thresholds,
                "b_admissible": None if rep_adv.b_cover is None else rep_adv.b_cover.admissible,
                "a_witness": rep_adv.a_cover is not None and rep_adv.a_cover.translate is not None,
                "a_witness_at_grid": at_grid,
            }
        )

    return SweepResult(params=p, rows=tuple(rows), frontier=first_flip)
