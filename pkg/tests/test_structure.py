"""Canonical structures, hypothesis verdicts, covers, and the pipeline."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sumsetlab import (
    IntervalSet,
    StructureParams,
    Verdict,
    build_equality_structures,
    build_extremal_family,
    build_floors,
    conclusion_check_a,
    conclusion_check_b,
    excess_profile,
    extremal_base,
    hypothesis_check,
    minkowski_sum,
    normalize_pair,
    verify_main_theorem,
)

from conftest import iset

F = Fraction


class TestNormalizePair:
    def test_oracle(self):
        a = iset((7, 8), (9, 10))
        b = iset((3, 4), (5, 5))
        na, nb, affine = normalize_pair(a, b)
        assert nb.pairs() == [(F(0), F(1, 2)), (F(1), F(1))]
        assert (affine.offset, affine.scale) == (F(3), F(2))
        assert na.min_point == 0 and affine.int_shift_a == 2
        assert na.measure == a.measure / 2

    def test_identity_on_normalized(self, worked_equality):
        na, nb, affine = normalize_pair(worked_equality.a, worked_equality.b)
        assert na == worked_equality.a and nb == worked_equality.b
        assert (affine.offset, affine.scale, affine.int_shift_a) == (F(0), F(1), 0)

    def test_back_mapping(self):
        a = iset((F(29, 2), 15))
        b = iset((3, 5))
        na, nb, affine = normalize_pair(a, b)
        assert affine.to_original_a(na.min_point) == a.min_point

    def test_rejects_point_b(self):
        with pytest.raises(ValueError):
            normalize_pair(iset((0, 1)), IntervalSet.point(2))


class TestStructureParams:
    def test_rejects_bad_values(self):
        good = dict(k=2, delta=F(1, 2), b=F(1, 5), b_plus=F(1, 5), b_minus=F(0))
        StructureParams(**good)
        for patch in (
            {"k": 0},
            {"delta": F(1)},
            {"delta": F(-1, 2)},
            {"b": F(0)},
            {"b_plus": F(-1, 10)},
            {"diam": F(0)},
        ):
            with pytest.raises(ValueError):
                StructureParams(**{**good, **patch})

    def test_floor_measure_total(self, worked_params):
        p = worked_params
        assert p.floor_measure_total == F(2, 5)


class TestCanonicalStructures:
    def test_worked_floors(self, worked_params):
        floors = build_floors(worked_params)
        assert floors.pairs() == [(F(0), F(9, 40)), (F(37, 40), F(11, 10))]

    def test_equality_oracle(self, worked_equality):
        assert worked_equality.a.pairs() == [(F(0), F(9, 40)), (F(37, 40), F(11, 10))]
        assert worked_equality.b.pairs() == [(F(0), F(1, 8)), (F(37, 40), F(1))]
        s = minkowski_sum(worked_equality.a, worked_equality.b)
        assert s.measure == F(9, 10)

    def test_rejects_wrong_block_split(self):
        with pytest.raises(ValueError):
            build_equality_structures(
                StructureParams(k=2, delta=F(1, 2), b=F(1, 5), b_plus=F(1, 5), b_minus=F(1, 5))
            )

    def test_rejects_oversized_b(self):
        with pytest.raises(ValueError):
            build_equality_structures(
                StructureParams(k=3, delta=F(1, 2), b=F(1, 3), b_plus=F(1, 3), b_minus=F(0))
            )

    @given(
        st.integers(min_value=1, max_value=5),
        st.integers(min_value=0, max_value=6),
        st.integers(min_value=1, max_value=8),
        st.integers(min_value=0, max_value=8),
    )
    @settings(max_examples=60)
    def test_equality_identities_hold_generically(self, k, d_num, b_num, w_num):
        delta = F(d_num, 7)
        b = F(b_num, 8 * (k + 1))
        if (k + delta) * b >= 1:
            return
        b_plus = b * F(w_num, 8)
        p = StructureParams(k=k, delta=delta, b=b, b_plus=b_plus, b_minus=b - b_plus)
        eq = build_equality_structures(p)
        assert eq.a.measure == (F(k * (k - 1), 2) + k * delta) * b
        s = minkowski_sum(eq.a, eq.b)
        assert s.measure == eq.a.measure + (k + delta) * b


class TestExtremalFamily:
    def family_params(self, k=3):
        return StructureParams(k=k, delta=F(1, 3), b=F(1, 10), b_plus=F(1, 10), b_minus=F(0))

    def test_base_shape(self):
        base = extremal_base(self.family_params())
        assert base.pairs() == [(F(0), F(1, 10)), (F(1), F(1))]

    def test_rejects_two_sided_blocks(self):
        p = StructureParams(k=3, delta=F(1, 3), b=F(1, 10), b_plus=F(1, 20), b_minus=F(1, 20))
        with pytest.raises(ValueError):
            extremal_base(p)
        with pytest.raises(ValueError):
            build_extremal_family(p, F(1, 100), F(0), 1)

    def test_rejects_bad_split_and_index(self):
        p = self.family_params()
        with pytest.raises(ValueError):
            build_extremal_family(p, F(1, 100), F(1, 50), 1)
        with pytest.raises(ValueError):
            build_extremal_family(p, F(1, 100), F(0), 4)

    @given(
        st.integers(min_value=2, max_value=4),
        st.integers(min_value=1, max_value=4),
        st.integers(min_value=0, max_value=4),
    )
    @settings(max_examples=60)
    def test_sum_measure_identity_every_member(self, k, i, num):
        if i > k:
            return
        p = self.family_params(k)
        eps = F(1, 200)
        eps_prime = eps * F(num, 4)
        member = build_extremal_family(p, eps, eps_prime, i)
        base = extremal_base(p)
        assert member.measure == build_floors(p).measure + eps * p.b
        s = minkowski_sum(member, base)
        assert s.measure == member.measure + (k + p.delta + eps) * p.b


class TestHypothesisCheck:
    def test_worked_equality_all_hold(self, worked_equality):
        rep = hypothesis_check(worked_equality.a, worked_equality.b)
        assert rep.required_all_hold
        assert rep.as_dict() == {
            "b_fits_base_level": "holds",
            "epsilon_cube": "holds",
            "epsilon_log": "holds",
            "epsilon_rho": "holds",
            "main_condition": "holds",
            "weaker_condition": "holds",
        }

    def test_tiny_but_not_tiny_enough(self, worked_equality):
        # Excess 1e-10 passes every structural threshold except the
        # astronomically small entry requirement.
        eps = F(1, 10**10)
        s = 2 * eps * F(1, 5)
        top = worked_equality.a.max_point
        a = worked_equality.a.union(iset((top, top + s)))
        rep = hypothesis_check(a, worked_equality.b)
        assert rep.epsilon == eps
        assert rep.epsilon_cube is Verdict.HOLDS
        assert rep.epsilon_log is Verdict.HOLDS
        assert rep.main_condition is Verdict.HOLDS
        assert rep.epsilon_rho is Verdict.FAILS
        assert not rep.required_all_hold

    def test_oversized_b_fails_fit(self):
        a = iset((0, F(1, 4)), (1, F(5, 4)))
        b = iset((0, F(3, 8)), (F(7, 8), 1))
        rep = hypothesis_check(a, b)
        assert rep.mu_a1 == F(1, 4)
        assert rep.b_fits_base_level is Verdict.FAILS

    def test_rejects_negative_excess(self):
        with pytest.raises(ValueError):
            hypothesis_check(iset((0, 1)), iset((0, 1)))


class TestBCover:
    def test_worked_oracle(self, worked_equality):
        rep = conclusion_check_b(worked_equality.b, 0)
        assert (rep.b_plus, rep.b_minus) == (F(1, 8), F(3, 40))
        assert rep.cover_sum == F(1, 5) == rep.allowance
        assert rep.admissible

    def test_single_block_no_gap(self):
        rep = conclusion_check_b(iset((0, 1)), 0)
        assert (rep.b_plus, rep.b_minus) == (F(1), F(0))
        assert rep.admissible

    def test_leftmost_tie(self):
        b = iset((0, F(1, 5)), (F(2, 5), F(3, 5)), (F(4, 5), 1))
        rep = conclusion_check_b(b, 0)
        assert rep.gap == (F(1, 5), F(2, 5))
        assert (rep.b_plus, rep.b_minus) == (F(1, 5), F(3, 5))
        assert not rep.admissible

    def test_middle_mass_is_inadmissible(self):
        b = iset((0, F(2, 15)), (F(13, 30), F(17, 30)), (F(13, 15), 1))
        rep = conclusion_check_b(b, F(1, 100))
        assert not rep.admissible

    def test_rejects_unnormalized(self):
        with pytest.raises(ValueError):
            conclusion_check_b(iset((1, 2)), 0)


class TestACover:
    def test_worked_singleton(self, worked_equality, worked_params):
        rep = conclusion_check_a(worked_equality.a, worked_params, 0)
        assert rep.feasible.pairs() == [(F(0), F(0))]
        assert rep.translate == 0 and rep.window == 0

    def test_window_absorbs_protrusion(self, worked_equality, worked_params):
        eps = F(1, 100)
        top = worked_equality.a.max_point
        a = worked_equality.a.union(iset((top, top + eps * F(1, 5))))
        assert conclusion_check_a(a, worked_params, 0).translate is None
        rep = conclusion_check_a(a, worked_params, eps)
        assert rep.translate == 0

    def test_shifted_floor_is_infeasible(self, worked_equality, worked_params):
        comps = worked_equality.a.pairs()
        shifted = iset(comps[0], (comps[1][0] + F(1, 50), comps[1][1] + F(1, 50)))
        rep = conclusion_check_a(shifted, worked_params, 0)
        assert rep.feasible.is_empty
        assert rep.translate is None


class TestVerifyMainTheorem:
    def test_equality_pass(self, worked_equality):
        rep = verify_main_theorem(worked_equality.a, worked_equality.b)
        assert rep.overall == "pass"
        assert rep.epsilon == 0
        assert rep.failure_certificates == ()
        assert rep.equality_measure_residual == 0
        assert rep.entry_bound_ok

    def test_swap_is_transparent(self, worked_equality):
        rep = verify_main_theorem(worked_equality.b, worked_equality.a)
        assert rep.affine.swapped
        assert rep.overall == "pass"
        assert rep.epsilon == 0

    def test_fat_pair_is_out_of_scope(self):
        rep = verify_main_theorem(iset((0, 1)), iset((0, 1)))
        assert rep.overall == "out_of_scope"
        assert rep.epsilon == -1
        assert rep.failure_certificates[0]["stage"] == "excess"
        assert rep.hypotheses is None and rep.a_cover is None

    def test_explore_attempts_witnesses_anyway(self):
        rep = verify_main_theorem(iset((0, 1)), iset((0, 1)), explore=True)
        assert rep.overall == "explored"
        assert rep.b_cover is not None and rep.a_cover is not None

    def test_affine_invariance(self, worked_equality):
        base = verify_main_theorem(worked_equality.a, worked_equality.b)
        a = worked_equality.a.scale(3).translate(F(7, 2))
        b = worked_equality.b.scale(3).translate(F(7, 2))
        rep = verify_main_theorem(a, b)
        assert rep.overall == base.overall
        assert rep.epsilon == base.epsilon
        assert rep.split == base.split
        assert rep.normalized_a == base.normalized_a
        assert rep.normalized_b == base.normalized_b

    def test_reflection_invariance(self, worked_equality):
        base = verify_main_theorem(worked_equality.a, worked_equality.b)
        rep = verify_main_theorem(
            worked_equality.a.scale(-1), worked_equality.b.scale(-1)
        )
        assert rep.overall == base.overall == "pass"
        assert rep.epsilon == base.epsilon
        # Reflection swaps the roles of the two end blocks of B.
        assert rep.b_cover.b_plus == base.b_cover.b_minus
        assert rep.b_cover.b_minus == base.b_cover.b_plus

    def test_rejects_degenerate_inputs(self):
        with pytest.raises(ValueError):
            verify_main_theorem(IntervalSet.empty(), iset((0, 1)))
        with pytest.raises(ValueError):
            verify_main_theorem(IntervalSet.point(0), iset((0, 1)))

    def test_report_serializes(self, worked_equality):
        from sumsetlab.serialize import dumps

        rep = verify_main_theorem(worked_equality.a, worked_equality.b)
        obj = rep.to_obj()
        assert obj["schema"] == "structure-report/1"
        assert obj["overall"] == "pass"
        text = dumps(obj)
        assert '"overall":"pass"' in text

    def test_out_of_scope_protrusion_keeps_hypotheses(self, worked_equality):
        eps = F(1, 1000)
        s = 2 * eps * F(1, 5)
        top = worked_equality.a.max_point
        a = worked_equality.a.union(iset((top, top + s)))
        rep = verify_main_theorem(a, worked_equality.b)
        assert rep.overall == "out_of_scope"
        assert rep.hypotheses is not None
        assert rep.hypotheses.epsilon_rho is Verdict.FAILS
        assert rep.b_cover is None and rep.a_cover is None
        rep2 = verify_main_theorem(a, worked_equality.b, explore=True)
        assert rep2.overall == "explored"
        assert rep2.a_cover is not None and rep2.a_cover.translate is not None
