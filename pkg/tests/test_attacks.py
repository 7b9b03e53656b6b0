"""Attack transformations: saturation, rescaling, shuffling, capture."""

import numpy as np
import pytest
from hypothesis import given, strategies as st

from byzfdr.attacks import (
    apply_attack,
    bh_classifier_attack,
    enhanced_bh_classifier_attack,
    oracle_attack,
    select_captured,
    shuffling_attack,
)
from byzfdr.bh import bh_procedure
from byzfdr.model import PValueReport, build_hypotheses, split_reports

pvalue_lists = st.lists(st.floats(0.0, 1.0, allow_nan=False), min_size=1, max_size=20)


def report_of(values, node_id=0, ids=None):
    values = np.asarray(values, dtype=float)
    if ids is None:
        ids = np.arange(values.size)
    return PValueReport(node_id, np.asarray(ids), values)


class TestOracleAttack:
    def test_labels_drive_rewrite(self):
        hs = build_hypotheses(4, 2, 2, nulls_per_node=(1, 1))
        report = report_of([0.7, 0.001], ids=[0, 1])
        out = oracle_attack(report, hs)
        assert out.pvalues.tolist() == [0.0, 1.0]

    def test_all_null(self):
        hs = build_hypotheses(4, 4, 2, nulls_per_node=(2, 2))
        out = oracle_attack(report_of([0.3, 0.6]), hs)
        assert out.pvalues.tolist() == [0.0, 0.0]

    def test_all_nonnull(self):
        hs = build_hypotheses(4, 0, 2, nulls_per_node=(0, 0))
        out = oracle_attack(report_of([0.3, 0.6]), hs)
        assert out.pvalues.tolist() == [1.0, 1.0]

    def test_emits_only_saturated_values(self):
        hs = build_hypotheses(20, 11, 2, nulls_per_node=(5, 6))
        rng = np.random.default_rng(0)
        out = oracle_attack(report_of(rng.uniform(size=10), node_id=1, ids=np.arange(10, 20)), hs)
        assert set(np.unique(out.pvalues)) <= {0.0, 1.0}


class TestBhClassifierAttack:
    def test_hand_worked_example(self):
        out, r_a = bh_classifier_attack(report_of([0.001, 0.5, 0.9]), 0.05)
        assert out.pvalues.tolist() == [1.0, 0.0, 0.0]
        assert r_a == 1

    def test_nothing_locally_rejected(self):
        out, r_a = bh_classifier_attack(report_of([1.0, 1.0, 1.0]), 0.05)
        assert out.pvalues.tolist() == [0.0, 0.0, 0.0]
        assert r_a == 0

    def test_everything_locally_rejected(self):
        out, r_a = bh_classifier_attack(report_of([0.0, 0.0]), 0.05)
        assert out.pvalues.tolist() == [1.0, 1.0]
        assert r_a == 2

    def test_empty_report_rejected(self):
        empty = PValueReport(0, np.array([], dtype=int), np.array([]))
        with pytest.raises(ValueError):
            bh_classifier_attack(empty, 0.05)
        with pytest.raises(ValueError):
            enhanced_bh_classifier_attack(empty, 0.05)

    @given(pvalue_lists, st.floats(0.01, 0.5))
    def test_ones_count_equals_local_rejections(self, values, q):
        out, r_a = bh_classifier_attack(report_of(values), q)
        assert int((out.pvalues == 1.0).sum()) == r_a
        assert set(np.unique(out.pvalues)) <= {0.0, 1.0}
        assert r_a == bh_procedure(values, q).r


class TestEnhancedAttack:
    def test_degenerate_intervals_example(self):
        """One classified non-null at 0.01 against classified nulls
        {0.5, 1.0}: nulls collapse onto 0.01, the non-null goes to the
        midpoint 0.75."""
        out, i0 = enhanced_bh_classifier_attack(report_of([0.01, 0.5, 1.0]), 0.05)
        assert i0 == 1
        assert out.pvalues.tolist() == [0.75, 0.01, 0.01]

    def test_no_local_rejections_leaves_report_unchanged(self):
        report = report_of([0.5, 0.9])
        out, i0 = enhanced_bh_classifier_attack(report, 0.05)
        assert i0 == 0
        assert out is report

    def test_everything_rejected_leaves_report_unchanged(self):
        report = report_of([0.0, 0.0])
        out, i0 = enhanced_bh_classifier_attack(report, 0.05)
        assert i0 == 2
        assert out is report

    def test_singletons_swap(self):
        out, i0 = enhanced_bh_classifier_attack(report_of([0.001, 0.8]), 0.05)
        assert i0 == 1
        assert out.pvalues.tolist() == [0.8, 0.001]

    def test_affine_map_values(self):
        values = [0.001, 0.002, 0.5, 0.6, 1.0]
        out, i0 = enhanced_bh_classifier_attack(report_of(values), 0.05)
        assert i0 == 2
        expected = [0.5, 1.0, 0.001, 0.001 + 0.1 * 0.001 / 0.5, 0.002]
        assert np.allclose(out.pvalues, expected, rtol=0, atol=1e-15)

    @given(pvalue_lists, st.floats(0.01, 0.5))
    def test_order_preserved_within_classes(self, values, q):
        report = report_of(values)
        out, i0 = enhanced_bh_classifier_attack(report, q)
        m = len(values)
        if i0 == 0 or i0 == m:
            assert out is report
            return
        local = bh_procedure(values, q, ids=np.arange(m))
        rejected = np.zeros(m, dtype=bool)
        rejected[local.rejected] = True
        for cls, other in ((rejected, ~rejected), (~rejected, rejected)):
            src = np.asarray(values)[cls]
            dst = out.pvalues[cls]
            order = np.argsort(src, kind="stable")
            assert np.all(np.diff(dst[order]) >= 0)
            target = np.asarray(values)[other]
            assert dst.min() >= target.min() - 1e-12
            assert dst.max() <= target.max() + 1e-12


class TestShufflingAttack:
    def test_value_multiset_preserved(self):
        rng = np.random.default_rng(0)
        report = report_of(rng.uniform(size=50))
        out = shuffling_attack(report, rng)
        assert np.array_equal(np.sort(out.pvalues), np.sort(report.pvalues))
        assert np.array_equal(out.ids, report.ids)

    def test_single_entry_unchanged(self):
        report = report_of([0.42])
        out = shuffling_attack(report, np.random.default_rng(0))
        assert out.pvalues.tolist() == [0.42]

    def test_assignments_are_uniform(self):
        """All 6 permutations of a 3-entry report occur with frequency
        1/6 within 3 binomial standard errors (frozen stream)."""
        rng = np.random.default_rng(13)
        report = report_of([0.1, 0.2, 0.3])
        counts: dict[tuple, int] = {}
        draws = 100_000
        for _ in range(draws):
            key = tuple(shuffling_attack(report, rng).pvalues)
            counts[key] = counts.get(key, 0) + 1
        assert len(counts) == 6
        tol = 3 * np.sqrt((1 / 6) * (5 / 6) / draws)
        for count in counts.values():
            assert abs(count / draws - 1 / 6) <= tol

    def test_global_rejection_count_unchanged(self):
        rng = np.random.default_rng(5)
        pooled = np.concatenate([rng.uniform(size=60), rng.uniform(0, 0.001, size=6)])
        shuffled = pooled.copy()
        shuffled[:33] = np.random.default_rng(9).permutation(shuffled[:33])
        assert bh_procedure(pooled, 0.1).r == bh_procedure(shuffled, 0.1).r


class TestSelectCaptured:
    def test_zero_fraction(self):
        assert select_captured(20, 0.0, np.random.default_rng(0)).size == 0

    def test_full_fraction(self):
        got = select_captured(20, 1.0, np.random.default_rng(0))
        assert got.tolist() == list(range(20))

    def test_partial_fraction(self):
        got = select_captured(20, 0.2, np.random.default_rng(3))
        assert got.size == 4
        assert len(set(got.tolist())) == 4
        assert got.min() >= 0 and got.max() < 20
        assert np.all(np.diff(got) > 0)

    def test_size_follows_rounding(self):
        for d, lam in ((10, 0.25), (5, 0.5), (7, 0.33)):
            got = select_captured(d, lam, np.random.default_rng(1))
            assert got.size == int(round(lam * d))


class TestApplyAttack:
    def _setup(self):
        hs = build_hypotheses(12, 6, 3, nulls_per_node=(3, 2, 1))
        rng = np.random.default_rng(21)
        p = rng.uniform(size=12)
        return hs, split_reports(hs, p), rng

    def test_uncaptured_reports_pass_by_reference(self):
        hs, reports, rng = self._setup()
        outcome = apply_attack("oracle", reports, [1], hs, 0.05, rng)
        assert outcome.reports[0] is reports[0]
        assert outcome.reports[2] is reports[2]
        assert outcome.reports[1] is not reports[1]

    def test_per_node_stats(self):
        hs, reports, rng = self._setup()
        outcome = apply_attack("bh_classifier", reports, [0, 2], hs, 0.05, rng)
        assert [s.node_id for s in outcome.per_node] == [0, 2]
        assert [s.m0 for s in outcome.per_node] == [3, 1]
        assert all(s.r_a is not None for s in outcome.per_node)
        assert outcome.m0_realized == 4

    def test_oracle_and_shuffle_leave_no_local_count(self):
        hs, reports, rng = self._setup()
        for model in ("oracle", "shuffling"):
            outcome = apply_attack(model, reports, [1], hs, 0.05, rng)
            assert outcome.per_node[0].r_a is None

    def test_none_touches_nothing(self):
        hs, reports, rng = self._setup()
        outcome = apply_attack("none", reports, [], hs, 0.05, rng)
        assert all(a is b for a, b in zip(outcome.reports, reports))
        assert outcome.per_node == ()
        assert outcome.m0_realized == 0

    def test_unknown_model(self):
        hs, reports, rng = self._setup()
        with pytest.raises(ValueError):
            apply_attack("bogus", reports, [0], hs, 0.05, rng)


class TestLocalCountStability:
    def test_zeroing_a_pvalue_never_flips_its_own_indicator(self):
        """For every null index i, 1{p_i > q*R_a(p_i->0)/m} equals
        1{p_i > q*R_a/m}, with the pushed-to-zero count recomputed by
        brute-force replay (quick version of the exhaustive acceptance
        check)."""
        rng = np.random.default_rng(99)
        for _ in range(500):
            m = int(rng.integers(1, 31))
            values = np.where(
                rng.uniform(size=m) < 0.7,
                rng.uniform(size=m),
                rng.uniform(0, 0.02, size=m),
            )
            q = float(rng.choice([0.05, 0.2]))
            r_a = bh_procedure(values, q).r
            for i in range(m):
                pushed = values.copy()
                pushed[i] = 0.0
                r_a_zero = bh_procedure(pushed, q).r
                assert (values[i] > q * r_a / m) == (values[i] > q * r_a_zero / m)
