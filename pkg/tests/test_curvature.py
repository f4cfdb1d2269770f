"""Chart-based curvature, Weitzenboeck and Bochner checks."""

from fractions import Fraction

import numpy as np
import pytest

from formlab.curvature import (ChartMetric, bochner_residual,
                               curvature_at, curvature_operator_matrix,
                               gallot_meyer_check, weitzenbock_at)
from formlab.exterior import multi_indices
from formlab.polynomials import Polynomial
from formlab.polyform import PolyForm
from formlab.sampling import random_form, rng_for

POINTS3 = ([0.0, 0.0, 0.0], [0.2, -0.1, 0.15], [0.3, 0.25, -0.2])


class TestFlatCharts:
    def test_zero_curvature_exactly(self):
        flat = ChartMetric.flat(3)
        for pt in POINTS3:
            data = curvature_at(flat, pt)
            assert np.max(np.abs(data.riemann)) == 0.0

    def test_scaled_flat_zero_curvature(self):
        for pt in POINTS3:
            data = curvature_at(ChartMetric.flat(3, 2.5), pt)
            assert np.max(np.abs(data.riemann)) == 0.0

    def test_weitzenbock_zero_exactly(self):
        flat = ChartMetric.flat(3)
        for p in (1, 2, 3):
            W = weitzenbock_at(flat, POINTS3[1], p)
            assert np.max(np.abs(W)) == 0.0

    def test_constant_polynomial_chart(self):
        entries = [[Polynomial.constant(2, Fraction(2 if i == j else 0))
                    for j in range(2)] for i in range(2)]
        metric = ChartMetric.from_polynomials(entries)
        data = curvature_at(metric, [0.5, -0.3])
        assert np.max(np.abs(data.riemann)) == 0.0


class TestRoundSphereChart:
    def test_sectional_curvature_one_at_origin(self):
        data = curvature_at(ChartMetric.round_sphere(3), [0.0, 0.0, 0.0])
        for i in range(3):
            for j in range(i + 1, 3):
                assert abs(data.sectional(i, j) - 1.0) < 1e-12

    def test_sectional_curvature_one_off_origin(self):
        data = curvature_at(ChartMetric.round_sphere(3), [0.3, -0.1, 0.2])
        for i in range(3):
            for j in range(i + 1, 3):
                assert abs(data.sectional(i, j) - 1.0) < 1e-10

    def test_symmetries_and_bianchi(self):
        data = curvature_at(ChartMetric.round_sphere(4), [0.1, 0.2, -0.15, 0.05])
        assert data.symmetry_defect < 1e-10
        assert data.bianchi_defect < 1e-10

    def test_ricci(self):
        data = curvature_at(ChartMetric.round_sphere(3), [0.2, 0.1, -0.1])
        assert np.max(np.abs(data.ricci() - 2 * np.eye(3))) < 1e-10

    def test_curvature_operator_identity(self):
        data = curvature_at(ChartMetric.round_sphere(3), [0.15, -0.2, 0.1])
        op = curvature_operator_matrix(data)
        assert np.max(np.abs(op - np.eye(3))) < 1e-10


class TestWeitzenbock:
    @pytest.mark.parametrize("m,p", [(3, 1), (3, 2), (4, 1), (4, 2), (4, 3)])
    def test_constant_curvature_scalar(self, m, p):
        rs = ChartMetric.round_sphere(m)
        pt = [0.1] * m
        W = weitzenbock_at(rs, pt, p)
        dim = len(multi_indices(m, p))
        assert np.max(np.abs(W - p * (m - p) * np.eye(dim))) < 1e-8

    def test_degree_one_is_ricci(self):
        rs = ChartMetric.round_sphere(3)
        pt = [0.25, -0.1, 0.3]
        data = curvature_at(rs, pt)
        W = weitzenbock_at(rs, pt, 1, data)
        assert np.max(np.abs(W - data.ricci())) < 1e-10

    def test_symmetric_matrix(self):
        rs = ChartMetric.round_sphere(4)
        W = weitzenbock_at(rs, [0.1, -0.2, 0.05, 0.15], 2)
        assert np.max(np.abs(W - W.T)) < 1e-10

    def test_star_conjugation_spectra(self):
        rs = ChartMetric.round_sphere(4)
        pt = [0.12, -0.08, 0.2, -0.15]
        for p in (1, 2):
            a = np.sort(np.linalg.eigvalsh(weitzenbock_at(rs, pt, p)))
            b = np.sort(np.linalg.eigvalsh(weitzenbock_at(rs, pt, 4 - p)))
            assert np.max(np.abs(a - b)) < 1e-8


class TestBochner:
    def test_flat_cancellation(self):
        flat = ChartMetric.flat(3)
        omega = random_form(rng_for(80, "flat-bochner"), 3, 1, 3)
        rep = bochner_residual(flat, omega, [0.2, -0.1, 0.15], h=1e-2)
        assert rep.residual <= 1e-10

    def test_flat_constant_form(self):
        flat = ChartMetric.flat(3)
        rep = bochner_residual(flat, PolyForm.basis(3, (1, 2)), [0.1, 0.2, 0.0],
                               h=1e-2)
        assert rep.residual <= 1e-12

    def test_round_second_order(self):
        rs = ChartMetric.round_sphere(3)
        omega = random_form(rng_for(81, "round-bochner"), 3, 1, 1)
        rep = bochner_residual(rs, omega, [0.15, -0.2, 0.1], h=1e-3)
        assert rep.residual < 1e-4
        assert rep.order >= 1.9

    def test_round_two_form(self):
        rs = ChartMetric.round_sphere(3)
        omega = random_form(rng_for(82, "round-2form"), 3, 2, 1)
        rep = bochner_residual(rs, omega, [0.1, 0.05, -0.15], h=1e-3)
        assert rep.order >= 1.9

    def test_step_range_enforced(self):
        flat = ChartMetric.flat(3)
        with pytest.raises(ValueError):
            bochner_residual(flat, PolyForm.basis(3, (1,)), [0, 0, 0], h=1e-5)


class TestGallotMeyer:
    def test_flat_zero_bound(self):
        flat = ChartMetric.flat(3)
        rep = gallot_meyer_check(flat, 2, 0.0, POINTS3)
        assert rep.passed

    def test_round_equality_case(self):
        rs = ChartMetric.round_sphere(3)
        rep = gallot_meyer_check(rs, 1, 1.0, POINTS3)
        assert rep.passed
        assert abs(rep.worst_margin) < 1e-8  # constant curvature: equality

    def test_round_m4_p2(self):
        rs = ChartMetric.round_sphere(4)
        pts = [[0.0] * 4, [0.1, -0.2, 0.15, 0.05]]
        rep = gallot_meyer_check(rs, 2, 1.0, pts)
        assert rep.passed

    def test_violated_precondition_detected(self):
        rs = ChartMetric.round_sphere(3)
        rep = gallot_meyer_check(rs, 1, 2.0, POINTS3)  # claims gamma=2: false
        assert not rep.passed


class TestDegeneracies:
    def test_degenerate_metric_rejected(self):
        entries = [[Polynomial.variable(2, 1), Polynomial.zero(2)],
                   [Polynomial.zero(2), Polynomial.one(2)]]
        metric = ChartMetric.from_polynomials(entries)
        with pytest.raises(ValueError):
            curvature_at(metric, [0.0, 0.5])

    def test_asymmetric_entries_rejected(self):
        entries = [[Polynomial.one(2), Polynomial.variable(2, 1)],
                   [Polynomial.zero(2), Polynomial.one(2)]]
        with pytest.raises(ValueError):
            ChartMetric.from_polynomials(entries)
