"""Tests for kernel evaluation, the induced metric, and the norm comparison."""

import math

import numpy as np
import pytest

from statesphere import (ConfinedKernel, Delta, DomainError, MetricReference,
                         Packet, StateExpr, TranslationKernel, induced_metric,
                         kernel_value, norm_ratio)

K1 = TranslationKernel(1.0)


class TestKernelValue:
    def test_translation_diagonal_is_one(self):
        assert kernel_value(K1, (1.0, 2.0, 3.0), (1.0, 2.0, 3.0)) == 1.0

    def test_translation_far_points_nearly_vanish(self):
        # |a-b| = 6 gives exp(-18), almost zero within a few length units
        value = kernel_value(K1, (0.0,), (6.0,))
        np.testing.assert_allclose(value, math.exp(-18.0), rtol=1e-14)
        assert value < 2e-8

    def test_confined_origin_is_one(self):
        assert kernel_value(ConfinedKernel(0.01, 1.0), (0.0,), (0.0,)) == 1.0

    def test_symmetry(self):
        rng = np.random.default_rng(3)
        for kernel in (K1, TranslationKernel(0.7), ConfinedKernel(0.2, 1.3)):
            for _ in range(20):
                x = tuple(rng.uniform(-4, 4, 3))
                y = tuple(rng.uniform(-4, 4, 3))
                assert kernel_value(kernel, x, y) == kernel_value(kernel, y, x)

    def test_rejects_bad_parameters(self):
        with pytest.raises(DomainError):
            TranslationKernel(0.0)
        with pytest.raises(DomainError):
            ConfinedKernel(-0.1, 1.0)
        with pytest.raises(DomainError):
            ConfinedKernel(0.1, 0.0)

    def test_rejects_dimension_mismatch(self):
        with pytest.raises(DomainError):
            kernel_value(K1, (0.0,), (0.0, 1.0))


class TestInducedMetric:
    def test_translation_unit_sigma_is_euclidean(self):
        rng = np.random.default_rng(4)
        for _ in range(5):
            report = induced_metric(K1, rng.uniform(-5, 5, 3))
            assert report.reference is MetricReference.EUCLIDEAN
            assert report.deviation <= 1e-6
            np.testing.assert_allclose(report.matrix, np.eye(3), atol=1e-6)

    def test_translation_general_sigma_scales(self):
        # analytic: d^2/dx dy exp(-(x-y)^2 / (2 s^2)) at x = y is I / s^2
        for sigma in (0.5, 2.0):
            report = induced_metric(TranslationKernel(sigma), (0.7, -1.1))
            np.testing.assert_allclose(report.matrix, np.eye(2) / sigma**2,
                                       atol=1e-6 / sigma**4)
            assert report.reference is MetricReference.SCALED_EUCLIDEAN
            assert report.reference_factor == 1.0 / sigma**2

    def test_confined_small_alpha_origin_is_twice_beta(self):
        previous = math.inf
        for alpha in (1e-2, 1e-4, 1e-6):
            report = induced_metric(ConfinedKernel(alpha, 1.0), (0.0, 0.0))
            assert report.reference_factor == 2.0
            assert report.deviation < 1e-8
            assert report.deviation <= previous + 1e-10
            previous = report.deviation

    def test_confined_distortion_grows_with_distance(self):
        kernel = ConfinedKernel(0.3, 1.0)
        deviations = [induced_metric(kernel, (r,)).deviation for r in (0.0, 1.0, 2.0)]
        assert deviations[0] < deviations[1] < deviations[2]

    def test_confined_matches_analytic_form(self):
        # g = exp(-2 a |p|^2) (2 b I + 4 a^2 p p^T)
        alpha, beta = 0.4, 1.2
        point = np.array([1.5, -0.5])
        expected = math.exp(-2 * alpha * point @ point) * (
            2 * beta * np.eye(2) + 4 * alpha**2 * np.outer(point, point))
        report = induced_metric(ConfinedKernel(alpha, beta), point)
        np.testing.assert_allclose(report.matrix, expected, atol=1e-8)

    def test_bare_stencil_converges_at_second_order(self):
        kernel = TranslationKernel(1.3)
        point = (0.4, -0.9)
        exact = np.eye(2) / 1.3**2
        errors = []
        for h in (0.2, 0.1, 0.05, 0.025):
            report = induced_metric(kernel, point, h=h, richardson=False)
            errors.append(np.max(np.abs(report.matrix - exact)))
        for coarse, fine in zip(errors, errors[1:]):
            assert 2.8 <= coarse / fine <= 5.5


class TestNormRatio:
    def test_wide_packet_ratio_near_one(self):
        state = StateExpr.single(Packet((0.0,), 100.0))
        assert abs(norm_ratio(state, K1) - 1.0) <= 1e-3

    def test_single_packet_closed_value(self):
        # ratio of the two closed forms: 1 / sqrt(1 + sigma^2 / (4 w^2))
        for width, sigma in ((1.0, 1.0), (2.0, 0.5), (0.7, 1.5)):
            state = StateExpr.single(Packet((0.3,), width))
            expected = 1.0 / math.sqrt(1.0 + sigma**2 / (4.0 * width**2))
            got = norm_ratio(state, TranslationKernel(sigma))
            np.testing.assert_allclose(got, expected, rtol=1e-12)
            assert got < 1.0

    def test_ratio_invariant_under_coefficient_scale(self):
        base = StateExpr.single(Packet((1.0,), 0.8))
        scaled = base.scaled(0.3 - 1.7j)
        np.testing.assert_allclose(norm_ratio(base, K1), norm_ratio(scaled, K1), rtol=1e-12)

    def test_ratio_invariant_under_length_rescaling(self):
        # lengths and sigma scale together; momenta scale inversely
        for factor in (0.5, 2.0, 5.0):
            base = StateExpr(((1.0, Packet((1.0,), 0.8, (0.6,))),
                              (0.5 + 0.2j, Packet((-0.5,), 1.4, (-0.3,)))))
            scaled = StateExpr(tuple(
                (c, Packet(tuple(x * factor for x in p.center), p.width * factor,
                           tuple(m / factor for m in p.momentum)))
                for c, p in base.terms))
            r0 = norm_ratio(base, TranslationKernel(1.0))
            r1 = norm_ratio(scaled, TranslationKernel(factor))
            np.testing.assert_allclose(r0, r1, rtol=1e-12)

    def test_rejects_non_packets_and_confined(self):
        delta = StateExpr.single(Delta((0.0,)))
        with pytest.raises(DomainError):
            norm_ratio(delta, K1)
        packet = StateExpr.single(Packet((0.0,), 1.0))
        with pytest.raises(DomainError):
            norm_ratio(packet, ConfinedKernel(0.1, 1.0))
