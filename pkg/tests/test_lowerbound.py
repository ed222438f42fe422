import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from widthlab import (
    DkDistribution,
    FunctionFamily,
    NotUnitNorm,
    PackingFailed,
    ParameterOutOfRange,
    WrongMeasure,
    check_boas_bellman,
    coherence,
    count_ball,
    enumerate_ball,
    eval_T,
    explicit_hard_function,
    fit_span,
    gaussian_hard_family,
    hard_family_ball,
    hard_family_symmetric,
    l2_norm,
    lb_parameters,
    projection_residuals,
    randict_bound,
    sobolev_lb_parameters,
)

SQRT2 = math.sqrt(2.0)


def _relu_features(rng, n, d):
    dist = DkDistribution(k=2, dimension=d)
    return [dist.sample_feature(rng) for _ in range(n)]


class TestCoherence:
    """Root-sum-square of off-diagonal Gram entries."""

    def test_orthonormal_family_is_incoherent(self, cube_grid_2d):
        fam = hard_family_ball(2, 2)
        assert coherence(fam, cube_grid_2d) <= 1e-9

    def test_duplicate_member_coherence(self, cube_grid_1d):
        member = lambda nodes: np.asarray(eval_T((1,), nodes))
        fam = FunctionFamily(labels=[0, 1], members=[member, member], dimension=1)
        assert_allclose(coherence(fam, cube_grid_1d), SQRT2, rtol=1e-9)

    def test_requires_unit_norms(self, cube_grid_1d):
        fam = FunctionFamily(labels=[0], members=[
            lambda nodes: 2.0 * np.asarray(eval_T((1,), nodes))
        ], dimension=1)
        with pytest.raises(NotUnitNorm):
            coherence(fam, cube_grid_1d)


class TestRandictBound:
    """1 - r (1 + kappa) / N."""

    def test_values(self):
        assert randict_bound(1, 4, 0.0) == 0.75
        assert randict_bound(0, 7, 0.3) == 1.0
        assert_allclose(randict_bound(2, 8, 0.5), 1.0 - 2 * 1.5 / 8)

    def test_can_go_negative(self):
        assert randict_bound(10, 4, 0.0) == -1.5

    def test_monotone_in_coherence(self):
        assert randict_bound(2, 6, 0.1) < randict_bound(2, 6, 0.0)

    def test_rejects_bad_inputs(self):
        with pytest.raises(ParameterOutOfRange):
            randict_bound(1, 0, 0.0)
        with pytest.raises(ParameterOutOfRange):
            randict_bound(-1, 4, 0.0)


class TestProjectionResiduals:
    """Per-member squared residuals against a feature span."""

    def test_empty_span_gives_norms(self, cube_grid_2d):
        fam = hard_family_ball(2, 2)
        report = projection_residuals([], fam, cube_grid_2d)
        assert report.r == 0 and report.N == 13
        assert_allclose(report.residuals, np.ones(13), atol=1e-12)
        assert_allclose(report.mean_residual, 1.0, atol=1e-12)
        assert report.bound == 1.0

    def test_matches_per_member_fits(self, cube_grid_2d):
        """Multi-target least squares equals member-by-member fit_span."""
        rng = np.random.default_rng(42)
        feats = _relu_features(rng, 3, 2)
        fam = hard_family_ball(2, 2)
        report = projection_residuals(feats, fam, cube_grid_2d)
        for i, member in enumerate(fam.members):
            single = fit_span(feats, member, cube_grid_2d)
            assert_allclose(report.residuals[i], single.l2_error**2, atol=1e-10)

    def test_mean_residual_respects_bound(self, cube_grid_2d):
        """Deterministic form of the bound: holds for every draw, not just
        in expectation, because the span has rank at most r."""
        rng = np.random.default_rng(42)
        fam = hard_family_ball(2, 2)
        for r in (1, 3, 6):
            feats = _relu_features(rng, r, 2)
            report = projection_residuals(feats, fam, cube_grid_2d)
            assert report.mean_residual >= report.bound - 1e-9

    def test_captured_energy_rank_bound(self, cube_grid_2d):
        """sum_i |Pi phi_i|^2 <= r (1 + kappa) for an orthonormal family."""
        rng = np.random.default_rng(42)
        fam = hard_family_ball(2, 2)
        for r in (1, 2, 5):
            feats = _relu_features(rng, r, 2)
            report = projection_residuals(feats, fam, cube_grid_2d)
            captured = float(np.sum(1.0 - report.residuals))
            assert captured <= r * (1.0 + 1e-6)

    def test_report_serializes(self, cube_grid_2d):
        fam = hard_family_ball(1, 2)
        doc = projection_residuals([], fam, cube_grid_2d).to_json_dict()
        assert doc["N"] == 5 and doc["r"] == 0
        assert isinstance(doc["labels"][0], list)


class TestBoasBellman:
    """sum_i <g, phi_i>^2 <= |g|^2 (max_i |phi_i|^2 + kappa)."""

    def test_member_near_equality(self, cube_grid_2d):
        fam = hard_family_ball(2, 2)
        lhs, rhs = check_boas_bellman(fam.members[0], fam, cube_grid_2d)
        assert lhs <= rhs + 1e-12
        assert_allclose(lhs, 1.0, atol=1e-10)
        assert_allclose(rhs, 1.0, atol=1e-8)

    def test_orthogonal_function(self, cube_grid_2d):
        """A basis element outside the family has all zero inner products."""
        fam = hard_family_ball(1, 2)
        g = lambda nodes: np.asarray(eval_T((1, 1), nodes))
        lhs, rhs = check_boas_bellman(g, fam, cube_grid_2d)
        assert lhs <= 1e-12
        assert rhs >= 1.0 - 1e-9

    def test_holds_for_random_functions(self, cube_grid_2d):
        rng = np.random.default_rng(42)
        fam = hard_family_ball(2, 2)
        for feat in _relu_features(rng, 5, 2):
            lhs, rhs = check_boas_bellman(lambda n, _f=feat: _f.evaluate(n),
                                          fam, cube_grid_2d)
            assert lhs <= rhs + 1e-12

    def test_non_unit_members_allowed(self, cube_grid_1d):
        """Norms enter through the measured Gram, not an assumption."""
        fam = FunctionFamily(labels=[0], members=[
            lambda nodes: 3.0 * np.asarray(eval_T((1,), nodes))
        ], dimension=1)
        lhs, rhs = check_boas_bellman(fam.members[0], fam, cube_grid_1d)
        assert lhs <= rhs + 1e-9
        assert_allclose(lhs, 81.0, rtol=1e-10)  # <3T, 3T>^2
        assert_allclose(rhs, 81.0, rtol=1e-8)  # |3T|^2 * max|3T|^2


class TestHardFamilies:
    """Cube-side hard instances."""

    def test_ball_family_size_and_flags(self):
        fam = hard_family_ball(1, 2)
        assert len(fam) == 5
        assert fam.declared_orthonormal and fam.coherence == 0.0
        assert fam.labels == enumerate_ball(1, 2)

    def test_ball_family_members_are_basis(self, cube_grid_2d):
        fam = hard_family_ball(1, 2)
        X = cube_grid_2d.nodes[:10]
        for K, member in zip(fam.labels, fam.members):
            assert_allclose(member(X), np.asarray(eval_T(K, X)), atol=1e-14)

    def test_symmetric_family_counts(self):
        assert len(hard_family_symmetric(2, 4)) == 6
        assert len(hard_family_symmetric(3, 3)) == 1

    def test_symmetric_member_values(self):
        """Member for subset S is sqrt(2) sin(pi sum_{i in S} x_i)."""
        fam = hard_family_symmetric(2, 3)
        x = np.array([[0.3, -0.2, 0.5]])
        idx = fam.labels.index((0, 2))
        assert_allclose(fam.members[idx](x),
                        SQRT2 * math.sin(math.pi * (0.3 + 0.5)), rtol=1e-12)

    def test_symmetric_family_orthonormal(self, cube_grid_3d):
        fam = hard_family_symmetric(2, 3)
        assert coherence(fam, cube_grid_3d) <= 1e-9

    def test_symmetric_relabels_under_permutation(self):
        """Swapping coordinates permutes members exactly."""
        rng = np.random.default_rng(42)
        fam = hard_family_symmetric(2, 3)
        X = rng.uniform(-1, 1, size=(20, 3))
        Xsw = X[:, [1, 0, 2]]
        for S, member in zip(fam.labels, fam.members):
            swapped_S = tuple(sorted({0: 1, 1: 0, 2: 2}[i] for i in S))
            partner = fam.members[fam.labels.index(swapped_S)]
            assert_allclose(member(Xsw), partner(X), atol=1e-12)

    def test_symmetric_rejects_bad_ell(self):
        with pytest.raises(ParameterOutOfRange):
            hard_family_symmetric(0, 3)
        with pytest.raises(ParameterOutOfRange):
            hard_family_symmetric(4, 3)


class TestExplicitHard:
    """The scaled sine 4 sqrt(2) eps sin(pi (x_1 + ... + x_ell))."""

    def test_pointwise_value(self):
        f = explicit_hard_function(1.0, 1, 1)
        assert_allclose(f(np.array([0.25])), 4.0 * SQRT2 * math.sin(math.pi * 0.25),
                        rtol=1e-13)

    def test_lip_bound_value(self):
        assert_allclose(explicit_hard_function(1.0, 1, 1).lip_bound, 4.0 * math.pi * SQRT2,
                        rtol=1e-15)

    def test_norm_is_four_epsilon(self, cube_grid_2d):
        f = explicit_hard_function(0.3, 2, 2)
        assert_allclose(l2_norm(f.evaluate, cube_grid_2d), 1.2, rtol=1e-10)

    def test_is_scaled_family_member(self):
        rng = np.random.default_rng(42)
        eps, ell, d = 0.1, 2, 4
        f = explicit_hard_function(eps, ell, d)
        fam = hard_family_symmetric(ell, d)
        first = fam.members[fam.labels.index((0, 1))]
        X = rng.uniform(-1, 1, size=(30, d))
        assert_allclose(f(X), 4.0 * eps * np.asarray(first(X)), rtol=1e-12)

    def test_measured_lipschitz_quotient(self):
        rng = np.random.default_rng(42)
        f = explicit_hard_function(0.25, 2, 3)
        A = rng.uniform(-1, 1, size=(300, 3))
        B = rng.uniform(-1, 1, size=(300, 3))
        quotients = np.abs(f(A) - f(B)) / np.linalg.norm(A - B, axis=1)
        assert np.max(quotients) <= f.lip_bound + 1e-9

    def test_rejects_bad_parameters(self):
        with pytest.raises(ParameterOutOfRange):
            explicit_hard_function(0.0, 1, 1)
        with pytest.raises(ParameterOutOfRange):
            explicit_hard_function(0.1, 3, 2)


class TestLbParameters:
    """Instance-size formulas for Lipschitz and Sobolev targets."""

    def test_lipschitz_example(self):
        params = lb_parameters(18.0, 1.0, 4)
        assert params.ell == 1
        assert_allclose(params.k_nonexplicit, 1.0, rtol=1e-15)
        assert not params.degenerate

    def test_degenerate_regime_flagged(self):
        params = lb_parameters(1.0, 1.0, 100)
        assert params.ell == 0 and params.degenerate

    def test_doubling_lipschitz_quadruples_ell(self):
        base = lb_parameters(18.0, 1.0, 10**6).ell
        doubled = lb_parameters(36.0, 1.0, 10**6).ell
        assert doubled == 4 * base

    def test_sobolev_radius_example(self):
        """s=1, gamma=8, eps=1: k = 8 / (4 pi sqrt(2)) = sqrt(2)/pi."""
        params = sobolev_lb_parameters(8.0, 1.0, 1, 4)
        assert_allclose(params.k, SQRT2 / math.pi, rtol=1e-14)
        assert params.max_scaled_norm_sq <= 64.0 * (1 + 1e-12)

    def test_sobolev_precondition_boundary(self):
        sobolev_lb_parameters(math.sqrt(32.0), 1.0, 1, 2)  # accepted
        with pytest.raises(ParameterOutOfRange):
            sobolev_lb_parameters(math.sqrt(31.0), 1.0, 1, 2)

    def test_sobolev_certification_covers_ball(self):
        """Larger budgets put lattice indices inside the certified ball."""
        params = sobolev_lb_parameters(100.0, 1.0, 1, 2)
        assert params.k > 1.0
        # worst-case H^s energy over the ball stays within gamma^2
        assert params.max_scaled_norm_sq <= 100.0**2 * (1 + 1e-12)
        assert params.max_scaled_norm_sq >= 16.0  # at least the K = 0 term


class TestGaussianFamily:
    """Greedy axial packing of ridge sines in Gaussian space."""

    def test_single_member(self, gauss_grid_2d):
        fam = gaussian_hard_family(2.0, 1, 2, seed=42, grid=gauss_grid_2d)
        assert len(fam) == 1 and fam.coherence == 0.0
        assert_allclose(l2_norm(fam.members[0], gauss_grid_2d), 1.0, rtol=1e-9)

    def test_members_normalized_and_kappa_measured(self, gauss_grid_2d):
        fam = gaussian_hard_family(2.0, 4, 2, seed=42, grid=gauss_grid_2d)
        assert fam.coherence is not None and fam.coherence >= 0.0
        assert_allclose(fam.coherence, coherence(fam, gauss_grid_2d), rtol=1e-12)

    def test_deterministic_in_seed(self, gauss_grid_2d):
        a = gaussian_hard_family(2.0, 3, 2, seed=7, grid=gauss_grid_2d)
        b = gaussian_hard_family(2.0, 3, 2, seed=7, grid=gauss_grid_2d)
        X = gauss_grid_2d.nodes[:5]
        for ma, mb in zip(a.members, b.members):
            assert_allclose(ma(X), mb(X), atol=1e-15)
        assert a.coherence == b.coherence

    def test_axis_directions_nearly_orthogonal(self, gauss_grid_2d):
        """Hand-built axis family: cross terms vanish by independence."""
        L = 2.0
        members = []
        for i in range(2):
            raw = lambda nodes, _i=i: np.sin(L * np.asarray(nodes)[:, _i])
            norm = math.sqrt(float(np.sum(gauss_grid_2d.weights
                                          * raw(gauss_grid_2d.nodes) ** 2)))
            members.append(lambda nodes, _r=raw, _n=norm: _r(nodes) / _n)
        fam = FunctionFamily(labels=[0, 1], members=members, dimension=2)
        assert coherence(fam, gauss_grid_2d) <= 1e-6

    def test_packing_failure_in_one_dimension(self, gauss_grid_1d):
        """d = 1 admits a single axial direction; asking for two fails."""
        with pytest.raises(PackingFailed):
            gaussian_hard_family(2.0, 2, 1, seed=42, grid=gauss_grid_1d)

    def test_wrong_measure(self, cube_grid_2d):
        with pytest.raises(WrongMeasure):
            gaussian_hard_family(2.0, 2, 2, seed=42, grid=cube_grid_2d)

    def test_bound_reflects_coherence(self, gauss_grid_2d):
        fam = gaussian_hard_family(2.0, 5, 2, seed=42, grid=gauss_grid_2d)
        assert randict_bound(2, len(fam), fam.coherence) <= randict_bound(2, len(fam), 0.0)


class TestFamilyValidation:
    def test_label_member_count_mismatch(self):
        with pytest.raises(ParameterOutOfRange):
            FunctionFamily(labels=[0], members=[], dimension=1)

    def test_negative_coherence_rejected(self):
        with pytest.raises(ParameterOutOfRange):
            FunctionFamily(labels=[], members=[], dimension=1, coherence=-0.1)

    def test_count_consistency(self):
        assert len(hard_family_ball(2, 2)) == count_ball(2, 2)
