import numpy as np
import pytest
from numpy.testing import assert_allclose

from widthlab import (
    CapExceeded,
    DkDistribution,
    EmptyFeatureList,
    FittedSpan,
    ParameterOutOfRange,
    ReluFeature,
    TrigPolynomial,
    estimate_minwidth,
    fit_span,
    l2_norm,
    success_probability,
    wilson_interval,
)


def _features(rng, n, d):
    dist = DkDistribution(k=2, dimension=d)
    return [dist.sample_feature(rng) for _ in range(n)]


class TestFitSpan:
    """Weighted least-squares projection onto a feature span."""

    def test_fits_own_span_exactly(self, cube_grid_1d):
        """A function already in the span has residual ~ 0."""
        rng = np.random.default_rng(42)
        feats = _features(rng, 5, 1)
        truth = np.array([1.0, -2.0, 0.5, 0.0, 3.0])
        f = lambda X: sum(c * ft.evaluate(X) for c, ft in zip(truth, feats))
        span = fit_span(feats, f, cube_grid_1d)
        assert span.l2_error <= 1e-10

    def test_projection_never_exceeds_norm(self, cube_grid_1d):
        rng = np.random.default_rng(42)
        feats = _features(rng, 3, 1)
        f = lambda X: np.sin(2.0 * X[:, 0])
        span = fit_span(feats, f, cube_grid_1d)
        assert span.l2_error <= l2_norm(f, cube_grid_1d) + 1e-12

    def test_pythagoras(self, cube_grid_1d):
        """||f||^2 = ||fit||^2 + residual^2 for an L2 projection."""
        rng = np.random.default_rng(42)
        feats = _features(rng, 4, 1)
        f = lambda X: np.cos(X[:, 0])
        span = fit_span(feats, f, cube_grid_1d)
        fit_norm = l2_norm(lambda X: span.evaluate(X), cube_grid_1d)
        assert_allclose(fit_norm**2 + span.l2_error**2,
                        l2_norm(f, cube_grid_1d) ** 2, rtol=1e-10)

    def test_residual_invariant_to_order_and_duplicates(self, cube_grid_1d):
        rng = np.random.default_rng(42)
        feats = _features(rng, 4, 1)
        f = lambda X: np.abs(X[:, 0]) - 0.5
        base = fit_span(feats, f, cube_grid_1d).l2_error
        shuffled = fit_span(feats[::-1], f, cube_grid_1d).l2_error
        doubled = fit_span(feats + feats[:2], f, cube_grid_1d).l2_error
        assert_allclose(shuffled, base, atol=1e-10)
        assert_allclose(doubled, base, atol=1e-10)

    def test_scaling_equivariance(self, cube_grid_1d):
        """Scaling the target scales the residual by the same factor."""
        rng = np.random.default_rng(42)
        feats = _features(rng, 3, 1)
        f = lambda X: np.sin(3.0 * X[:, 0])
        g = lambda X: 4.0 * np.sin(3.0 * X[:, 0])
        assert_allclose(fit_span(feats, g, cube_grid_1d).l2_error,
                        4.0 * fit_span(feats, f, cube_grid_1d).l2_error, rtol=1e-9)

    def test_empty_feature_list(self, cube_grid_1d):
        with pytest.raises(EmptyFeatureList):
            fit_span([], lambda X: X[:, 0], cube_grid_1d)

    def test_coefficient_count_enforced(self):
        with pytest.raises(ParameterOutOfRange):
            FittedSpan(features=[ReluFeature(0.0, np.array([1.0]))],
                       coefficients=np.zeros(2), l2_error=0.0, grid_id="g")

    def test_json_round_trippable_fields(self, cube_grid_1d):
        rng = np.random.default_rng(42)
        feats = _features(rng, 2, 1)
        span = fit_span(feats, lambda X: X[:, 0], cube_grid_1d)
        doc = span.to_json_dict()
        assert len(doc["features"]) == 2
        assert len(doc["coefficients"]) == 2
        assert doc["grid_id"] == cube_grid_1d.spec.label()


class TestWilsonInterval:
    """Score intervals for binomial proportions, frozen against direct roots."""

    def test_frozen_values(self):
        assert_allclose(wilson_interval(8, 10),
                        (0.4901568467207234, 0.9433190520193068), rtol=1e-13)
        assert_allclose(wilson_interval(100, 200),
                        (0.4313596220903453, 0.5686403779096547), rtol=1e-13)

    def test_edge_counts_clamped(self):
        lo, hi = wilson_interval(0, 5)
        assert lo == 0.0
        assert_allclose(hi, 0.43449149475208104, rtol=1e-13)
        lo, hi = wilson_interval(5, 5)
        assert hi == 1.0
        assert_allclose(lo, 0.5655085052479187, rtol=1e-13)

    def test_contains_point_estimate(self):
        rng = np.random.default_rng(42)
        for _ in range(50):
            n = int(rng.integers(1, 400))
            s = int(rng.integers(0, n + 1))
            lo, hi = wilson_interval(s, n)
            assert lo <= s / n <= hi

    def test_narrows_with_trials(self):
        lo1, hi1 = wilson_interval(5, 10)
        lo2, hi2 = wilson_interval(500, 1000)
        assert hi2 - lo2 < hi1 - lo1

    def test_rejects_bad_counts(self):
        with pytest.raises(ParameterOutOfRange):
            wilson_interval(3, 0)
        with pytest.raises(ParameterOutOfRange):
            wilson_interval(7, 5)


class TestSuccessProbability:
    """Monte Carlo success curves."""

    def test_certain_success_for_huge_epsilon(self, cube_grid_1d):
        P = TrigPolynomial({(1,): 0.5})
        est = success_probability(P.evaluate, 10.0, DkDistribution(k=1, dimension=1),
                                  r=1, trials=20, grid=cube_grid_1d, seed=42)
        assert est.probability == 1.0
        assert est.ci_hi == 1.0
        assert est.r == 1 and est.trials == 20

    def test_certain_failure_for_tiny_epsilon(self, cube_grid_1d):
        f = lambda X: np.abs(X[:, 0])
        est = success_probability(f, 1e-12, DkDistribution(k=1, dimension=1),
                                  r=2, trials=20, grid=cube_grid_1d, seed=42)
        assert est.probability == 0.0

    def test_thread_count_does_not_change_result(self, cube_grid_1d):
        P = TrigPolynomial({(1,): 0.7, (-1,): 0.2})
        dist = DkDistribution(k=1, dimension=1)
        serial = success_probability(P.evaluate, 0.3, dist, r=6, trials=30,
                                     grid=cube_grid_1d, seed=11, threads=1)
        parallel = success_probability(P.evaluate, 0.3, dist, r=6, trials=30,
                                       grid=cube_grid_1d, seed=11, threads=3)
        assert serial.probability == parallel.probability
        assert serial.ci_lo == parallel.ci_lo

    def test_coupled_monotone_in_width(self, cube_grid_1d):
        """Success never drops as width grows: trial draws are nested."""
        P = TrigPolynomial({(1,): 0.7})
        dist = DkDistribution(k=1, dimension=1)
        probs = [
            success_probability(P.evaluate, 0.25, dist, r=r, trials=25,
                                grid=cube_grid_1d, seed=42).probability
            for r in (1, 2, 4, 8, 16)
        ]
        assert all(a <= b + 1e-12 for a, b in zip(probs, probs[1:]))

    def test_interval_brackets_probability(self, cube_grid_1d):
        P = TrigPolynomial({(1,): 0.7})
        est = success_probability(P.evaluate, 0.25, DkDistribution(k=1, dimension=1),
                                  r=4, trials=40, grid=cube_grid_1d, seed=5)
        assert est.ci_lo <= est.probability <= est.ci_hi

    def test_rejects_bad_parameters(self, cube_grid_1d):
        dist = DkDistribution(k=1, dimension=1)
        with pytest.raises(ParameterOutOfRange):
            success_probability(lambda X: X[:, 0], 0.1, dist, r=0, trials=5,
                                grid=cube_grid_1d, seed=1)
        with pytest.raises(ParameterOutOfRange):
            success_probability(lambda X: X[:, 0], 0.1, dist, r=1, trials=0,
                                grid=cube_grid_1d, seed=1)
        with pytest.raises(ParameterOutOfRange):
            success_probability(lambda X: X[:, 0], -0.1, dist, r=1, trials=5,
                                grid=cube_grid_1d, seed=1)


class TestEstimateMinwidth:
    """Doubling + bisection width search."""

    def test_zero_target_needs_width_one(self, cube_grid_1d):
        est = estimate_minwidth(lambda X: np.zeros(X.shape[0]), 0.1, 0.1,
                                DkDistribution(k=1, dimension=1), cube_grid_1d,
                                trials=10, r_max=64, seed=42)
        assert est.r_hat == 1
        assert est.success_prob_at_r_hat == 1.0
        assert est.search_trace[0][0] == 1

    def test_reproducible(self, cube_grid_1d):
        P = TrigPolynomial({(1,): 0.7})
        dist = DkDistribution(k=1, dimension=1)
        kwargs = dict(trials=20, r_max=256, seed=42)
        a = estimate_minwidth(P.evaluate, 0.2, 0.25, dist, cube_grid_1d, **kwargs)
        b = estimate_minwidth(P.evaluate, 0.2, 0.25, dist, cube_grid_1d, **kwargs)
        assert a.r_hat == b.r_hat
        assert a.search_trace == b.search_trace

    def test_trace_records_probes_and_passing_width(self, cube_grid_1d):
        P = TrigPolynomial({(1,): 0.7})
        est = estimate_minwidth(P.evaluate, 0.2, 0.25, DkDistribution(k=1, dimension=1),
                                cube_grid_1d, trials=20, r_max=256, seed=42)
        probed = dict(est.search_trace)
        assert est.r_hat in probed
        assert probed[est.r_hat] >= 0.75
        # every strictly smaller probed width failed, up to the bisection gap
        smaller = [r for r in probed if r < est.r_hat]
        if smaller:
            assert probed[max(smaller)] < 0.75

    def test_cap_exceeded(self, cube_grid_1d):
        f = lambda X: np.abs(X[:, 0])
        with pytest.raises(CapExceeded):
            estimate_minwidth(f, 1e-9, 0.25, DkDistribution(k=1, dimension=1),
                              cube_grid_1d, trials=5, r_max=8, seed=42)

    def test_rejects_bad_delta(self, cube_grid_1d):
        with pytest.raises(ParameterOutOfRange):
            estimate_minwidth(lambda X: X[:, 0], 0.1, 0.0,
                              DkDistribution(k=1, dimension=1), cube_grid_1d,
                              trials=5, r_max=8, seed=42)

    def test_result_is_json_friendly(self, cube_grid_1d):
        est = estimate_minwidth(lambda X: np.zeros(X.shape[0]), 0.1, 0.1,
                                DkDistribution(k=1, dimension=1), cube_grid_1d,
                                trials=5, r_max=8, seed=42)
        doc = est.to_json_dict()
        assert isinstance(doc["search_trace"], list)
        assert doc["r_hat"] == 1
