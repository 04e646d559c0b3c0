import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import stats

from kl_emulator.exceptions import MetricError
from kl_emulator.schemas.metrics import Histogram
from kl_emulator.services import metrics_service


def _hist(masses) -> Histogram:
    masses = np.asarray(masses, dtype=float)
    return Histogram(edges=np.arange(masses.size + 1, dtype=float), masses=masses)


samples = st.lists(st.integers(-10_000, 10_000).map(lambda v: v / 8), min_size=1, max_size=60)


class TestSharedHistogram:
    def test_two_bins(self):
        p, q = metrics_service.shared_histogram([0.0], [1.0], bins=2)
        np.testing.assert_array_equal(p.edges, [0.0, 0.5, 1.0])
        np.testing.assert_array_equal(p.masses, [1.0, 0.0])
        np.testing.assert_array_equal(q.masses, [0.0, 1.0])

    def test_equal_masses(self):
        p, _ = metrics_service.shared_histogram([0, 1, 2, 3], [0, 3], bins=4)
        np.testing.assert_allclose(p.masses, 0.25)

    def test_degenerate_range(self):
        p, q = metrics_service.shared_histogram([2.0, 2.0], [2.0], bins=10)
        np.testing.assert_array_equal(p.edges, [1.5, 2.5])
        np.testing.assert_array_equal(p.masses, [1.0])
        np.testing.assert_array_equal(q.masses, [1.0])

    def test_range_narrower_than_bins(self):
        step = np.nextafter(1.0, 2.0)
        p, q = metrics_service.shared_histogram([1.0, 1.0], [1.0, step], bins=20)
        np.testing.assert_array_equal(p.edges, [0.5, 1.5])
        np.testing.assert_array_equal(p.masses, [1.0])
        np.testing.assert_array_equal(q.masses, [1.0])

        report = metrics_service.compare([1.0, 1.0], [1.0, step], bins=20)
        assert report.hist_intersection == 1.0
        assert report.ks_statistic == 0.5

    @pytest.mark.parametrize("a, b", [([], [1.0]), ([1.0], [np.nan])])
    def test_bad_samples(self, a, b):
        with pytest.raises(MetricError):
            metrics_service.shared_histogram(a, b)

    def test_bins_positive(self):
        with pytest.raises(MetricError, match="bins"):
            metrics_service.shared_histogram([0.0], [1.0], bins=0)


class TestHistogramMetrics:
    def test_intersection(self):
        assert metrics_service.histogram_intersection(_hist([0.5, 0.5]), _hist([0.25, 0.75])) == pytest.approx(0.75)

    def test_hellinger(self):
        assert metrics_service.hellinger(_hist([1.0, 0.0]), _hist([0.5, 0.5])) == pytest.approx(0.5412, abs=1e-4)

    def test_js_divergence(self):
        # exact value is 0.048795 bits
        assert metrics_service.js_divergence(_hist([0.5, 0.5]), _hist([0.25, 0.75])) == pytest.approx(0.0488, abs=1e-4)

    def test_disjoint_supports(self):
        p, q = _hist([1.0, 0.0]), _hist([0.0, 1.0])
        assert metrics_service.histogram_intersection(p, q) == 0.0
        assert metrics_service.hellinger(p, q) == pytest.approx(1.0)
        assert metrics_service.js_divergence(p, q) == pytest.approx(1.0)

    def test_edges_must_match(self):
        p = _hist([0.5, 0.5])
        q = Histogram(edges=np.array([0.0, 1.0, 3.0]), masses=np.array([0.5, 0.5]))
        for metric in (
            metrics_service.histogram_intersection,
            metrics_service.hellinger,
            metrics_service.js_divergence,
        ):
            with pytest.raises(MetricError, match="same bin edges"):
                metric(p, q)

    @settings(max_examples=100, deadline=None)
    @given(a=samples, b=samples, bins=st.integers(1, 30))
    def test_bounds_and_symmetry(self, a, b, bins):
        p, q = metrics_service.shared_histogram(a, b, bins)
        for metric in (
            metrics_service.histogram_intersection,
            metrics_service.hellinger,
            metrics_service.js_divergence,
        ):
            forward, backward = metric(p, q), metric(q, p)
            assert 0.0 <= forward <= 1.0
            assert forward == pytest.approx(backward, abs=1e-15)


class TestKolmogorovSmirnov:
    def test_critical_constant(self):
        assert metrics_service.ks_critical_constant(0.05) == pytest.approx(1.3581, abs=1e-4)

    @pytest.mark.parametrize("alpha", [0.0, 1.0, -0.1])
    def test_alpha_range(self, alpha):
        with pytest.raises(MetricError, match="alpha"):
            metrics_service.ks_critical_constant(alpha)

    def test_identical_samples(self):
        statistic, reject = metrics_service.ks_two_sample([1, 2, 3], [1, 2, 3])
        assert statistic == 0.0
        assert not reject

    def test_disjoint_samples(self):
        statistic, reject = metrics_service.ks_two_sample(np.arange(50), np.arange(50) + 100)
        assert statistic == 1.0
        assert reject

    def test_matches_scipy(self):
        rng = np.random.default_rng(3)
        a, b = rng.normal(size=40), rng.normal(0.3, 1.2, size=55)
        statistic, _ = metrics_service.ks_two_sample(a, b)
        assert statistic == pytest.approx(stats.ks_2samp(a, b).statistic, abs=1e-12)

    def test_monotone_invariance(self):
        rng = np.random.default_rng(4)
        a, b = rng.normal(size=30), rng.normal(size=45)
        assert metrics_service.ks_two_sample(a, b)[0] == metrics_service.ks_two_sample(np.exp(a), np.exp(b))[0]

    @settings(max_examples=100, deadline=None)
    @given(a=samples, b=samples)
    def test_symmetric_and_bounded(self, a, b):
        forward, _ = metrics_service.ks_two_sample(a, b)
        backward, _ = metrics_service.ks_two_sample(b, a)
        assert 0.0 <= forward <= 1.0
        assert forward == backward

    @pytest.mark.slow
    def test_rejection_rate_under_null(self):
        rng = np.random.default_rng(5)
        rejections = sum(
            metrics_service.ks_two_sample(rng.normal(size=1000), rng.normal(size=1000), 0.05)[1]
            for _ in range(1000)
        )
        assert 0.02 <= rejections / 1000 <= 0.09


class TestCompare:
    def test_identical_samples(self):
        sample = np.random.default_rng(6).normal(size=200)
        report = metrics_service.compare(sample, sample.copy(), bins=20, alpha=0.05, point=[0.5, 1])
        assert report.hist_intersection == pytest.approx(1.0)
        assert report.hellinger == 0.0
        assert report.js_divergence == 0.0
        assert report.ks_statistic == 0.0
        assert not report.ks_reject
        assert report.point == (0.5, 1.0)
        assert (report.bins, report.alpha) == (20, 0.05)

    def test_shifted_samples(self):
        rng = np.random.default_rng(7)
        report = metrics_service.compare(rng.normal(size=500), rng.normal(3.0, size=500))
        assert report.hist_intersection < 0.3
        assert report.ks_reject
