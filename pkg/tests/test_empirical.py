import logging
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kl_emulator.exceptions import DataError, NumericalError
from kl_emulator.schemas.basis import CenteredData
from kl_emulator.schemas.trajectory import TrajectoryMatrix
from kl_emulator.services import empirical_service


def _matrix(values) -> TrajectoryMatrix:
    values = np.asarray(values, dtype=float)
    return TrajectoryMatrix(
        values=values,
        coords=np.arange(values.shape[0], dtype=float)[:, None],
        seeds=tuple(range(values.shape[1])),
    )


class TestCenter:
    def test_examples(self):
        cd = empirical_service.center(_matrix([[1, -1, 1, -1], [2, 4, 6, 4], [5, 5, 5, 5]]))
        np.testing.assert_allclose(cd.mean, [0.0, 4.0, 5.0])
        np.testing.assert_allclose(cd.centered[0], [1, -1, 1, -1])
        np.testing.assert_allclose(cd.centered[1], [-2, 0, 2, 0])
        np.testing.assert_array_equal(cd.centered[2], 0.0)

    def test_rows_sum_to_zero(self, random_data):
        cd = empirical_service.center(random_data)
        assert np.abs(cd.centered.sum(axis=1)).max() < 1e-10

    @pytest.mark.parametrize("shape", [(1, 5), (5, 1)])
    def test_too_small(self, shape):
        with pytest.raises(DataError, match="at least 2"):
            empirical_service.center(_matrix(np.ones(shape)))

    def test_non_finite(self):
        values = np.ones((3, 3))
        values[1, 2] = np.nan
        with pytest.raises(DataError, match="design point 1, seed index 2"):
            empirical_service.center(_matrix(values))


class TestEmpiricalCovariance:
    def test_two_by_two(self):
        cd = CenteredData(centered=[[1, -1], [1, -1]], mean=[0, 0])
        np.testing.assert_allclose(empirical_service.empirical_covariance(cd), [[1, 1], [1, 1]])

    def test_biased_convention(self, random_data):
        cov = empirical_service.empirical_covariance(empirical_service.center(random_data))
        np.testing.assert_allclose(cov, np.cov(random_data.values, bias=True), rtol=1e-12, atol=1e-14)
        np.testing.assert_array_equal(cov, cov.T)

    def test_rank_one(self):
        u, v = np.array([1.0, 2.0, -1.0]), np.array([1.0, -2.0, 3.0, -2.0])
        cov = empirical_service.empirical_covariance(CenteredData(centered=np.outer(u, v), mean=np.zeros(3)))
        np.testing.assert_allclose(cov, (v @ v / 4) * np.outer(u, u))
        assert np.linalg.matrix_rank(cov) == 1


class TestEigendecompose:
    """Sorted eigenpairs, sign convention and PSD checks."""

    def test_two_by_two(self):
        eigenvalues, eigenvectors = empirical_service.eigendecompose(np.array([[2.0, 1.0], [1.0, 2.0]]))
        np.testing.assert_allclose(eigenvalues, [3.0, 1.0])
        np.testing.assert_allclose(eigenvectors[:, 0], [1 / np.sqrt(2), 1 / np.sqrt(2)])
        np.testing.assert_allclose(np.abs(eigenvectors[:, 1]), [1 / np.sqrt(2), 1 / np.sqrt(2)])

    def test_identity(self):
        eigenvalues, eigenvectors = empirical_service.eigendecompose(np.eye(2))
        np.testing.assert_allclose(eigenvalues, [1.0, 1.0])
        np.testing.assert_allclose(eigenvectors.T @ eigenvectors, np.eye(2), atol=1e-15)

    def test_reconstruction(self, spd_matrix):
        eigenvalues, eigenvectors = empirical_service.eigendecompose(spd_matrix)
        assert (np.diff(eigenvalues) <= 0).all()
        np.testing.assert_allclose(eigenvectors @ np.diag(eigenvalues) @ eigenvectors.T, spd_matrix, atol=1e-12)

    def test_sign_convention(self, spd_matrix):
        _, eigenvectors = empirical_service.eigendecompose(spd_matrix)
        pivots = np.argmax(np.abs(eigenvectors), axis=0)
        assert (eigenvectors[pivots, np.arange(6)] > 0).all()

    def test_asymmetric(self):
        with pytest.raises(NumericalError, match="not symmetric"):
            empirical_service.eigendecompose(np.array([[1.0, 0.5], [0.0, 1.0]]))

    def test_indefinite(self):
        with pytest.raises(NumericalError, match="not positive semidefinite"):
            empirical_service.eigendecompose(np.diag([1.0, -0.5]))

    def test_clamp_negative(self, caplog):
        with caplog.at_level(logging.WARNING):
            eigenvalues, _ = empirical_service.eigendecompose(np.diag([1.0, -0.5]), clamp_negative=True)
        np.testing.assert_array_equal(eigenvalues, [1.0, 0.0])
        assert "Clamped 1 negative" in caplog.text

    def test_not_square(self):
        with pytest.raises(NumericalError, match="square"):
            empirical_service.eigendecompose(np.ones((2, 3)))


class TestProjection:
    def test_single_mode_seed(self, spd_matrix):
        """A trajectory equal to sqrt(lambda_1) phi_1 has xi = (1, 0, ...)."""
        eigenvalues, eigenvectors = empirical_service.eigendecompose(spd_matrix)
        column = np.sqrt(eigenvalues[0]) * eigenvectors[:, :1]
        xi = empirical_service.project_xi(column, eigenvalues, eigenvectors)
        np.testing.assert_allclose(xi[:, 0], np.eye(6)[0], atol=1e-12)

    def test_zero_data(self):
        basis = empirical_service.build_basis(_matrix(np.zeros((3, 4))))
        np.testing.assert_array_equal(basis.xi, 0.0)
        np.testing.assert_array_equal(basis.eigenvalues, 0.0)

    def test_null_modes_have_zero_xi(self):
        rng = np.random.default_rng(1)
        z = rng.normal(size=10)
        basis = empirical_service.build_basis(_matrix(np.outer([1.0, 2.0, 3.0], z)))
        assert basis.eigenvalues[0] > 0
        np.testing.assert_array_equal(basis.xi[1:], 0.0)
        assert empirical_service.null_mode_mask(basis.eigenvalues).tolist() == [False, True, True]

    def test_xi_rows_have_zero_mean(self, random_data):
        basis = empirical_service.build_basis(random_data)
        assert np.abs(basis.xi.mean(axis=1)).max() < 1e-12

    def test_exact_reconstruction(self, random_data):
        basis = empirical_service.build_basis(random_data)
        centered = empirical_service.center(random_data).centered
        np.testing.assert_allclose(empirical_service.reconstruct(basis), centered, rtol=1e-8, atol=1e-12)


class TestAlgebraicIdentities:
    """Spectral identities of the empirical KL basis over random instances."""

    @settings(max_examples=100, deadline=None)
    @given(
        m=st.integers(min_value=2, max_value=12),
        extra=st.integers(min_value=2, max_value=20),
        seed=st.integers(min_value=0, max_value=2**32 - 1),
    )
    def test_identities(self, m, extra, seed):
        rng = np.random.default_rng(seed)
        n = 2 * m + extra
        data = _matrix(rng.normal(scale=rng.uniform(0.1, 10.0), size=(m, n)))
        cd = empirical_service.center(data)
        cov = empirical_service.empirical_covariance(cd)
        basis = empirical_service.build_basis(data)
        lam, phi, xi = basis.eigenvalues, basis.eigenvectors, basis.xi
        norm = np.linalg.norm(cov)

        np.testing.assert_allclose(phi.T @ phi, np.eye(m), atol=1e-10)
        assert np.abs((phi * lam) @ phi.T - cov).max() <= 1e-10 * norm
        assert abs(np.trace(cov) - lam.sum()) <= 1e-10 * abs(np.trace(cov))

        positive = ~empirical_service.null_mode_mask(lam)
        gram = xi[positive] @ xi[positive].T / n
        np.testing.assert_allclose(gram, np.eye(positive.sum()), atol=1e-8)


class TestTruncation:
    @pytest.mark.parametrize(
        "eigenvalues, energy, expected",
        [
            ([9.0, 1.0], 0.9, 1),
            ([1.0, 1.0, 1.0, 1.0], 0.5, 2),
            ([3.0, 2.0, 1.0], 0.6, 2),
            ([3.0, 2.0, 1e-14], 1.0, 2),
            ([4.0, 3.0, 2.0, 1.0], 1.0, 4),
        ],
    )
    def test_retained_modes(self, eigenvalues, energy, expected):
        assert empirical_service.retained_modes(np.array(eigenvalues), energy) == expected

    def test_rank_one_data_keeps_one_mode(self):
        z = np.random.default_rng(2).normal(size=12)
        basis = empirical_service.build_basis(_matrix(np.outer([1.0, -2.0, 0.5, 3.0], z)))
        assert empirical_service.retained_modes(basis.eigenvalues, 1 - 1e-12) == 1
        assert empirical_service.truncate(basis, 1 - 1e-12).truncation == 1

    def test_zero_spectrum(self, caplog):
        with caplog.at_level(logging.WARNING):
            assert empirical_service.retained_modes(np.zeros(3), 0.9) == 0
        assert "All-zero spectrum" in caplog.text

    @pytest.mark.parametrize("energy", [0.0, -0.1, 1.5])
    def test_energy_range(self, energy):
        with pytest.raises(DataError):
            empirical_service.retained_modes(np.ones(2), energy)

    def test_truncate_keeps_leading_modes(self, random_data):
        basis = empirical_service.build_basis(random_data)
        truncated = empirical_service.truncate(basis, 0.5)
        p = truncated.truncation
        assert 1 <= p < basis.truncation
        np.testing.assert_array_equal(truncated.eigenvalues, basis.eigenvalues[:p])
        np.testing.assert_array_equal(truncated.xi, basis.xi[:p])
        np.testing.assert_array_equal(truncated.mean, basis.mean)
