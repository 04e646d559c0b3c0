import logging
from typing import Tuple
import numpy as np
from scipy import linalg

from kl_emulator.exceptions import DataError, NumericalError
from kl_emulator.schemas.basis import CenteredData, KLBasis
from kl_emulator.schemas.trajectory import TrajectoryMatrix


logger = logging.getLogger(__name__)

SYMMETRY_TOL = 1e-10
NEGATIVE_TOL = 1e-10
# eigenvalues at or below this fraction of the largest are null modes
NULL_MODE_RATIO = 1e-12


def center(data: TrajectoryMatrix) -> CenteredData:
    """Subtract the per-point empirical mean over seeds."""
    if data.n_points < 2 or data.n_seeds < 2:
        raise DataError(
            f"need at least 2 design points and 2 trajectories, got {data.n_points}x{data.n_seeds}"
        )
    if not np.isfinite(data.values).all():
        rows, cols = np.nonzero(~np.isfinite(data.values))
        raise DataError(f"non-finite simulator output at design point {rows[0]}, seed index {cols[0]}")

    mean = data.values.mean(axis=1)
    return CenteredData(centered=data.values - mean[:, None], mean=mean)


def empirical_covariance(cd: CenteredData) -> np.ndarray:
    """C = centered @ centered.T / N, exactly symmetric."""
    cov = cd.centered @ cd.centered.T / cd.n_seeds
    return 0.5 * (cov + cov.T)


def _sign_convention(vectors: np.ndarray) -> np.ndarray:
    """Flip columns so their largest-magnitude entry (lowest index on ties) is positive."""
    if vectors.size == 0:
        return vectors
    pivots = np.argmax(np.abs(vectors), axis=0)
    signs = np.sign(vectors[pivots, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    return vectors * signs


def eigendecompose(cov: np.ndarray, clamp_negative: bool = False) -> Tuple[np.ndarray, np.ndarray]:
    """
    Eigenpairs of a symmetric matrix sorted by nonincreasing eigenvalue.

    Round-off negatives are clamped to zero; a negative eigenvalue below
    -1e-10 * ||C|| is an error unless clamp_negative is set, in which case it
    is clamped with a warning (used for surrogate covariances).
    """
    cov = np.asarray(cov, dtype=float)
    if cov.ndim != 2 or cov.shape[0] != cov.shape[1]:
        raise NumericalError(f"covariance must be square, got shape {cov.shape}")
    if not np.isfinite(cov).all():
        raise NumericalError("covariance has non-finite entries")

    scale = np.linalg.norm(cov)
    if np.abs(cov - cov.T).max(initial=0.0) > SYMMETRY_TOL * max(scale, np.finfo(float).tiny):
        raise NumericalError("covariance matrix is not symmetric")

    try:
        eigenvalues, eigenvectors = linalg.eigh(cov)
    except linalg.LinAlgError as e:
        raise NumericalError(f"eigensolver did not converge: {e}") from e

    order = np.argsort(eigenvalues)[::-1]
    eigenvalues = eigenvalues[order]
    eigenvectors = eigenvectors[:, order]

    most_negative = eigenvalues.min(initial=0.0)
    if most_negative < -NEGATIVE_TOL * scale:
        if not clamp_negative:
            raise NumericalError(
                f"covariance is not positive semidefinite: eigenvalue {most_negative:.6g} "
                f"(norm {scale:.6g})"
            )
        logger.warning(
            "Clamped %d negative eigenvalues (most negative %.6g)",
            int((eigenvalues < 0).sum()), most_negative,
        )
    eigenvalues = np.maximum(eigenvalues, 0.0)
    return eigenvalues, _sign_convention(eigenvectors)


def null_mode_mask(eigenvalues: np.ndarray) -> np.ndarray:
    """True for modes treated as null."""
    if eigenvalues.size == 0:
        return np.zeros(0, dtype=bool)
    top = eigenvalues.max()
    if top <= 0:
        return np.ones(eigenvalues.shape, dtype=bool)
    return eigenvalues <= NULL_MODE_RATIO * top


def project_xi(
    centered: np.ndarray,
    eigenvalues: np.ndarray,
    eigenvectors: np.ndarray,
) -> np.ndarray:
    """
    xi[i, k] = sum_j centered[j, k] * phi_i(x_j) / sqrt(lambda_i)

    Null modes get xi = 0.
    """
    centered = centered.centered if isinstance(centered, CenteredData) else np.asarray(centered)
    active = ~null_mode_mask(eigenvalues)
    xi = np.zeros((eigenvalues.shape[0], centered.shape[1]))
    xi[active] = (eigenvectors[:, active].T @ centered) / np.sqrt(eigenvalues[active])[:, None]
    return xi


def build_basis(data: TrajectoryMatrix) -> KLBasis:
    """Full M-mode KL basis of a trajectory matrix."""
    cd = center(data)
    cov = empirical_covariance(cd)
    eigenvalues, eigenvectors = eigendecompose(cov)
    xi = project_xi(cd.centered, eigenvalues, eigenvectors)
    return KLBasis(
        eigenvalues=eigenvalues,
        eigenvectors=eigenvectors,
        xi=xi,
        coords=data.coords,
        mean=cd.mean,
    )


def retained_modes(eigenvalues: np.ndarray, energy: float) -> int:
    """Smallest p whose cumulative eigenvalue share reaches `energy`."""
    if not 0 < energy <= 1:
        raise DataError(f"truncation energy must lie in (0, 1], got {energy}")
    active = int((~null_mode_mask(eigenvalues)).sum())
    total = float(eigenvalues.sum())
    if active == 0 or total <= 0:
        logger.warning("All-zero spectrum: truncating to p = 0 modes")
        return 0
    if energy == 1.0:
        return active
    share = np.cumsum(eigenvalues) / total
    p = int(np.searchsorted(share, energy - 1e-12, side="left")) + 1
    return min(p, active)


def truncate(basis: KLBasis, energy: float) -> KLBasis:
    """Drop the modes beyond the energy threshold."""
    p = retained_modes(basis.eigenvalues, energy)
    return KLBasis(
        eigenvalues=basis.eigenvalues[:p],
        eigenvectors=basis.eigenvectors[:, :p],
        xi=basis.xi[:p],
        coords=basis.coords,
        mean=basis.mean,
        cov_norm=basis.cov_norm,
    )


def reconstruct(basis: KLBasis) -> np.ndarray:
    """sum_i sqrt(lambda_i) * phi_i(x_j) * xi_i(w_k) at the design points."""
    return (basis.eigenvectors * np.sqrt(basis.eigenvalues)) @ basis.xi
