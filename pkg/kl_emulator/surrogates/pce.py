"""
Polynomial chaos expansion on a total-degree Legendre basis.

Inputs are mapped affinely from their bounds to [-1, 1]^d, where the basis
polynomials are orthonormal with respect to the uniform measure:

    E[P_i(z) P_j(z)] = delta_ij,  z ~ U[-1, 1].
"""
import itertools
import logging
from functools import lru_cache
from math import comb
from typing import Any, Dict, Optional, Sequence, Tuple, Union
import numpy as np
from numpy.polynomial import legendre
from scipy import linalg

from kl_emulator.config import settings
from kl_emulator.exceptions import FitError
from kl_emulator.schemas.surrogate import PCEModel
from kl_emulator.surrogates.base import Surrogate


logger = logging.getLogger(__name__)

DEGREE_CANDIDATES = (1, 2, 3, 4, 5)


@lru_cache(maxsize=64)
def total_degree_indices(dims: int, degree: int) -> Tuple[Tuple[int, ...], ...]:
    """Multi-indices with |beta| <= degree, graded by total degree then lexicographically."""
    indices = [
        beta for beta in itertools.product(range(degree + 1), repeat=dims) if sum(beta) <= degree
    ]
    return tuple(sorted(indices, key=lambda beta: (sum(beta), tuple(-b for b in beta))))


def legendre_orthonormal(z: np.ndarray, degree: int) -> np.ndarray:
    """P_0..P_degree orthonormal on [-1, 1] under dz/2, shape (n, degree + 1)."""
    return legendre.legvander(np.asarray(z, dtype=float), degree) * np.sqrt(2 * np.arange(degree + 1) + 1)


def to_unit(points: np.ndarray, lower: np.ndarray, upper: np.ndarray) -> np.ndarray:
    return 2.0 * (points - lower) / (upper - lower) - 1.0


def design_matrix(multi_indices: Sequence[Tuple[int, ...]], z: np.ndarray) -> np.ndarray:
    """Psi[s, b] = prod_i P_{beta_b,i}(z[s, i])."""
    z = np.atleast_2d(z)
    indices = np.asarray(multi_indices, dtype=int)
    degree = int(indices.max(initial=0))
    psi = np.ones((z.shape[0], indices.shape[0]))
    for dim in range(z.shape[1]):
        univariate = legendre_orthonormal(z[:, dim], degree)
        psi *= univariate[:, indices[:, dim]]
    return psi


def _bounds(inputs: np.ndarray, lower, upper) -> Tuple[np.ndarray, np.ndarray]:
    lower = inputs.min(axis=0) if lower is None else np.asarray(lower, dtype=float)
    upper = inputs.max(axis=0) if upper is None else np.asarray(upper, dtype=float)
    upper = np.where(upper > lower, upper, lower + 1.0)
    return lower, upper


def pce_fit(
    inputs: Sequence[Sequence[float]],
    targets: Sequence[float],
    degree: int,
    lower: Optional[Sequence[float]] = None,
    upper: Optional[Sequence[float]] = None,
) -> PCEModel:
    """Least-squares coefficients of a total-degree PCE."""
    inputs, targets = Surrogate._prepare(inputs, targets)
    n, d = inputs.shape
    terms = comb(degree + d, d)
    if n < terms:
        raise FitError(
            f"PCE of degree {degree} in {d} dims has {terms} coefficients but only {n} samples; "
            "use a lower degree"
        )
    lower, upper = _bounds(inputs, lower, upper)
    indices = total_degree_indices(d, degree)
    psi = design_matrix(indices, to_unit(inputs, lower, upper))

    y, mean, scale = Surrogate._standardize(targets)
    try:
        coefficients, _, rank, _ = linalg.lstsq(psi, y, lapack_driver="gelsd")
    except linalg.LinAlgError as e:
        raise FitError(f"PCE least-squares solve failed: {e}") from e
    if rank < terms:
        logger.warning("PCE design matrix is rank deficient (%d of %d)", rank, terms)

    coefficients = scale * coefficients
    coefficients[0] += mean
    return PCEModel(
        degree=degree,
        dims=d,
        multi_indices=indices,
        coefficients=coefficients,
        lower=lower,
        upper=upper,
    )


def pce_predict(model: PCEModel, x: Union[Sequence[float], np.ndarray]) -> Union[float, np.ndarray]:
    """sum_b a_b Psi_b(mapped x); a float for one point, an array for rows."""
    points = np.asarray(x, dtype=float)
    single = points.ndim == 1
    points = np.atleast_2d(points)
    z = to_unit(points, model.lower, model.upper)
    if (np.abs(z) > 1.0 + 1e-12).any():
        logger.warning("PCE evaluated outside its fitted bounds (extrapolation)")
    values = design_matrix(model.multi_indices, z) @ model.coefficients
    return float(values[0]) if single else values


def loo_error(inputs: np.ndarray, targets: np.ndarray, degree: int, lower=None, upper=None) -> float:
    """Relative leave-one-out error via the hat-matrix diagonal."""
    inputs, targets = Surrogate._prepare(inputs, targets)
    lower, upper = _bounds(inputs, lower, upper)
    psi = design_matrix(total_degree_indices(inputs.shape[1], degree), to_unit(inputs, lower, upper))
    q, _ = np.linalg.qr(psi)
    leverage = (q * q).sum(axis=1)
    if (leverage >= 1.0 - 1e-10).any():
        return np.inf
    coefficients = linalg.lstsq(psi, targets)[0]
    residuals = (targets - psi @ coefficients) / (1.0 - leverage)
    variance = targets.var()
    return float(np.mean(residuals ** 2) / (variance if variance > 0 else 1.0))


def select_degree(inputs, targets, lower=None, upper=None, candidates=DEGREE_CANDIDATES) -> int:
    """Degree with the smallest leave-one-out error among those the sample size supports."""
    inputs, targets = Surrogate._prepare(inputs, targets)
    n, d = inputs.shape
    errors = {
        degree: loo_error(inputs, targets, degree, lower, upper)
        for degree in candidates
        if comb(degree + d, d) < n
    }
    if not errors:
        raise FitError(f"{n} samples are too few for any PCE degree in {list(candidates)}")
    best = min(errors, key=errors.get)
    logger.info("Selected PCE degree %d by leave-one-out (error %.3g)", best, errors[best])
    return best


def pce_pair_grid(model: PCEModel, points: np.ndarray) -> np.ndarray:
    """
    Symmetrized evaluation of a PCE of (x, y) on every pair of `points`.

    With both halves on the same bounds, C(x, y) = Psi(x) A Psi(y)^T where
    A[a, b] is the coefficient of the multi-index (beta_a, beta_b).
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    d = points.shape[1]
    if model.dims != 2 * d:
        raise FitError(f"pair grid needs a {2 * d}-dimensional PCE, got {model.dims}")
    if not (np.array_equal(model.lower[:d], model.lower[d:]) and np.array_equal(model.upper[:d], model.upper[d:])):
        raise FitError("pair grid needs identical bounds for both arguments")

    half = total_degree_indices(d, model.degree)
    position = {beta: i for i, beta in enumerate(half)}
    coupling = np.zeros((len(half), len(half)))
    for beta, coefficient in zip(model.multi_indices, model.coefficients):
        coupling[position[beta[:d]], position[beta[d:]]] = coefficient

    z = to_unit(points, model.lower[:d], model.upper[:d])
    if (np.abs(z) > 1.0 + 1e-12).any():
        logger.warning("PCE evaluated outside its fitted bounds (extrapolation)")
    psi = design_matrix(half, z)
    grid = psi @ coupling @ psi.T
    return 0.5 * (grid + grid.T)


class PCESurrogate(Surrogate):
    """Surrogate wrapper around pce_fit / pce_predict; degree may be "auto"."""

    kind = "pce"

    def __init__(
        self,
        degree: Union[int, str] = settings.DEFAULT_PCE_DEGREE,
        lower: Optional[Sequence[float]] = None,
        upper: Optional[Sequence[float]] = None,
    ):
        super().__init__()
        self.degree = degree
        self.lower = lower
        self.upper = upper
        self.model: Optional[PCEModel] = None

    def fit(self, inputs, targets) -> "PCESurrogate":
        inputs, targets = self._prepare(inputs, targets)
        degree = self.degree
        if degree == "auto":
            degree = select_degree(inputs, targets, self.lower, self.upper)
        self.model = pce_fit(inputs, targets, int(degree), self.lower, self.upper)
        self._inputs = inputs
        return self

    def predict(self, points) -> np.ndarray:
        self._require_fitted()
        return np.atleast_1d(pce_predict(self.model, self._as_points(points)))

    def to_dict(self) -> Dict[str, Any]:
        self._require_fitted()
        return {
            "kind": self.kind,
            "inputs": self._inputs,
            "degree": self.model.degree,
            "dims": self.model.dims,
            "multi_indices": [list(beta) for beta in self.model.multi_indices],
            "coefficients": self.model.coefficients,
            "lower": self.model.lower,
            "upper": self.model.upper,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "PCESurrogate":
        model = PCEModel(
            degree=int(data["degree"]),
            dims=int(data["dims"]),
            multi_indices=tuple(tuple(int(b) for b in beta) for beta in data["multi_indices"]),
            coefficients=data["coefficients"],
            lower=data["lower"],
            upper=data["upper"],
        )
        surrogate = cls(degree=model.degree, lower=model.lower, upper=model.upper)
        surrogate.model = model
        surrogate._inputs = np.asarray(data["inputs"], dtype=float)
        return surrogate
