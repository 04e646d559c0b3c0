from concurrent.futures import ThreadPoolExecutor
import logging
from typing import Any, Callable, Dict, List, Optional, Sequence
import numpy as np

from kl_emulator.exceptions import ConfigurationError, DataError, EmulatorError, FitError
from kl_emulator.models.emulator import KLEmulator, TARGET_MATCH_TOL
from kl_emulator.schemas.basis import KLBasis
from kl_emulator.schemas.trajectory import TrajectoryMatrix
from kl_emulator.schemas.validation import EmulatorConfig
from kl_emulator.services import empirical_service
from kl_emulator.simulators.base import StochasticSimulator
from kl_emulator.surrogates import Surrogate, build_surrogate
from kl_emulator.surrogates.pce import PCESurrogate, pce_pair_grid


logger = logging.getLogger(__name__)

DEGENERATE_GAP = 1e-10
PAIR_CHUNK = 4096


def _surrogate_options(kind: str, config: EmulatorConfig) -> Dict[str, Any]:
    if kind == "kriging":
        return {"family": config.kernel}
    if kind == "pce":
        return {"degree": config.pce_degree}
    return {}


def _fit_all(
    factory: Callable[[], Surrogate],
    inputs: np.ndarray,
    columns: Sequence[np.ndarray],
    threads: int,
    label: str,
) -> List[Surrogate]:
    """One surrogate per target column, assembled in column order."""

    def fit_one(job):
        index, targets = job
        try:
            return factory().fit(inputs, targets)
        except EmulatorError as e:
            raise FitError(f"{label} {index}: {e}") from e

    jobs = list(enumerate(columns))
    if threads > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            return list(executor.map(fit_one, jobs))
    return [fit_one(job) for job in jobs]


def _warn_degenerate(eigenvalues: np.ndarray):
    if eigenvalues.size < 2 or eigenvalues[0] <= 0:
        return
    gaps = np.flatnonzero(np.abs(np.diff(eigenvalues)) < DEGENERATE_GAP * eigenvalues[0])
    if gaps.size:
        logger.warning(
            "Eigenvalue clusters at modes %s: individual modes are rotation-ambiguous, their span is stable",
            [int(i) + 1 for i in gaps],
        )


def fit_pathway_a(
    data: TrajectoryMatrix,
    surrogate_kind: str = "kriging",
    truncation: float = 1.0,
    config: Optional[EmulatorConfig] = None,
    threads: int = 1,
) -> KLEmulator:
    """Eigenvector interpolation: surrogate each retained phi_i and the mean."""
    if surrogate_kind not in ("rbf_linear", "kriging"):
        raise ConfigurationError(f"eigenvector surrogates must be rbf_linear or kriging, got '{surrogate_kind}'")
    if config is None:
        config = EmulatorConfig(pathway="eigvec_interp", surrogate_kind=surrogate_kind, truncation_energy=truncation)

    full = empirical_service.build_basis(data)
    basis = empirical_service.truncate(full, truncation)
    non_null = basis.eigenvalues[~empirical_service.null_mode_mask(basis.eigenvalues)]
    _warn_degenerate(non_null)

    options = _surrogate_options(surrogate_kind, config)
    factory = lambda: build_surrogate(surrogate_kind, **options)
    modes = _fit_all(factory, data.coords, list(basis.eigenvectors.T), threads, "eigenvector mode")

    mean_kind = config.resolved_mean_kind
    mean_options = _surrogate_options(mean_kind, config)
    mean_surrogate = _fit_all(
        lambda: build_surrogate(mean_kind, **mean_options), data.coords, [basis.mean], 1, "mean surrogate"
    )[0]

    logger.info(
        "Fitted eigvec_interp/%s emulator: %d of %d modes on %d points, %d trajectories",
        surrogate_kind, basis.truncation, full.truncation, data.n_points, data.n_seeds,
    )
    return KLEmulator(
        config=config,
        basis=basis,
        mean_surrogate=mean_surrogate,
        doe=data.coords,
        seeds=data.seeds,
        mode_surrogates=modes,
        space=data.space,
    )


def _locate_design(coords: np.ndarray, targets: np.ndarray) -> np.ndarray:
    indices = np.empty(coords.shape[0], dtype=int)
    for j, x in enumerate(coords):
        hits = np.flatnonzero(np.abs(targets - x).max(axis=1) <= TARGET_MATCH_TOL)
        if hits.size == 0:
            raise DataError(f"prediction targets omit design point {j} {x.tolist()}")
        indices[j] = hits[0]
    return indices


def _pair_inputs(rows: np.ndarray, cols: np.ndarray) -> np.ndarray:
    """Concatenated (x, y) for every row/column pair, row-major."""
    a = np.repeat(rows, cols.shape[0], axis=0)
    b = np.tile(cols, (rows.shape[0], 1))
    return np.hstack([a, b])


def covariance_grid(cov_model: Surrogate, targets: np.ndarray, threads: int = 1) -> np.ndarray:
    """Symmetrized surrogate covariance on every target pair, shape (M*, M*)."""
    if isinstance(cov_model, PCESurrogate):
        return pce_pair_grid(cov_model.model, targets)
    m_star = targets.shape[0]
    step = max(1, PAIR_CHUNK // m_star)
    blocks = [targets[start:start + step] for start in range(0, m_star, step)]
    evaluate = lambda rows: cov_model.predict(_pair_inputs(rows, targets)).reshape(rows.shape[0], m_star)
    if threads > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            grid = np.vstack(list(executor.map(evaluate, blocks)))
    else:
        grid = np.vstack([evaluate(rows) for rows in blocks])
    return 0.5 * (grid + grid.T)


def fit_pathway_b(
    data: TrajectoryMatrix,
    targets: np.ndarray,
    degree: int | str = 3,
    config: Optional[EmulatorConfig] = None,
    threads: int = 1,
) -> KLEmulator:
    """
    Covariance surrogate: fit C(x, y) on the M^2 design pairs, evaluate it on
    the M* targets, re-decompose, and project the data on the design rows.
    """
    if config is None:
        config = EmulatorConfig(pathway="cov_surrogate", pce_degree=degree, mean_surrogate_kind="kriging")
    targets = np.atleast_2d(np.asarray(targets, dtype=float))
    if targets.shape[1] != data.dims:
        raise DataError(f"targets are {targets.shape[1]}-dimensional, design is {data.dims}-dimensional")
    if targets.shape[0] < data.n_points:
        raise DataError(f"M* = {targets.shape[0]} targets cannot cover M = {data.n_points} design points")
    if data.space is not None:
        for x in targets:
            data.space.require(x)
    design_rows = _locate_design(data.coords, targets)

    cd = empirical_service.center(data)
    cov = empirical_service.empirical_covariance(cd)

    pair_inputs = _pair_inputs(data.coords, data.coords)
    kind = config.cov_surrogate_kind
    options = _surrogate_options(kind, config)
    if kind == "pce":
        if data.space is not None:
            lower, upper = data.space.lower, data.space.upper
        else:
            lower = np.minimum(data.coords.min(0), targets.min(0))
            upper = np.maximum(data.coords.max(0), targets.max(0))
        options.update(lower=np.concatenate([lower, lower]), upper=np.concatenate([upper, upper]))
    try:
        cov_model = build_surrogate(kind, **options).fit(pair_inputs, cov.ravel())
    except EmulatorError as e:
        raise FitError(f"covariance surrogate: {e}") from e

    grid = covariance_grid(cov_model, targets, threads)
    eigenvalues, eigenvectors = empirical_service.eigendecompose(grid, clamp_negative=True)
    xi = empirical_service.project_xi(cd.centered, eigenvalues, eigenvectors[design_rows])

    mean_kind = config.resolved_mean_kind
    mean_options = _surrogate_options(mean_kind, config)
    mean_surrogate = _fit_all(
        lambda: build_surrogate(mean_kind, **mean_options), data.coords, [cd.mean], 1, "mean surrogate"
    )[0]
    mean = np.array(mean_surrogate.predict(targets), dtype=float)
    mean[design_rows] = cd.mean

    full = KLBasis(eigenvalues=eigenvalues, eigenvectors=eigenvectors, xi=xi, coords=targets, mean=mean)
    basis = empirical_service.truncate(full, config.truncation_energy)
    _warn_degenerate(basis.eigenvalues[~empirical_service.null_mode_mask(basis.eigenvalues)])

    logger.info(
        "Fitted cov_surrogate/%s emulator: %d of %d modes on M* = %d targets (%d covariance pairs)",
        kind, basis.truncation, full.truncation, targets.shape[0], pair_inputs.shape[0],
    )
    return KLEmulator(
        config=config,
        basis=basis,
        mean_surrogate=mean_surrogate,
        doe=data.coords,
        seeds=data.seeds,
        cov_model=cov_model,
        space=data.space,
    )


def fit_emulator(
    data: TrajectoryMatrix,
    config: EmulatorConfig,
    targets: Optional[np.ndarray] = None,
    threads: int = 1,
) -> KLEmulator:
    """Dispatch on the configured pathway; pathway B defaults its targets to the design."""
    if config.pathway == "eigvec_interp":
        return fit_pathway_a(data, config.surrogate_kind, config.truncation_energy, config, threads)
    if targets is None:
        targets = data.coords
    return fit_pathway_b(data, targets, config.pce_degree, config, threads)


def predict_ensemble(emu: KLEmulator, points) -> np.ndarray:
    """
    Emulated trajectories y[a, k] = mean(x_a) + sum_i sqrt(lambda_i) xi_i(w_k) phi_i(x_a),
    shape (n_points, N).
    """
    points = emu.check_points(points)
    phi = emu.mode_values(points)
    mean = emu.mean_values(points)
    return mean[:, None] + (phi * np.sqrt(emu.basis.eigenvalues)) @ emu.basis.xi


def predict_samples(emu: KLEmulator, x_star: Sequence[float]) -> np.ndarray:
    """Predicted output sample at one point, one value per training trajectory."""
    return predict_ensemble(emu, np.asarray(x_star, dtype=float)[None, :])[0]


def predict_variance_gaussian(emu: KLEmulator, x_star: Sequence[float]) -> float:
    """sum_i lambda_i phi_i(x*)^2."""
    phi = emu.mode_values(np.asarray(x_star, dtype=float)[None, :])[0]
    return float(emu.basis.eigenvalues @ (phi * phi))


def gaussian_variance_errors(emu: KLEmulator, sim: StochasticSimulator, points) -> np.ndarray:
    """Relative error of the Gaussian-case variance against a simulator's exact variance."""
    exact_variance = getattr(sim, "variance", None)
    if exact_variance is None:
        raise ConfigurationError(f"simulator '{sim.identifier}' exposes no exact variance")
    points = emu.check_points(points)
    errors = np.empty(points.shape[0])
    for a, x in enumerate(points):
        exact = exact_variance(x)
        predicted = predict_variance_gaussian(emu, x)
        errors[a] = abs(predicted - exact) / exact if exact > 0 else abs(predicted)
    return errors
