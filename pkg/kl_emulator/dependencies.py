"""Run-configuration resolution and the collaborators every CLI command needs."""
import json
from pathlib import Path
from typing import Any, Dict, Optional
import yaml
from pydantic import ValidationError

from kl_emulator.exceptions import ConfigurationError
from kl_emulator.repositories import ArtifactRepository
from kl_emulator.schemas.design import ParameterSpace, SeedRegistry
from kl_emulator.schemas.run import RunConfig
from kl_emulator.services import design_service
from kl_emulator.simulators import StochasticSimulator, get_simulator


def load_config_file(path: Optional[str]) -> Dict[str, Any]:
    """Mapping from a YAML or JSON run-config file; {} when no file is given."""
    if not path:
        return {}
    config_path = Path(path)
    if not config_path.is_file():
        raise ConfigurationError(f"config file not found: {path}")
    text = config_path.read_text(encoding="utf-8")
    try:
        values = json.loads(text) if config_path.suffix == ".json" else yaml.safe_load(text)
    except (json.JSONDecodeError, yaml.YAMLError) as e:
        raise ConfigurationError(f"cannot parse config file {path}: {e}") from e
    if values is None:
        return {}
    if not isinstance(values, dict):
        raise ConfigurationError(f"config file {path} must hold a mapping")
    return values


def resolve_run_config(config_path: Optional[str] = None, **overrides: Any) -> RunConfig:
    """Settings defaults, then file values, then non-None flag overrides."""
    values = load_config_file(config_path)
    values.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return RunConfig(**values)
    except ValidationError as e:
        problems = "; ".join(
            f"{'.'.join(str(p) for p in err['loc']) or 'config'}: {err['msg']}" for err in e.errors()
        )
        raise ConfigurationError(f"invalid run configuration: {problems}") from e


def seed_overrides(seed: Optional[int]) -> Dict[str, int]:
    """A single --seed drives the design, fold-split and test-point streams."""
    if seed is None:
        return {}
    return {"doe_seed": seed, "split_seed": seed + 1, "test_seed": seed + 2}


def get_run_simulator(run: RunConfig) -> StochasticSimulator:
    return get_simulator(run.simulator)


def get_space(run: RunConfig) -> ParameterSpace:
    if run.bounds is None:
        return get_run_simulator(run).input_space
    try:
        return ParameterSpace(bounds=run.bounds)
    except ValidationError as e:
        raise ConfigurationError(f"invalid bounds: {e.errors()[0]['msg']}") from e


def get_seeds(run: RunConfig) -> SeedRegistry:
    return SeedRegistry.consecutive(run.n, start=run.seed_start)


def get_fresh_seeds(training: SeedRegistry, n: int) -> SeedRegistry:
    """n consecutive seeds past the largest training seed."""
    return SeedRegistry.consecutive(n, start=max(training.seeds) + 1)


def get_test_points(run: RunConfig):
    return design_service.uniform_points(get_space(run), run.n_test_points, run.test_seed)


def get_repository(run: RunConfig) -> ArtifactRepository:
    return ArtifactRepository(run.output_dir)
