from typing import Dict, Type

from kl_emulator.exceptions import ConfigurationError
from kl_emulator.simulators.base import StochasticSimulator
from kl_emulator.simulators.toy import GaussianSineProcess, ToyProcess3D, toy_covariance_oracle

SIMULATORS: Dict[str, Type[StochasticSimulator]] = {
    ToyProcess3D.identifier: ToyProcess3D,
    GaussianSineProcess.identifier: GaussianSineProcess,
}


def get_simulator(identifier: str) -> StochasticSimulator:
    if identifier not in SIMULATORS:
        raise ConfigurationError(f"Unknown simulator '{identifier}'. Available: {sorted(SIMULATORS)}")
    return SIMULATORS[identifier]()


__all__ = [
    "StochasticSimulator",
    "ToyProcess3D",
    "GaussianSineProcess",
    "toy_covariance_oracle",
    "SIMULATORS",
    "get_simulator",
]
