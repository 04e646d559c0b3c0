from typing import Any, Dict, Type

from kl_emulator.exceptions import ConfigurationError
from kl_emulator.surrogates.base import Surrogate
from kl_emulator.surrogates.kernels import gram_matrix, kernel_eval
from kl_emulator.surrogates.kriging import KrigingSurrogate
from kl_emulator.surrogates.pce import PCESurrogate, pce_fit, pce_pair_grid, pce_predict
from kl_emulator.surrogates.rbf import RBFLinearSurrogate

SURROGATES: Dict[str, Type[Surrogate]] = {
    RBFLinearSurrogate.kind: RBFLinearSurrogate,
    KrigingSurrogate.kind: KrigingSurrogate,
    PCESurrogate.kind: PCESurrogate,
}


def build_surrogate(kind: str, **options: Any) -> Surrogate:
    """Unfitted surrogate of the given kind; options go to its constructor."""
    if kind not in SURROGATES:
        raise ConfigurationError(f"Unknown surrogate kind: '{kind}'. Available: {sorted(SURROGATES)}")
    return SURROGATES[kind](**options)


def surrogate_from_dict(data: Dict[str, Any]) -> Surrogate:
    kind = data.get("kind")
    if kind not in SURROGATES:
        raise ConfigurationError(f"Unknown surrogate kind: '{kind}'")
    return SURROGATES[kind].from_dict(data)


def rbf_linear_fit(inputs, targets) -> RBFLinearSurrogate:
    return RBFLinearSurrogate().fit(inputs, targets)


def kriging_fit(inputs, targets, family: str = "matern52", **options: Any) -> KrigingSurrogate:
    return KrigingSurrogate(family=family, **options).fit(inputs, targets)


__all__ = [
    "Surrogate",
    "RBFLinearSurrogate",
    "KrigingSurrogate",
    "PCESurrogate",
    "SURROGATES",
    "build_surrogate",
    "surrogate_from_dict",
    "rbf_linear_fit",
    "kriging_fit",
    "kernel_eval",
    "gram_matrix",
    "pce_fit",
    "pce_predict",
    "pce_pair_grid",
]
