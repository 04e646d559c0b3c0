from pydantic import BeforeValidator
from typing import Annotated, Any
import numpy as np


def as_frozen_array(value: Any) -> np.ndarray:
    """Copy into a read-only float64 array."""
    array = np.array(value, dtype=np.float64)
    array.flags.writeable = False
    return array


FloatArray = Annotated[np.ndarray, BeforeValidator(as_frozen_array)]
