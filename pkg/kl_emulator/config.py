from pydantic_settings import BaseSettings, SettingsConfigDict
from typing import Literal


class Settings(BaseSettings):
    """Library and CLI settings."""

    # Application
    APP_NAME: str = "KL Emulator"

    # Output
    OUTPUT_DIR: str = "runs"
    THREADS: int = 1

    # Distribution comparison
    DEFAULT_BINS: int = 20
    DEFAULT_ALPHA: float = 0.05

    # Emulator
    DEFAULT_TRUNCATION_ENERGY: float = 1.0
    DEFAULT_PCE_DEGREE: int = 3
    DEFAULT_KERNEL: Literal["gaussian", "exponential", "matern32", "matern52"] = "matern52"

    # Kriging hyperparameter search
    KRIGING_STARTS: int = 5
    KRIGING_MAX_ITER: int = 400
    NUGGET_START: float = 1e-10
    NUGGET_MAX: float = 1e-6

    # Logging
    LOG_LEVEL: str = "INFO"

    model_config = SettingsConfigDict(
        env_file=".env",
        env_prefix="KLEMU_",
        case_sensitive=True,
        extra="ignore"
    )


settings = Settings()
