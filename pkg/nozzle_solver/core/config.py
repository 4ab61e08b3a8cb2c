from pydantic_settings import BaseSettings, SettingsConfigDict
from functools import lru_cache
import math
import os
from dotenv import load_dotenv

load_dotenv()

class Settings(BaseSettings):
    # Application Settings
    ENVIRONMENT: str = os.getenv("ENVIRONMENT", "development")
    LOG_LEVEL: str = os.getenv("LOG_LEVEL", "INFO")
    LOG_FORMAT: str = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

    # Grid defaults
    DEFAULT_N1: int = 513
    DEFAULT_N2: int = 257
    DEFAULT_MODES: int = 16

    # Iteration and solver tolerances
    FP_TOL: float = 1e-10
    MAX_ITER: int = 100
    RESIDUAL_TOL: float = 1e-8
    DIVERGENCE_TOL: float = 1e-3

    # Background integration
    BACKGROUND_RTOL: float = 1e-11
    BACKGROUND_ATOL: float = 1e-13
    SEPARATRIX_SWITCH: float = 1e-3
    SONIC_GUARD: float = 1e-8
    CLASSIFY_TOL: float = 1e-10
    EVENT_TOL: float = 1e-10

    # Linearization guard
    SONIC_DEN_TOL: float = 1e-8

    # Multiplier construction
    C_STAR: float = 10.0
    C_FLAT: float = 10.0
    LAMBDA1_STAR: float = math.pi / 8
    SEARCH_RTOL: float = 1e-8

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

@lru_cache()
def get_settings() -> Settings:
    return Settings()
