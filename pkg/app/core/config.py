# app/core/config.py
from pathlib import Path
from typing import List

from pydantic_settings import BaseSettings, SettingsConfigDict

DATA_DIR = Path(__file__).resolve().parent.parent.parent / "data"


class Settings(BaseSettings):
    model_config = SettingsConfigDict(
        env_file=".env",
        env_prefix="MNO_",
        case_sensitive=True,
        extra="ignore",
    )

    # Application settings
    APP_NAME: str = "MNO Energy Group Buying Simulator"
    APP_VERSION: str = "1.0.0"
    DEBUG: bool = False
    LOG_LEVEL: str = "INFO"

    # API settings
    API_V1_STR: str = "/api/v1"
    BACKEND_CORS_ORIGINS: List[str] = ["http://localhost:3000", "http://localhost:8005"]

    # Experiment defaults (desk scale)
    BS_PAIRS: int = 50
    SLOTS: int = 48
    MC_SAMPLES: int = 500
    REALIZATIONS: int = 50
    SEED: int = 2016
    WORKERS: int = 1
    OUTPUT_DIR: str = "results"
    PRICE_FILE: str = str(DATA_DIR / "prices_48.csv")

    # Prediction errors (uniform, relative half-widths)
    TRAFFIC_ERR_FRAC: float = 0.4
    PRICE_ERR_FRAC: float = 0.1

    # LTE macro BS power model
    BS_A: float = 12.0
    BS_B: float = 1200.0
    BS_C: float = 30.0
    BS_D_MAX: float = 150.0

    # Day-ahead optimization
    BISECTION_TOL: float = 0.1
    BISECTION_MAX_ITER: int = 200

    # Served traffic at or below this is treated as zero (sleep mode)
    SLEEP_TOL: float = 1e-12


settings = Settings()
