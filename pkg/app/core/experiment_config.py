# app/core/experiment_config.py
"""Layered experiment configuration: Settings defaults, then a flat
key=value file, then explicit overrides (CLI flags or API fields)."""
from pathlib import Path
from typing import Any, Dict, Optional

from pydantic import ValidationError

from app.core.config import settings
from app.core.exceptions import ConfigError
from app.models.schemas import SCHEMES, ExperimentConfig

# config-file / flag name -> ExperimentConfig field
KEY_ALIASES = {
    "bs_pairs": "k_pairs",
    "slots": "n_slots",
    "mc_samples": "m_samples",
    "realizations": "realizations",
    "seed": "seed",
    "traffic": "traffic",
    "prices": "prices",
    "out": "out",
    "scheme": "schemes",
    "workers": "workers",
    "traffic_err": "traffic_err_frac",
    "price_err": "price_err_frac",
}


def default_values() -> Dict[str, Any]:
    return {
        "k_pairs": settings.BS_PAIRS,
        "n_slots": settings.SLOTS,
        "m_samples": settings.MC_SAMPLES,
        "realizations": settings.REALIZATIONS,
        "seed": settings.SEED,
        "prices": settings.PRICE_FILE,
        "out": settings.OUTPUT_DIR,
        "workers": settings.WORKERS,
        "traffic_err_frac": settings.TRAFFIC_ERR_FRAC,
        "price_err_frac": settings.PRICE_ERR_FRAC,
    }


def parse_schemes(value: str) -> tuple:
    if value == "all":
        return SCHEMES
    return tuple(s.strip() for s in value.split(",") if s.strip())


def read_config_file(path: str) -> Dict[str, Any]:
    """Parse `key = value` lines; '#' starts a comment"""
    file = Path(path)
    if not file.is_file():
        raise ConfigError("config file not found", source=path)
    values: Dict[str, Any] = {}
    for lineno, raw in enumerate(file.read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value", source=path)
        key, value = (part.strip() for part in line.split("=", 1))
        name = key.replace("-", "_")
        if name not in KEY_ALIASES:
            raise ConfigError(f"line {lineno}: unknown key", source=path, key=key)
        field = KEY_ALIASES[name]
        values[field] = parse_schemes(value) if field == "schemes" else value
    return values


def resolve_experiment_config(
    config_file: Optional[str] = None,
    overrides: Optional[Dict[str, Any]] = None,
) -> ExperimentConfig:
    values = default_values()
    source = "defaults"
    if config_file:
        values.update(read_config_file(config_file))
        source = config_file
    if overrides:
        values.update({k: v for k, v in overrides.items() if v is not None})
        source = "command line" if not config_file else f"{config_file} + command line"
    try:
        return ExperimentConfig(**values)
    except ValidationError as e:
        first = e.errors()[0]
        key = ".".join(str(p) for p in first["loc"])
        raise ConfigError(first["msg"], source=source, key=key)
