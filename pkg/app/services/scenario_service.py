# app/services/scenario_service.py
import logging
from typing import Optional, Sequence

import numpy as np

from app.core.config import settings
from app.core.exceptions import DomainError
from app.models.schemas import NetworkConfig, PriceCurve, Scenario, SlotPrices, TrafficModel
from app.utils.helpers import Stream, slot_hours, stream_rng, uniform_relative
from app.utils.validators import (
    PRICE_COLUMNS,
    PROFILE_COLUMNS,
    check_price_rows,
    check_profile_rows,
    read_curve_csv,
)

logger = logging.getLogger(__name__)

# Amplitude ranges as fractions of d_max, (MNO 1, MNO 2)
AMPLITUDE_RANGES = {
    "symmetric": ((0.1, 0.9), (0.1, 0.9)),
    "asymmetric": ((0.1, 0.9), (0.05, 0.45)),
}


def diurnal_profile(n_slots: int) -> np.ndarray:
    """Built-in θ_n: quiet night around 05:00, broad afternoon peak around 17:00"""
    if n_slots < 1:
        raise DomainError("n_slots must be at least 1")
    hours = np.arange(n_slots) * slot_hours(n_slots)
    theta = 0.3 + 0.25 * (1.0 - np.cos(2.0 * np.pi * (hours - 5.0) / 24.0))
    return np.clip(theta, 1e-6, 1.0)


def load_price_curve(
    path: str,
    buy_err_frac: float = settings.PRICE_ERR_FRAC,
    sell_err_frac: float = settings.PRICE_ERR_FRAC,
) -> PriceCurve:
    frame = read_curve_csv(path, PRICE_COLUMNS)
    check_price_rows(frame, path)
    curve = PriceCurve(
        alpha=tuple(frame["alpha"].astype(float)),
        alpha_buy_pred=tuple(frame["alpha_buy_pred"].astype(float)),
        alpha_sell_pred=tuple(frame["alpha_sell_pred"].astype(float)),
        buy_err_frac=buy_err_frac,
        sell_err_frac=sell_err_frac,
    )
    logger.info(f"Loaded price curve with {curve.n_slots} slots from {path}")
    return curve


def load_traffic_profile(path: str) -> np.ndarray:
    frame = read_curve_csv(path, PROFILE_COLUMNS)
    check_profile_rows(frame, path)
    return frame["theta"].to_numpy(dtype=float)


def synth_traffic_model(
    kind: str,
    k_pairs: int,
    d_max: float,
    seed: int,
    n_slots: int = 48,
    theta: Optional[Sequence[float]] = None,
    err_frac: float = settings.TRAFFIC_ERR_FRAC,
) -> TrafficModel:
    """Draw per-BS amplitudes χ uniformly from the kind's range"""
    if kind not in AMPLITUDE_RANGES:
        raise DomainError(f"unknown traffic kind {kind!r}")
    if k_pairs < 1:
        raise DomainError("k_pairs must be at least 1")

    rng = stream_rng(seed, Stream.SYNTH_TRAFFIC)
    u = rng.uniform(0.0, 1.0, size=(k_pairs, 2))
    lows = np.array([r[0] for r in AMPLITUDE_RANGES[kind]])
    highs = np.array([r[1] for r in AMPLITUDE_RANGES[kind]])
    chi = (lows + u * (highs - lows)) * d_max

    profile = diurnal_profile(n_slots) if theta is None else np.asarray(theta, dtype=float)
    return TrafficModel(
        theta=tuple(float(t) for t in profile),
        chi=tuple((float(c1), float(c2)) for c1, c2 in chi),
        err_frac=err_frac,
    )


def check_model_fits(model: TrafficModel, config: NetworkConfig, curve: Optional[PriceCurve] = None) -> None:
    """Predicted loads must respect every BS capacity and dimensions must agree"""
    if model.k_pairs != config.k_pairs:
        raise DomainError(f"traffic model has {model.k_pairs} pairs, network has {config.k_pairs}")
    if model.n_slots != config.n_slots:
        raise DomainError(f"traffic model has {model.n_slots} slots, network has {config.n_slots}")
    if curve is not None and curve.n_slots != config.n_slots:
        raise DomainError(f"price curve has {curve.n_slots} slots, network has {config.n_slots}")
    over = model.mean_traffic > config.arrays["d_max"][:, :, None] + 1e-9
    if over.any():
        k, i, n = (int(v) for v in np.argwhere(over)[0])
        raise DomainError(f"predicted traffic exceeds d_max at pair {k}, MNO {i + 1}, slot {n}")


def sample_slot_prices(curve: PriceCurve, rng: np.random.Generator, n: int):
    """Realized (alpha_buy, alpha_sell, clamps) for slot n"""
    alpha = curve.alpha[n]
    alpha_buy = float(uniform_relative(rng, curve.alpha_buy_pred[n], curve.buy_err_frac))
    alpha_sell = float(uniform_relative(rng, curve.alpha_sell_pred[n], curve.sell_err_frac))
    clamps = 0
    if alpha_buy < alpha:
        alpha_buy, clamps = alpha, clamps + 1
    if alpha_sell > alpha:
        alpha_sell, clamps = alpha, clamps + 1
    return alpha_buy, alpha_sell, clamps


def sample_scenario(
    curve: PriceCurve,
    model: TrafficModel,
    config: NetworkConfig,
    seed: int,
    realization: int = 0,
    stream: Stream = Stream.SCENARIO,
) -> Scenario:
    """Realize one day of prices and traffic; slot n draws from node (stream, realization, n)"""
    check_model_fits(model, config, curve)
    d_max = config.arrays["d_max"]
    mean = model.mean_traffic

    prices = []
    traffic = np.empty_like(mean)
    price_clamps = 0
    traffic_clamps = 0
    for n in range(curve.n_slots):
        rng = stream_rng(seed, stream, realization, n)
        alpha_buy, alpha_sell, clamps = sample_slot_prices(curve, rng, n)
        price_clamps += clamps
        prices.append(SlotPrices(alpha=curve.alpha[n], alpha_buy=alpha_buy, alpha_sell=alpha_sell))

        raw = uniform_relative(rng, mean[:, :, n], model.err_frac)
        traffic_clamps += int(np.count_nonzero((raw < 0) | (raw > d_max)))
        traffic[:, :, n] = np.clip(raw, 0.0, d_max)

    if price_clamps:
        logger.warning(f"Realization {realization}: clamped {price_clamps} real-time prices to keep ordering")
    logger.debug(f"Realization {realization}: {traffic_clamps} traffic clamps")
    return Scenario(
        prices=tuple(prices),
        traffic=traffic,
        price_clamps=price_clamps,
        traffic_clamps=traffic_clamps,
    )
