# app/services/power_model.py
import numpy as np

from app.core.config import settings
from app.core.exceptions import DomainError
from app.models.schemas import BsParams, SlotPrices, TradeDecision


def bs_power(d: float, p: BsParams) -> float:
    """Power drawn by a BS serving d Mbps: a*d + b when active, c asleep"""
    if d < 0 or d > p.d_max:
        raise DomainError(f"traffic {d} Mbps outside [0, {p.d_max}]")
    if d <= settings.SLEEP_TOL:
        return p.c
    return p.a * d + p.b


def bs_power_array(d: np.ndarray, a: np.ndarray, b: np.ndarray, c: np.ndarray) -> np.ndarray:
    """Elementwise bs_power for already-feasible loads"""
    return np.where(d <= settings.SLEEP_TOL, c, a * d + b)


def slot_cost(t: TradeDecision, pr: SlotPrices) -> float:
    if t.buy < 0 or t.sell < 0:
        raise DomainError("buy and sell amounts must be nonnegative")
    return pr.alpha * t.commitment + pr.alpha_buy * t.buy - pr.alpha_sell * t.sell
