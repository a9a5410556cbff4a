# app/services/realtime_trading.py
from typing import Sequence, Tuple

import numpy as np

from app.core.exceptions import DomainError
from app.models.schemas import NetworkConfig, SlotPrices, TradeDecision
from app.services.load_sharing import no_share_demand, share_batch


def realtime_cost(g, zeta, alpha, alpha_buy, alpha_sell):
    """Minimum slot cost C*(G) given commitment G and realized demand zeta.

    Works elementwise on arrays: buying covers any deficit, selling any surplus.
    """
    g = np.asarray(g, dtype=float)
    zeta = np.asarray(zeta, dtype=float)
    return np.where(
        g <= zeta,
        (alpha - alpha_buy) * g + alpha_buy * zeta,
        (alpha - alpha_sell) * g + alpha_sell * zeta,
    )


def individual_trade(g: float, zeta: float, pr: SlotPrices) -> TradeDecision:
    """Optimal real-time buy/sell for one MNO holding commitment g"""
    if g < 0 or zeta < 0:
        raise DomainError(f"commitment ({g}) and demand ({zeta}) must be nonnegative")
    buy = max(zeta - g, 0.0)
    sell = max(g - zeta, 0.0)
    cost = float(realtime_cost(g, zeta, pr.alpha, pr.alpha_buy, pr.alpha_sell))
    return TradeDecision(commitment=g, buy=buy, sell=sell, cost=cost)


def group_trade(g: float, zeta_shared: float, pr: SlotPrices) -> TradeDecision:
    """Optimal real-time trade of the aggregated group after load sharing"""
    return individual_trade(g, zeta_shared, pr)


def price_arrays(prices: Sequence[SlotPrices]) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(alpha, alpha_buy, alpha_sell) as per-slot arrays"""
    return tuple(np.array([getattr(p, f) for p in prices], dtype=float) for f in ("alpha", "alpha_buy", "alpha_sell"))


def noncoop_day_costs(traffic: np.ndarray, prices: Sequence[SlotPrices], config: NetworkConfig, g1, g2) -> np.ndarray:
    """C*_{i,n}(G_{i,n}) for a realized day; traffic is (K, 2, N), result is (N, 2)"""
    alpha, alpha_buy, alpha_sell = price_arrays(prices)
    demand = no_share_demand(np.moveaxis(traffic, 2, 0), config)
    g = np.stack([np.asarray(g1, dtype=float), np.asarray(g2, dtype=float)], axis=1)
    return realtime_cost(g, demand, alpha[:, None], alpha_buy[:, None], alpha_sell[:, None])


def group_day_costs(traffic: np.ndarray, prices: Sequence[SlotPrices], config: NetworkConfig, g) -> np.ndarray:
    """C**_{TC,n}(G_n) for a realized day with optimal load sharing; result is (N,)"""
    alpha, alpha_buy, alpha_sell = price_arrays(prices)
    zeta = share_batch(np.moveaxis(traffic, 2, 0), config)[3].sum(axis=-1)
    return realtime_cost(np.asarray(g, dtype=float), zeta, alpha, alpha_buy, alpha_sell)
