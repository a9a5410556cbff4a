# app/services/load_sharing.py
"""Optimal traffic offloading between co-located BS pairs.

With the served totals fixed, pair energy as a function of the net offload
y = x1 - x2 is linear while both BSs are active, drops by b - c where a BS
goes to sleep, and is bounded by the two capacities. Its minimum is therefore
attained on a small candidate set: no sharing, either BS asleep, or either BS
filled to capacity. Every routine here enumerates that set.
"""
import logging
from typing import List, Tuple

import numpy as np

from app.core.config import settings
from app.core.exceptions import DomainError
from app.models.schemas import BsParams, NetworkConfig, PairDecision
from app.services.power_model import bs_power_array

logger = logging.getLogger(__name__)

FEASIBILITY_TOL = 1e-9
TIE_TOL = 1e-9


def _coefficients(p1: BsParams, p2: BsParams) -> Tuple[np.ndarray, ...]:
    return tuple(np.array([getattr(p1, f), getattr(p2, f)], dtype=float) for f in ("a", "b", "c", "d_max"))


def candidate_offloads(d1: np.ndarray, d2: np.ndarray, m1: np.ndarray, m2: np.ndarray) -> np.ndarray:
    """Net offloads: no-share, sleep-1, sleep-2, fill-1, fill-2 stacked on axis 0"""
    d1, d2, m1, m2 = np.broadcast_arrays(d1, d2, m1, m2)
    return np.stack([np.zeros_like(d1), d1, -d2, d1 - m1, m2 - d2])


def _select(
    y: np.ndarray,
    d1: np.ndarray,
    d2: np.ndarray,
    a: np.ndarray,
    b: np.ndarray,
    c: np.ndarray,
    m: np.ndarray,
) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Pick the best of the offloads y (axis 0) per instance.

    a, b, c, m carry the two BSs on their last axis. Returns the chosen
    (y, served1, served2, energy), each shaped like d1.
    """
    served1 = d1 - y
    served2 = d2 + y
    m1, m2 = m[..., 0], m[..., 1]
    feasible = (
        (served1 >= -FEASIBILITY_TOL)
        & (served1 <= m1 + FEASIBILITY_TOL)
        & (served2 >= -FEASIBILITY_TOL)
        & (served2 <= m2 + FEASIBILITY_TOL)
    )
    served1 = np.clip(served1, 0.0, m1)
    served2 = np.clip(served2, 0.0, m2)
    energy = bs_power_array(served1, a[..., 0], b[..., 0], c[..., 0]) + bs_power_array(
        served2, a[..., 1], b[..., 1], c[..., 1]
    )
    energy = np.where(feasible, energy, np.inf)

    best = energy.min(axis=0)
    ties = energy <= best + TIE_TOL * np.maximum(1.0, np.abs(best))
    sleep1 = served1 <= settings.SLEEP_TOL
    sleep2 = served2 <= settings.SLEEP_TOL
    # sleep BS 1, then sleep BS 2, then the both-active option with least offload
    tier = np.where(sleep1, 0.0, np.where(sleep2, 1.0, 2.0))
    rank = np.where(ties, tier * 1e12 + np.abs(y), np.inf)
    pick = np.expand_dims(rank.argmin(axis=0), 0)

    def take(v: np.ndarray) -> np.ndarray:
        return np.take_along_axis(v, pick, axis=0)[0]

    return take(y), take(served1), take(served2), take(energy)


def _decision(y: float, served1: float, served2: float, energy: float) -> PairDecision:
    return PairDecision(
        x1=max(y, 0.0),
        x2=max(-y, 0.0),
        served1=served1,
        served2=served2,
        energy=energy,
        sleep1=served1 <= settings.SLEEP_TOL,
        sleep2=served2 <= settings.SLEEP_TOL,
    )


def optimal_pair_share(d1: float, d2: float, p1: BsParams, p2: BsParams) -> PairDecision:
    """Energy-minimizing offload for one BS pair with positive loads"""
    for name, d, p in (("D1", d1, p1), ("D2", d2, p2)):
        if d <= 0 or d > p.d_max:
            raise DomainError(f"{name}={d} Mbps outside (0, {p.d_max}]")
    a, b, c, m = _coefficients(p1, p2)
    d1a, d2a = np.array([d1], dtype=float), np.array([d2], dtype=float)
    y = candidate_offloads(d1a, d2a, np.array([m[0]]), np.array([m[1]]))
    chosen = _select(y, d1a, d2a, a[None, :], b[None, :], c[None, :], m[None, :])
    return _decision(*(float(v[0]) for v in chosen))


def pair_share_oracle(d1: float, d2: float, p1: BsParams, p2: BsParams, step: float) -> PairDecision:
    """Grid search over the net offload, plus the exact candidate points"""
    if step <= 0:
        raise DomainError("grid step must be positive")
    lo = -(p1.d_max - d1)
    hi = p2.d_max - d2
    a, b, c, m = _coefficients(p1, p2)
    candidates = candidate_offloads(np.float64(d1), np.float64(d2), np.float64(m[0]), np.float64(m[1]))
    grid = np.concatenate([np.arange(lo, hi, step), [hi], candidates[(candidates >= lo) & (candidates <= hi)]])
    grid = np.unique(grid)[:, None]
    shape = (1,)
    chosen = _select(
        grid,
        np.full(shape, float(d1)),
        np.full(shape, float(d2)),
        a[None, :],
        b[None, :],
        c[None, :],
        m[None, :],
    )
    return _decision(*(float(v[0]) for v in chosen))


def share_batch(traffic: np.ndarray, config: NetworkConfig) -> Tuple[np.ndarray, ...]:
    """Optimal sharing for traffic[..., k, i]; returns (y, served1, served2, energy) shaped [..., k].

    Zero loads are allowed here: an idle BS is already asleep and the
    enumeration still finds the best configuration.
    """
    arrays = config.arrays
    a, b, c, m = (np.broadcast_to(arrays[f], traffic.shape) for f in ("a", "b", "c", "d_max"))
    d1, d2 = traffic[..., 0], traffic[..., 1]
    y = candidate_offloads(d1, d2, m[..., 0], m[..., 1])
    return _select(y, d1, d2, a, b, c, m)


def shared_demand(traffic: np.ndarray, config: NetworkConfig) -> Tuple[float, List[PairDecision]]:
    """Minimum group demand for one slot's traffic[k, i] and the per-pair decisions"""
    traffic = np.asarray(traffic, dtype=float)
    if traffic.shape != (config.k_pairs, 2):
        raise DomainError(f"expected traffic of shape ({config.k_pairs}, 2), got {traffic.shape}")
    if (traffic < 0).any() or (traffic > config.arrays["d_max"]).any():
        raise DomainError("traffic outside [0, d_max]")
    y, served1, served2, energy = share_batch(traffic, config)
    decisions = [_decision(*(float(v) for v in values)) for values in zip(y, served1, served2, energy)]
    return float(energy.sum()), decisions


def no_share_demand(traffic: np.ndarray, config: NetworkConfig) -> np.ndarray:
    """Per-MNO demand Σ_k P(D) without sharing; traffic[..., k, i] -> [..., i]"""
    arrays = config.arrays
    power = bs_power_array(traffic, arrays["a"], arrays["b"], arrays["c"])
    return power.sum(axis=-2)
