# app/services/commitment_service.py
"""Day-ahead commitments from Monte-Carlo demand samples.

The expected slot cost E[C*(G)] is convex in G; its sample-average
subgradient is the nondecreasing step function

    ĝ(G) = (α - ᾱB)·P̂(ζ > G) + (α - ᾱS)·P̂(ζ <= G)

and bisection on its sign finds the minimizer. The same samples are used for
every evaluation within a slot, so ĝ is a fixed step function and the
minimizer is one of the sample points.
"""
import logging
from typing import Callable, Sequence, Union

import numpy as np

from app.core.exceptions import DomainError
from app.models.schemas import (
    CommitmentPlan,
    DemandSample,
    McConfig,
    NetworkConfig,
    PriceCurve,
    SlotPrices,
    TrafficModel,
)
from app.services.load_sharing import no_share_demand, share_batch
from app.services.realtime_trading import realtime_cost
from app.services.scenario_service import check_model_fits
from app.utils.helpers import Stream, stream_rng, uniform_relative

logger = logging.getLogger(__name__)

Samples = Union[np.ndarray, Sequence[DemandSample], Sequence[float]]


def _as_array(samples: Samples) -> np.ndarray:
    values = [s.zeta if isinstance(s, DemandSample) else s for s in samples]
    arr = np.asarray(values, dtype=float)
    if arr.size == 0:
        raise DomainError("at least one demand sample is required")
    return arr


def sample_traffic_draws(
    slot: int,
    model: TrafficModel,
    config: NetworkConfig,
    m_samples: int,
    seed: int,
) -> np.ndarray:
    """M realizations of slot traffic as an (M, K, 2) array, clamped to [0, d_max]"""
    if not 0 <= slot < model.n_slots:
        raise DomainError(f"slot {slot} outside 0..{model.n_slots - 1}")
    if m_samples < 1:
        raise DomainError("m_samples must be at least 1")
    rng = stream_rng(seed, Stream.MC_SAMPLES, slot)
    mean = np.broadcast_to(model.mean_traffic[:, :, slot], (m_samples, model.k_pairs, 2))
    draws = uniform_relative(rng, mean, model.err_frac)
    return np.clip(draws, 0.0, config.arrays["d_max"])


def sample_demands_individual(
    mno: int,
    slot: int,
    model: TrafficModel,
    config: NetworkConfig,
    cfg: McConfig,
    seed: int,
) -> np.ndarray:
    """ζ samples of one MNO without sharing; mno is 1 or 2"""
    if mno not in (1, 2):
        raise DomainError(f"mno must be 1 or 2, got {mno}")
    draws = sample_traffic_draws(slot, model, config, cfg.m_samples, seed)
    return no_share_demand(draws, config)[:, mno - 1]


def sample_demands_group(
    slot: int,
    model: TrafficModel,
    config: NetworkConfig,
    cfg: McConfig,
    seed: int,
) -> np.ndarray:
    """ζ samples of the group, each after optimal load sharing on its own draw"""
    draws = sample_traffic_draws(slot, model, config, cfg.m_samples, seed)
    energy = share_batch(draws, config)[3]
    return energy.sum(axis=-1)


def approx_subgradient(
    g: float,
    samples: Samples,
    alpha: float,
    alpha_buy_pred: float,
    alpha_sell_pred: float,
) -> float:
    zeta = _as_array(samples)
    share_above = np.count_nonzero(zeta > g) / zeta.size
    return (alpha - alpha_buy_pred) * share_above + (alpha - alpha_sell_pred) * (1.0 - share_above)


def sample_average_cost(g: float, samples: Samples, prices: SlotPrices) -> float:
    """(1/M) Σ_m C*(G; ζ_m) at the given prices"""
    zeta = _as_array(samples)
    return float(np.mean(realtime_cost(g, zeta, prices.alpha, prices.alpha_buy, prices.alpha_sell)))


def optimize_commitment(samples: Samples, prices: SlotPrices, cfg: McConfig = McConfig()) -> float:
    """Bisection on the sign of ĝ over [0, max sample + 1]"""
    zeta = np.sort(_as_array(samples))

    def subgradient(g: float) -> float:
        return approx_subgradient(g, zeta, prices.alpha, prices.alpha_buy, prices.alpha_sell)

    lo, hi = 0.0, float(zeta[-1]) + 1.0
    g_lo, g_hi = subgradient(lo), subgradient(hi)
    if g_lo >= 0:
        return lo
    if g_hi <= 0:
        return hi
    assert g_lo <= g_hi, "subgradient must be nondecreasing in G"

    for _ in range(cfg.max_iter):
        if hi - lo <= cfg.tol:
            break
        mid = 0.5 * (lo + hi)
        g_mid = subgradient(mid)
        if g_mid == 0:
            return mid
        if g_mid < 0:
            lo = mid
        else:
            hi = mid

    # the sign change happens at a sample inside (lo, hi]; that kink is the exact minimizer
    inside = zeta[(zeta > lo) & (zeta <= hi)]
    for point in inside:
        if subgradient(float(point)) >= 0:
            return float(point)
    return 0.5 * (lo + hi)


def _plan(owner: str, curve: PriceCurve, cfg: McConfig, sampler: Callable[[int], np.ndarray]) -> CommitmentPlan:
    g = []
    for n in range(curve.n_slots):
        samples = sampler(n)
        g.append(optimize_commitment(samples, curve.predicted(n), cfg))
        logger.debug(f"{owner} slot {n}: G*={g[-1]:.3f} from {samples.size} samples")
    return CommitmentPlan(owner=owner, g=tuple(g))


def plan_noncoop(
    mno: int,
    model: TrafficModel,
    config: NetworkConfig,
    curve: PriceCurve,
    cfg: McConfig,
    seed: int,
) -> CommitmentPlan:
    """Per-slot optimal commitments of one MNO operating alone"""
    check_model_fits(model, config, curve)
    plan = _plan(f"mno{mno}", curve, cfg, lambda n: sample_demands_individual(mno, n, model, config, cfg, seed))
    logger.info(f"Non-cooperative plan for MNO {mno}: {sum(plan.g):.1f} Wh committed over {plan.n_slots} slots")
    return plan


def plan_group(
    model: TrafficModel,
    config: NetworkConfig,
    curve: PriceCurve,
    cfg: McConfig,
    seed: int,
) -> CommitmentPlan:
    """Per-slot optimal group commitments with load sharing inside every sample"""
    check_model_fits(model, config, curve)
    plan = _plan("group", curve, cfg, lambda n: sample_demands_group(n, model, config, cfg, seed))
    logger.info(f"Group plan: {sum(plan.g):.1f} Wh committed over {plan.n_slots} slots")
    return plan
