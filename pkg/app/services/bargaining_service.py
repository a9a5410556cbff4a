# app/services/bargaining_service.py
"""Repeated Nash bargaining between two self-interested MNOs.

Real time: the group trades and shares load exactly as under full
cooperation, and the total cost is split so that each MNO saves the same
amount relative to operating alone with its own commitment.

Day ahead: the MNOs agree on the full-cooperation group commitment and
negotiate how it is split. With the expected standalone cost approximated
as linear in the commitment, both payoffs depend on the split only through
a scalar transfer L, and the Nash product (Υ1 + L)(Υ2 - L) has a closed-form
maximizer.
"""
import logging
from typing import Optional, Tuple

import numpy as np

from app.core.exceptions import DomainError
from app.models.schemas import (
    BargainDayOutcome,
    BargainSlotOutcome,
    CommitmentPlan,
    NetworkConfig,
    PriceCurve,
    SlotPrices,
    TrafficModel,
)
from app.services.load_sharing import no_share_demand, shared_demand
from app.services.realtime_trading import group_day_costs, group_trade, individual_trade, noncoop_day_costs
from app.services.scenario_service import check_model_fits, sample_scenario
from app.utils.helpers import Stream

logger = logging.getLogger(__name__)


def split_realtime_costs(group_cost: float, standalone1: float, standalone2: float) -> Tuple[float, float]:
    """Nash bargaining split of the group cost: equal savings for both MNOs"""
    cost1 = 0.5 * group_cost + 0.5 * (standalone1 - standalone2)
    return cost1, group_cost - cost1


def realtime_bargain(
    g1: float,
    g2: float,
    traffic: np.ndarray,
    prices: SlotPrices,
    config: NetworkConfig,
) -> BargainSlotOutcome:
    """Bargain one slot given the commitment split and the slot's traffic[k, i]"""
    if g1 < 0 or g2 < 0:
        raise DomainError("commitments must be nonnegative")
    traffic = np.asarray(traffic, dtype=float)
    zeta_shared, shares = shared_demand(traffic, config)
    trade = group_trade(g1 + g2, zeta_shared, prices)

    own = no_share_demand(traffic, config)
    standalone1 = individual_trade(g1, float(own[0]), prices).cost
    standalone2 = individual_trade(g2, float(own[1]), prices).cost
    cost1, cost2 = split_realtime_costs(trade.cost, standalone1, standalone2)

    # each MNO pays its own commitment and half of the group's real-time trade
    realtime_half = 0.5 * (prices.alpha_buy * trade.buy - prices.alpha_sell * trade.sell)
    ledger1 = prices.alpha * g1 + realtime_half
    return BargainSlotOutcome(
        trade=trade,
        shares=tuple(shares),
        cost1=cost1,
        cost2=cost2,
        standalone1=standalone1,
        standalone2=standalone2,
        payment_net=cost1 - ledger1,
    )


def expected_upsilons(
    model: TrafficModel,
    config: NetworkConfig,
    curve: PriceCurve,
    plan1: CommitmentPlan,
    plan2: CommitmentPlan,
    group_plan: CommitmentPlan,
    realizations: int,
    seed: int,
) -> Tuple[float, float]:
    """Monte-Carlo Υ_i = E ΣC*_i(G*_i) - ½ E ΣC**_TC(G**) on common scenarios"""
    if realizations < 1:
        raise DomainError("realizations must be at least 1")
    check_model_fits(model, config, curve)
    standalone = np.zeros(2)
    group = 0.0
    for r in range(realizations):
        scenario = sample_scenario(curve, model, config, seed, r, stream=Stream.UPSILON_ESTIMATE)
        standalone += noncoop_day_costs(scenario.traffic, scenario.prices, config, plan1.g, plan2.g).sum(axis=0)
        group += float(group_day_costs(scenario.traffic, scenario.prices, config, group_plan.g).sum())
    standalone /= realizations
    group /= realizations
    upsilon1 = float(standalone[0] - 0.5 * group)
    upsilon2 = float(standalone[1] - 0.5 * group)
    logger.info(f"Estimated bargaining surpluses: upsilon1={upsilon1:.2f}, upsilon2={upsilon2:.2f}")
    return upsilon1, upsilon2


def nash_split(upsilon1: float, upsilon2: float, l_min: float, l_max: float) -> Optional[float]:
    """Maximizer of (Υ1 + L)(Υ2 - L) over [l_min, l_max] with both factors >= 0.

    Returns None when no feasible L keeps both payoffs nonnegative.
    """
    lo = max(l_min, -upsilon1)
    hi = min(l_max, upsilon2)
    if lo > hi:
        return None
    return float(np.clip(0.5 * (upsilon2 - upsilon1), lo, hi))


def transfer_bounds(group_plan: CommitmentPlan, model: TrafficModel, config: NetworkConfig, curve: PriceCurve):
    """L at G1 = 0 and at G1 = G**, under the linear expected-cost approximation"""
    alpha = np.asarray(curve.alpha)
    alpha_buy = np.asarray(curve.alpha_buy_pred)
    g = np.asarray(group_plan.g, dtype=float)
    predicted = no_share_demand(np.moveaxis(model.mean_traffic, 2, 0), config)
    offset = alpha_buy * (predicted[:, 1] - predicted[:, 0])
    slope = alpha - alpha_buy
    l_min = 0.5 * float(np.sum(slope * g + offset))
    l_max = 0.5 * float(np.sum(-slope * g + offset))
    return l_min, l_max


def settle_commitments(
    group_plan: CommitmentPlan,
    upsilon1: float,
    upsilon2: float,
    model: TrafficModel,
    config: NetworkConfig,
    curve: PriceCurve,
) -> BargainDayOutcome:
    """Split G** between the MNOs at the Nash bargaining transfer"""
    if group_plan.n_slots != curve.n_slots:
        raise DomainError("group plan and price curve disagree on the number of slots")
    l_min, l_max = transfer_bounds(group_plan, model, config, curve)
    l_star = nash_split(upsilon1, upsilon2, l_min, l_max)
    if l_star is None:
        logger.warning(
            f"Day-ahead disagreement: upsilon=({upsilon1:.2f}, {upsilon2:.2f}), L in [{l_min:.2f}, {l_max:.2f}]"
        )
        return BargainDayOutcome(
            agreement=False,
            g1=(),
            g2=(),
            upsilon1=upsilon1,
            upsilon2=upsilon2,
            payoff1=0.0,
            payoff2=0.0,
        )

    # L is linear in a common fill fraction of every slot
    span = l_max - l_min
    fraction = 0.5 if span <= 0 else (l_star - l_min) / span
    g = np.asarray(group_plan.g, dtype=float)
    g1 = np.clip(fraction * g, 0.0, g)
    g2 = g - g1
    return BargainDayOutcome(
        agreement=True,
        g1=tuple(float(v) for v in g1),
        g2=tuple(float(v) for v in g2),
        upsilon1=upsilon1,
        upsilon2=upsilon2,
        payoff1=upsilon1 + l_star,
        payoff2=upsilon2 - l_star,
        l_star=l_star,
    )


def dayahead_bargain(
    group_plan: CommitmentPlan,
    plan1: CommitmentPlan,
    plan2: CommitmentPlan,
    model: TrafficModel,
    config: NetworkConfig,
    curve: PriceCurve,
    realizations: int,
    seed: int,
) -> BargainDayOutcome:
    upsilon1, upsilon2 = expected_upsilons(model, config, curve, plan1, plan2, group_plan, realizations, seed)
    outcome = settle_commitments(group_plan, upsilon1, upsilon2, model, config, curve)
    if outcome.agreement:
        logger.info(f"Day-ahead agreement: L*={outcome.l_star:.2f}, payoffs {outcome.payoff1:.2f}/{outcome.payoff2:.2f}")
    return outcome
