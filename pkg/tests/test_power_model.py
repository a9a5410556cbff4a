import numpy as np
import pytest
from pydantic import ValidationError

from app.core.exceptions import DomainError
from app.models.schemas import BsParams, SlotPrices, TradeDecision
from app.services.power_model import bs_power, slot_cost


def test_active_power_is_linear_in_traffic(lte_bs):
    assert bs_power(10, lte_bs) == pytest.approx(1320)
    assert bs_power(150, lte_bs) == pytest.approx(3000)


def test_idle_bs_sleeps(lte_bs):
    assert bs_power(0, lte_bs) == 30
    assert bs_power(1e-13, lte_bs) == 30


@pytest.mark.parametrize("d", [-0.1, 150.01])
def test_traffic_outside_capacity_is_rejected(lte_bs, d):
    with pytest.raises(DomainError):
        bs_power(d, lte_bs)


def test_waking_up_costs_more_than_sleeping(lte_bs):
    loads = np.linspace(1e-6, lte_bs.d_max, 200)
    powers = [bs_power(float(d), lte_bs) for d in loads]
    assert min(powers) > bs_power(0, lte_bs)
    assert all(later >= earlier for earlier, later in zip(powers, powers[1:]))


def test_sleep_power_must_be_below_active_power():
    with pytest.raises(ValidationError):
        BsParams(a=12, b=1200, c=1200, d_max=150)
    with pytest.raises(ValidationError):
        BsParams(a=0, b=1200, c=30, d_max=150)


def test_slot_cost_sums_the_three_markets():
    pr = SlotPrices(alpha=40, alpha_buy=50, alpha_sell=20)
    assert slot_cost(TradeDecision(commitment=100, buy=0, sell=0, cost=0), pr) == 4000
    assert slot_cost(TradeDecision(commitment=0, buy=0, sell=0, cost=0), pr) == 0
    assert slot_cost(TradeDecision(commitment=100, buy=20, sell=0, cost=0), pr) == 5000
    assert slot_cost(TradeDecision(commitment=100, buy=0, sell=30, cost=0), pr) == 3400


def test_slot_cost_rejects_negative_trades(prices):
    bogus = TradeDecision.model_construct(commitment=10, buy=-1, sell=0, cost=0)
    with pytest.raises(DomainError):
        slot_cost(bogus, prices)


def test_trade_amounts_are_validated():
    with pytest.raises(ValidationError):
        TradeDecision(commitment=10, buy=-1, sell=0, cost=0)
