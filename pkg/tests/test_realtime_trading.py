import numpy as np
import pytest

from app.core.exceptions import DomainError
from app.models.schemas import SlotPrices
from app.services.load_sharing import no_share_demand, shared_demand
from app.services.power_model import slot_cost
from app.services.realtime_trading import (
    group_day_costs,
    group_trade,
    individual_trade,
    noncoop_day_costs,
    realtime_cost,
)
from tests.factories import network


class TestIndividualTrade:
    def test_surplus_is_sold(self):
        trade = individual_trade(100, 80, SlotPrices(alpha=50, alpha_buy=60, alpha_sell=20))
        assert trade.sell == pytest.approx(20)
        assert trade.buy == 0
        assert trade.cost == pytest.approx(4600)

    def test_deficit_is_bought(self, prices):
        trade = individual_trade(60, 80, prices)
        assert trade.buy == pytest.approx(20)
        assert trade.sell == 0
        assert trade.cost == pytest.approx(40 * 60 + 50 * 20)

    def test_exact_commitment_trades_nothing(self, prices):
        trade = individual_trade(80, 80, prices)
        assert trade.buy == trade.sell == 0
        assert trade.cost == pytest.approx(3200)

    @pytest.mark.parametrize("g,zeta", [(-1, 10), (10, -1)])
    def test_negative_inputs(self, prices, g, zeta):
        with pytest.raises(DomainError):
            individual_trade(g, zeta, prices)

    def test_cost_matches_slot_cost_and_is_complementary(self):
        rng = np.random.default_rng(1)
        for _ in range(500):
            alpha = rng.uniform(10, 50)
            pr = SlotPrices(alpha=alpha, alpha_buy=alpha * rng.uniform(1, 2), alpha_sell=alpha * rng.uniform(0, 1))
            g, zeta = rng.uniform(0, 5000, size=2)
            trade = individual_trade(g, zeta, pr)
            assert trade.buy * trade.sell == 0
            assert g + trade.buy - trade.sell == pytest.approx(zeta)
            assert trade.cost == pytest.approx(slot_cost(trade, pr))

    def test_cost_is_convex_in_commitment(self, prices):
        rng = np.random.default_rng(2)
        for _ in range(200):
            g1, g2, zeta = rng.uniform(0, 1000, size=3)
            mid = individual_trade(0.5 * (g1 + g2), zeta, prices).cost
            ends = 0.5 * (individual_trade(g1, zeta, prices).cost + individual_trade(g2, zeta, prices).cost)
            assert mid <= ends + 1e-9


def test_vectorized_cost_matches_scalar_trade(prices):
    g = np.array([0.0, 50.0, 100.0])
    zeta = np.array([80.0, 80.0, 80.0])
    costs = realtime_cost(g, zeta, prices.alpha, prices.alpha_buy, prices.alpha_sell)
    expected = [individual_trade(a, b, prices).cost for a, b in zip(g, zeta)]
    np.testing.assert_allclose(costs, expected)


def test_group_with_sharing_never_costs_more(lte_bs):
    rng = np.random.default_rng(3)
    config = network(5, 1, lte_bs)
    for _ in range(1000):
        alpha = rng.uniform(20, 60)
        pr = SlotPrices(alpha=alpha, alpha_buy=alpha * rng.uniform(1, 1.5), alpha_sell=alpha * rng.uniform(0.5, 1))
        traffic = rng.uniform(0, 150, size=(5, 2))
        own = no_share_demand(traffic, config)
        g1, g2 = rng.uniform(0, 15000, size=2)
        standalone = individual_trade(g1, own[0], pr).cost + individual_trade(g2, own[1], pr).cost
        zeta_shared, _ = shared_demand(traffic, config)
        assert group_trade(g1 + g2, zeta_shared, pr).cost <= standalone + 1e-9 * max(1.0, standalone)


def test_day_cost_helpers_match_slot_by_slot(lte_bs, prices):
    rng = np.random.default_rng(4)
    config = network(3, 4, lte_bs)
    traffic = rng.uniform(0, 150, size=(3, 2, 4))
    day = [prices] * 4
    g1, g2, g = rng.uniform(0, 5000, size=(3, 4))

    noncoop = noncoop_day_costs(traffic, day, config, g1, g2)
    group = group_day_costs(traffic, day, config, g)
    assert noncoop.shape == (4, 2)
    assert group.shape == (4,)
    for n in range(4):
        own = no_share_demand(traffic[:, :, n], config)
        assert noncoop[n, 0] == pytest.approx(individual_trade(g1[n], own[0], prices).cost)
        assert noncoop[n, 1] == pytest.approx(individual_trade(g2[n], own[1], prices).cost)
        zeta, _ = shared_demand(traffic[:, :, n], config)
        assert group[n] == pytest.approx(group_trade(g[n], zeta, prices).cost)
