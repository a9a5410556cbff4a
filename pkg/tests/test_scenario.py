import numpy as np
import pytest

from app.core.config import DATA_DIR
from app.core.exceptions import DomainError, IngestionError
from app.models.schemas import BsParams
from app.services.commitment_service import sample_traffic_draws
from app.services.scenario_service import (
    diurnal_profile,
    load_price_curve,
    load_traffic_profile,
    sample_scenario,
    synth_traffic_model,
)
from app.utils.helpers import Stream, stream_rng
from tests.factories import flat_curve, network, traffic_model, write_price_csv


class TestPriceCurveIngestion:
    def test_reads_single_slot(self, tmp_path):
        path = write_price_csv(tmp_path / "p.csv", [(40, 50, 20)])
        curve = load_price_curve(path)
        assert curve.n_slots == 1
        assert curve.predicted(0).alpha == 40
        assert curve.predicted(0).alpha_buy == 50
        assert curve.predicted(0).alpha_sell == 20

    def test_rejects_ordering_violation(self, tmp_path):
        path = write_price_csv(tmp_path / "p.csv", [(40, 35, 20)])
        with pytest.raises(IngestionError, match="price ordering violated at slot 0"):
            load_price_curve(path)

    def test_rejects_negative_price(self, tmp_path):
        path = write_price_csv(tmp_path / "p.csv", [(40, 50, 20), (10, 20, -1)])
        with pytest.raises(IngestionError, match="slot 1"):
            load_price_curve(path)

    def test_rejects_wrong_header(self, tmp_path):
        path = tmp_path / "p.csv"
        path.write_text("slot,price\n0,40\n")
        with pytest.raises(IngestionError, match="expected header"):
            load_price_curve(str(path))

    def test_rejects_non_numeric_value(self, tmp_path):
        path = tmp_path / "p.csv"
        path.write_text("slot,alpha,alpha_buy_pred,alpha_sell_pred\n0,forty,50,20\n")
        with pytest.raises(IngestionError, match="non-numeric alpha"):
            load_price_curve(str(path))

    def test_rejects_rows_longer_than_header(self, tmp_path):
        path = tmp_path / "p.csv"
        path.write_text("slot,alpha,alpha_buy_pred,alpha_sell_pred\n0,0,40,50,20\n1,1,40,50,20\n")
        with pytest.raises(IngestionError, match="malformed CSV"):
            load_price_curve(str(path))

    def test_rejects_gaps_in_slots(self, tmp_path):
        path = tmp_path / "p.csv"
        path.write_text("slot,alpha,alpha_buy_pred,alpha_sell_pred\n0,40,50,20\n2,40,50,20\n")
        with pytest.raises(IngestionError, match="slot column"):
            load_price_curve(str(path))

    def test_missing_file(self, tmp_path):
        with pytest.raises(IngestionError, match="file not found"):
            load_price_curve(str(tmp_path / "nope.csv"))

    def test_bundled_curve(self):
        curve = load_price_curve(str(DATA_DIR / "prices_48.csv"))
        assert curve.n_slots == 48
        assert all(s < a < b for a, b, s in zip(curve.alpha, curve.alpha_buy_pred, curve.alpha_sell_pred))


class TestTrafficProfile:
    def test_diurnal_shape(self):
        theta = diurnal_profile(48)
        assert theta.shape == (48,)
        assert np.all((theta > 0) & (theta <= 1))
        assert int(theta.argmin()) == 10
        assert int(theta.argmax()) == 34

    def test_bundled_profile_matches_builtin(self):
        theta = load_traffic_profile(str(DATA_DIR / "diurnal_theta_48.csv"))
        np.testing.assert_allclose(theta, diurnal_profile(48), atol=1e-6)

    def test_profile_outside_unit_interval(self, tmp_path):
        path = tmp_path / "t.csv"
        path.write_text("slot,theta\n0,0.5\n1,1.2\n")
        with pytest.raises(IngestionError, match="theta outside"):
            load_traffic_profile(str(path))


class TestSynthTraffic:
    def test_symmetric_amplitudes(self):
        model = synth_traffic_model("symmetric", 200, 150.0, seed=1)
        chi = np.asarray(model.chi)
        assert chi.shape == (200, 2)
        assert chi.min() >= 15 and chi.max() <= 135

    def test_asymmetric_second_mno_is_lighter(self):
        chi = np.asarray(synth_traffic_model("asymmetric", 200, 150.0, seed=1).chi)
        assert chi[:, 1].min() >= 7.5 and chi[:, 1].max() <= 67.5
        assert chi[:, 0].mean() > chi[:, 1].mean()

    def test_deterministic(self):
        first = synth_traffic_model("symmetric", 5, 150.0, seed=9)
        second = synth_traffic_model("symmetric", 5, 150.0, seed=9)
        assert first.chi == second.chi
        assert first.theta == second.theta

    def test_unknown_kind(self):
        with pytest.raises(DomainError):
            synth_traffic_model("bursty", 5, 150.0, seed=1)


class TestSampleScenario:
    def test_traffic_stays_within_relative_error(self, lte_bs):
        model = traffic_model([(100, 100)], err_frac=0.4)
        config = network(1, 1, lte_bs)
        curve = flat_curve(1, err=0.1)
        for r in range(200):
            scenario = sample_scenario(curve, model, config, seed=3, realization=r)
            assert np.all((scenario.traffic >= 60) & (scenario.traffic <= 140))
            assert scenario.traffic_clamps == 0

    def test_zero_errors_reproduce_predictions(self, lte_bs):
        model = traffic_model([(80, 20), (10, 50)], n_slots=2, theta=(1.0, 0.5))
        config = network(2, 2, lte_bs)
        curve = flat_curve(2)
        scenario = sample_scenario(curve, model, config, seed=5)
        np.testing.assert_array_equal(scenario.traffic, model.mean_traffic)
        for prices in scenario.prices:
            assert (prices.alpha, prices.alpha_buy, prices.alpha_sell) == (40, 50, 30)

    def test_clamps_are_counted(self, lte_bs):
        model = traffic_model([(140, 140)], err_frac=0.4)
        config = network(1, 1, lte_bs)
        curve = flat_curve(1, err=0.1)
        expected = 0
        total = 0
        for r in range(300):
            rng = stream_rng(11, Stream.SCENARIO, r, 0)
            rng.uniform(-1.0, 1.0, size=())
            rng.uniform(-1.0, 1.0, size=())
            raw = 140 + 0.4 * rng.uniform(-1.0, 1.0, size=(1, 2)) * 140
            expected += int(np.count_nonzero(raw > 150))
            scenario = sample_scenario(curve, model, config, seed=11, realization=r)
            total += scenario.traffic_clamps
            assert scenario.traffic.max() <= 150
        assert total == expected
        assert total > 0

    def test_price_ordering_holds(self, lte_bs):
        model = traffic_model([(50, 50)], n_slots=3, err_frac=0.4)
        config = network(1, 3, lte_bs)
        curve = flat_curve(3, alpha=40, buy=42, sell=38, err=0.5)
        clamps = 0
        for r in range(50):
            scenario = sample_scenario(curve, model, config, seed=2, realization=r)
            clamps += scenario.price_clamps
            for p in scenario.prices:
                assert p.alpha_sell <= p.alpha <= p.alpha_buy
        assert clamps > 0

    def test_same_seed_same_scenario(self, lte_bs):
        model = traffic_model([(50, 70), (30, 20)], n_slots=2, err_frac=0.4)
        config = network(2, 2, lte_bs)
        curve = flat_curve(2, err=0.1)
        first = sample_scenario(curve, model, config, seed=42, realization=3)
        second = sample_scenario(curve, model, config, seed=42, realization=3)
        np.testing.assert_array_equal(first.traffic, second.traffic)
        assert first.prices == second.prices
        other = sample_scenario(curve, model, config, seed=42, realization=4)
        assert not np.array_equal(first.traffic, other.traffic)

    def test_dimension_mismatch(self, lte_bs):
        model = traffic_model([(50, 50)], n_slots=2)
        with pytest.raises(DomainError):
            sample_scenario(flat_curve(3), model, network(1, 2, lte_bs), seed=1)

    def test_prediction_above_capacity(self):
        small = BsParams(a=12, b=1200, c=30, d_max=40)
        with pytest.raises(DomainError, match="exceeds d_max"):
            sample_scenario(flat_curve(1), traffic_model([(50, 10)]), network(1, 1, small), seed=1)


def test_unclamped_draws_are_unbiased(lte_bs):
    model = traffic_model([(50, 50)], err_frac=0.4)
    draws = sample_traffic_draws(0, model, network(1, 1, lte_bs), 100_000, seed=7)
    assert draws.shape == (100_000, 1, 2)
    assert draws.mean() == pytest.approx(50, rel=0.01)
