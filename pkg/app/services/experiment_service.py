# app/services/experiment_service.py
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Dict, List, Optional

import numpy as np

from app.core.config import settings
from app.core.exceptions import ConfigError, DomainError
from app.models.schemas import (
    BargainDayOutcome,
    BsParams,
    CommitmentPlan,
    CostReport,
    ExperimentConfig,
    McConfig,
    NetworkConfig,
    PriceCurve,
    SlotCostRow,
    SummaryRow,
    TrafficModel,
)
from app.services.bargaining_service import dayahead_bargain, realtime_bargain
from app.services.commitment_service import plan_group, plan_noncoop
from app.services.load_sharing import no_share_demand, shared_demand
from app.services.realtime_trading import group_trade, individual_trade
from app.services.scenario_service import load_price_curve, load_traffic_profile, sample_scenario, synth_traffic_model
from app.utils.helpers import to_currency

logger = logging.getLogger(__name__)


def build_network(cfg: ExperimentConfig) -> NetworkConfig:
    params = BsParams(a=settings.BS_A, b=settings.BS_B, c=settings.BS_C, d_max=settings.BS_D_MAX)
    return NetworkConfig.uniform(cfg.k_pairs, cfg.n_slots, params)


def build_traffic_model(cfg: ExperimentConfig, config: NetworkConfig) -> TrafficModel:
    d_max = float(config.arrays["d_max"].min())
    if cfg.traffic.startswith("file:"):
        theta = load_traffic_profile(cfg.traffic[len("file:"):])
        if len(theta) != cfg.n_slots:
            raise ConfigError(f"profile has {len(theta)} slots, expected {cfg.n_slots}", key="traffic")
        return synth_traffic_model(
            "symmetric", cfg.k_pairs, d_max, cfg.seed, cfg.n_slots, theta=theta, err_frac=cfg.traffic_err_frac
        )
    return synth_traffic_model(cfg.traffic, cfg.k_pairs, d_max, cfg.seed, cfg.n_slots, err_frac=cfg.traffic_err_frac)


def _reduction(baseline: float, value: float) -> float:
    return 0.0 if baseline == 0 else 100.0 * (baseline - value) / baseline


class ExperimentService:
    """Runs every requested scheme over common scenarios for one experiment config"""

    def __init__(self, cfg: ExperimentConfig):
        self.cfg = cfg
        self.config = build_network(cfg)
        self.curve: Optional[PriceCurve] = None
        self.model: Optional[TrafficModel] = None
        self.plan1: Optional[CommitmentPlan] = None
        self.plan2: Optional[CommitmentPlan] = None
        self.group_plan: Optional[CommitmentPlan] = None
        self.day: Optional[BargainDayOutcome] = None

    def prepare(self) -> "ExperimentService":
        """Load inputs and solve every day-ahead problem the schemes need"""
        cfg = self.cfg
        self.curve = load_price_curve(cfg.prices or settings.PRICE_FILE, cfg.price_err_frac, cfg.price_err_frac)
        if self.curve.n_slots != cfg.n_slots:
            raise ConfigError(f"price curve has {self.curve.n_slots} slots, expected {cfg.n_slots}", key="prices")
        self.model = build_traffic_model(cfg, self.config)
        mc = McConfig(m_samples=cfg.m_samples, tol=settings.BISECTION_TOL, max_iter=settings.BISECTION_MAX_ITER)

        self.plan1 = plan_noncoop(1, self.model, self.config, self.curve, mc, cfg.seed)
        self.plan2 = plan_noncoop(2, self.model, self.config, self.curve, mc, cfg.seed)
        if "fullcoop" in cfg.schemes or "bargain" in cfg.schemes:
            self.group_plan = plan_group(self.model, self.config, self.curve, mc, cfg.seed)
        if "bargain" in cfg.schemes:
            self.day = dayahead_bargain(
                self.group_plan, self.plan1, self.plan2, self.model, self.config, self.curve, cfg.realizations, cfg.seed
            )
        return self

    def evaluate_realization(self, r: int) -> Dict[str, np.ndarray]:
        """Costs of every scheme on realization r; all schemes see the same scenario"""
        if self.plan1 is None:
            raise DomainError("prepare() must run before realizations are evaluated")
        config = self.config
        scenario = sample_scenario(self.curve, self.model, config, self.cfg.seed, r)
        n_slots = scenario.n_slots

        out = {
            "noncoop": np.zeros((n_slots, 2)),
            "fullcoop": np.zeros(n_slots),
            "matched": np.zeros(n_slots),
            "bargain": np.zeros((n_slots, 2)),
            "payment": np.zeros(n_slots),
            "sleep": np.zeros(n_slots),
            "realtime_payoff_min": np.array(np.inf),
            "complementarity": np.array(0),
            "price_clamps": np.array(scenario.price_clamps),
            "traffic_clamps": np.array(scenario.traffic_clamps),
        }
        trades = []
        for n in range(n_slots):
            prices = scenario.prices[n]
            traffic = scenario.traffic[:, :, n]
            own = no_share_demand(traffic, config)
            for i, plan in enumerate((self.plan1, self.plan2)):
                trade = individual_trade(plan.g[n], float(own[i]), prices)
                out["noncoop"][n, i] = trade.cost
                trades.append(trade)

            if self.group_plan is None:
                continue
            zeta_shared, shares = shared_demand(traffic, config)
            trade = group_trade(self.group_plan.g[n], zeta_shared, prices)
            trades.append(trade)
            out["fullcoop"][n] = trade.cost
            out["sleep"][n] = np.mean([[s.sleep1, s.sleep2] for s in shares])
            matched = group_trade(self.plan1.g[n] + self.plan2.g[n], zeta_shared, prices)
            out["matched"][n] = matched.cost

            if self.day is None:
                continue
            if self.day.agreement:
                slot = realtime_bargain(self.day.g1[n], self.day.g2[n], traffic, prices, config)
                trades.append(slot.trade)
                out["bargain"][n] = (slot.cost1, slot.cost2)
                out["payment"][n] = slot.payment_net
                out["realtime_payoff_min"] = np.minimum(out["realtime_payoff_min"], min(slot.payoff1, slot.payoff2))
            else:
                out["bargain"][n] = out["noncoop"][n]

        out["complementarity"] = np.array(sum(1 for t in trades if t.buy * t.sell != 0))
        return out

    def run_realizations(self) -> List[Dict[str, np.ndarray]]:
        realizations = range(self.cfg.realizations)
        if self.cfg.workers <= 1:
            return [self.evaluate_realization(r) for r in realizations]
        with ProcessPoolExecutor(max_workers=self.cfg.workers) as pool:
            # map keeps realization order, so the reduction does not depend on scheduling
            return list(pool.map(self.evaluate_realization, realizations))

    def build_report(self, results: List[Dict[str, np.ndarray]]) -> CostReport:
        cfg = self.cfg
        n_slots = cfg.n_slots

        def mean(key: str) -> np.ndarray:
            return to_currency(np.mean([res[key] for res in results], axis=0), n_slots)

        per_slot: Dict[str, Dict[str, np.ndarray]] = {}
        noncoop = mean("noncoop")
        per_slot["noncoop"] = {"1": noncoop[:, 0], "2": noncoop[:, 1], "total": noncoop.sum(axis=1)}
        if "fullcoop" in cfg.schemes:
            per_slot["fullcoop"] = {"total": mean("fullcoop")}
        if "bargain" in cfg.schemes:
            bargain = mean("bargain")
            per_slot["bargain"] = {"1": bargain[:, 0], "2": bargain[:, 1], "total": bargain.sum(axis=1)}

        rows = [
            SlotCostRow(slot=n, scheme=scheme, mno=mno, avg_cost=float(values[n]))
            for scheme, by_mno in per_slot.items()
            for mno, values in by_mno.items()
            for n in range(n_slots)
        ]
        baseline = {mno: float(values.sum()) for mno, values in per_slot["noncoop"].items()}
        summary = [
            SummaryRow(
                scheme=scheme,
                mno=mno,
                total=float(values.sum()),
                reduction_pct=_reduction(baseline[mno], float(values.sum())),
            )
            for scheme, by_mno in per_slot.items()
            for mno, values in by_mno.items()
        ]

        dominance_violations = sum(
            int(res["matched"].sum() > res["noncoop"].sum() + 1e-9 * max(1.0, abs(res["noncoop"].sum())))
            for res in results
        ) if self.group_plan is not None else 0
        meta = {
            "k_pairs": str(cfg.k_pairs),
            "n_slots": str(cfg.n_slots),
            "m_samples": str(cfg.m_samples),
            "realizations": str(cfg.realizations),
            "seed": str(cfg.seed),
            "traffic": cfg.traffic,
            "traffic_err_frac": str(cfg.traffic_err_frac),
            "price_err_frac": str(cfg.price_err_frac),
            "schemes": "|".join(cfg.schemes),
            "price_clamps": str(sum(int(res["price_clamps"]) for res in results)),
            "traffic_clamps": str(sum(int(res["traffic_clamps"]) for res in results)),
            "complementarity_violations": str(sum(int(res["complementarity"]) for res in results)),
            "dominance_violations": str(dominance_violations),
        }
        if self.day is not None:
            day = self.day
            meta.update({
                "agreement": str(day.agreement).lower(),
                "upsilon1": f"{to_currency(day.upsilon1, n_slots):.6f}",
                "upsilon2": f"{to_currency(day.upsilon2, n_slots):.6f}",
                "dayahead_payoff1": f"{to_currency(day.payoff1, n_slots):.6f}",
                "dayahead_payoff2": f"{to_currency(day.payoff2, n_slots):.6f}",
                "min_realtime_payoff": f"{to_currency(min(float(res['realtime_payoff_min']) for res in results), n_slots):.6f}"
                if day.agreement else "nan",
            })

        return CostReport(
            per_slot=rows,
            summary=summary,
            sleep_fraction=[float(v) for v in np.mean([res["sleep"] for res in results], axis=0)]
            if self.group_plan is not None else [],
            payments=[float(v) for v in mean("payment")] if self.day is not None else [],
            meta=meta,
        )

    def run(self) -> CostReport:
        started = time.perf_counter()
        cfg = self.cfg
        logger.info(
            f"Starting experiment: K={cfg.k_pairs}, N={cfg.n_slots}, M={cfg.m_samples}, "
            f"R={cfg.realizations}, traffic={cfg.traffic}, schemes={','.join(cfg.schemes) or 'noncoop'}"
        )
        self.prepare()
        report = self.build_report(self.run_realizations())
        logger.info(f"Experiment finished in {time.perf_counter() - started:.1f}s")
        return report


def run_experiment(cfg: ExperimentConfig) -> CostReport:
    return ExperimentService(cfg).run()
