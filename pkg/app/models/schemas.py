# app/models/schemas.py
from functools import cached_property
from typing import Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

SCHEMES = ("noncoop", "fullcoop", "bargain")


# Core model
class BsParams(BaseModel):
    """Linear power model of one base station (W, W/Mbps, Mbps)"""
    model_config = ConfigDict(frozen=True)

    a: float = Field(gt=0)
    b: float = Field(gt=0)
    c: float = Field(ge=0)
    d_max: float = Field(gt=0)

    @model_validator(mode="after")
    def _sleep_below_active(self) -> "BsParams":
        if self.c >= self.b:
            raise ValueError("sleep power c must be below active power b")
        return self


class SlotPrices(BaseModel):
    model_config = ConfigDict(frozen=True)

    alpha: float = Field(ge=0)
    alpha_buy: float = Field(ge=0)
    alpha_sell: float = Field(ge=0)

    @model_validator(mode="after")
    def _ordered(self) -> "SlotPrices":
        if not self.alpha_sell <= self.alpha <= self.alpha_buy:
            raise ValueError("prices must satisfy alpha_sell <= alpha <= alpha_buy")
        return self


class TradeDecision(BaseModel):
    model_config = ConfigDict(frozen=True)

    commitment: float = Field(ge=0)
    buy: float = Field(ge=0)
    sell: float = Field(ge=0)
    cost: float


class NetworkConfig(BaseModel):
    """K co-located BS pairs; params[k] = (BS k of MNO 1, BS k of MNO 2)"""
    model_config = ConfigDict(frozen=True)

    k_pairs: int = Field(ge=1)
    n_slots: int = Field(ge=1)
    params: Tuple[Tuple[BsParams, BsParams], ...]

    @model_validator(mode="after")
    def _one_entry_per_pair(self) -> "NetworkConfig":
        if len(self.params) != self.k_pairs:
            raise ValueError(f"expected {self.k_pairs} BS pairs, got {len(self.params)}")
        return self

    @classmethod
    def uniform(cls, k_pairs: int, n_slots: int, params: BsParams) -> "NetworkConfig":
        return cls(k_pairs=k_pairs, n_slots=n_slots, params=((params, params),) * k_pairs)

    @cached_property
    def arrays(self) -> Dict[str, np.ndarray]:
        """Power model coefficients as (K, 2) arrays keyed a, b, c, d_max"""
        return {
            name: np.array([[getattr(p, name) for p in pair] for pair in self.params], dtype=float)
            for name in ("a", "b", "c", "d_max")
        }


# Scenario
class PriceCurve(BaseModel):
    """Day-ahead prices and predicted real-time prices per slot"""
    model_config = ConfigDict(frozen=True)

    alpha: Tuple[float, ...]
    alpha_buy_pred: Tuple[float, ...]
    alpha_sell_pred: Tuple[float, ...]
    buy_err_frac: float = Field(default=0.1, ge=0, lt=1)
    sell_err_frac: float = Field(default=0.1, ge=0, lt=1)

    @model_validator(mode="after")
    def _strictly_ordered(self) -> "PriceCurve":
        if not len(self.alpha) == len(self.alpha_buy_pred) == len(self.alpha_sell_pred):
            raise ValueError("price columns must have equal length")
        if not self.alpha:
            raise ValueError("price curve has no slots")
        for n, (a, ab, as_) in enumerate(zip(self.alpha, self.alpha_buy_pred, self.alpha_sell_pred)):
            if min(a, ab, as_) < 0:
                raise ValueError(f"negative price at slot {n}")
            if not as_ < a < ab:
                raise ValueError(f"price ordering violated at slot {n}")
        return self

    @property
    def n_slots(self) -> int:
        return len(self.alpha)

    def predicted(self, n: int) -> SlotPrices:
        """Slot prices as known day-ahead"""
        return SlotPrices(
            alpha=self.alpha[n],
            alpha_buy=self.alpha_buy_pred[n],
            alpha_sell=self.alpha_sell_pred[n],
        )


class TrafficModel(BaseModel):
    """Predicted traffic D̄[k, i, n] = chi[k][i] * theta[n] with uniform relative error"""
    model_config = ConfigDict(frozen=True)

    theta: Tuple[float, ...]
    chi: Tuple[Tuple[float, float], ...]
    err_frac: float = Field(default=0.4, ge=0)

    @field_validator("theta")
    @classmethod
    def _theta_in_unit_interval(cls, v: Tuple[float, ...]) -> Tuple[float, ...]:
        if not v:
            raise ValueError("traffic profile has no slots")
        for n, t in enumerate(v):
            if not 0 < t <= 1:
                raise ValueError(f"theta must lie in (0, 1], got {t} at slot {n}")
        return v

    @field_validator("chi")
    @classmethod
    def _chi_nonnegative(cls, v: Tuple[Tuple[float, float], ...]) -> Tuple[Tuple[float, float], ...]:
        if not v:
            raise ValueError("traffic model has no BS pairs")
        if any(x < 0 for pair in v for x in pair):
            raise ValueError("traffic amplitudes must be nonnegative")
        return v

    @property
    def k_pairs(self) -> int:
        return len(self.chi)

    @property
    def n_slots(self) -> int:
        return len(self.theta)

    @cached_property
    def mean_traffic(self) -> np.ndarray:
        """D̄ as a (K, 2, N) array"""
        return np.asarray(self.chi, dtype=float)[:, :, None] * np.asarray(self.theta, dtype=float)[None, None, :]


class Scenario(BaseModel):
    """One realized day: prices per slot and traffic[k, i, n] in Mbps"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    prices: Tuple[SlotPrices, ...]
    traffic: np.ndarray
    price_clamps: int = 0
    traffic_clamps: int = 0

    @property
    def n_slots(self) -> int:
        return len(self.prices)


# Load sharing
class PairDecision(BaseModel):
    model_config = ConfigDict(frozen=True)

    x1: float = Field(ge=0)
    x2: float = Field(ge=0)
    served1: float = Field(ge=0)
    served2: float = Field(ge=0)
    energy: float
    sleep1: bool
    sleep2: bool


# Real-time trading
class DemandSample(BaseModel):
    model_config = ConfigDict(frozen=True)

    zeta: float = Field(ge=0)


# Day-ahead commitment
class McConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    m_samples: int = Field(default=1000, ge=1)
    tol: float = Field(default=0.1, gt=0)
    max_iter: int = Field(default=200, ge=1)


class CommitmentPlan(BaseModel):
    model_config = ConfigDict(frozen=True)

    owner: str = "group"
    g: Tuple[float, ...]

    @field_validator("g")
    @classmethod
    def _nonnegative(cls, v: Tuple[float, ...]) -> Tuple[float, ...]:
        if any(x < 0 for x in v):
            raise ValueError("commitments must be nonnegative")
        return v

    @property
    def n_slots(self) -> int:
        return len(self.g)


# Bargaining
class BargainSlotOutcome(BaseModel):
    model_config = ConfigDict(frozen=True)

    trade: TradeDecision
    shares: Tuple[PairDecision, ...]
    cost1: float
    cost2: float
    standalone1: float
    standalone2: float
    payment_net: float

    @property
    def payoff1(self) -> float:
        return self.standalone1 - self.cost1

    @property
    def payoff2(self) -> float:
        return self.standalone2 - self.cost2


class BargainDayOutcome(BaseModel):
    model_config = ConfigDict(frozen=True)

    agreement: bool
    g1: Tuple[float, ...]
    g2: Tuple[float, ...]
    upsilon1: float
    upsilon2: float
    payoff1: float
    payoff2: float
    l_star: Optional[float] = None


# Experiment
class ExperimentConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    k_pairs: int = Field(default=50, ge=1)
    n_slots: int = Field(default=48, ge=1)
    m_samples: int = Field(default=500, ge=1)
    realizations: int = Field(default=50, ge=1)
    seed: int = Field(default=2016, ge=0)
    traffic: str = "symmetric"
    prices: str = ""
    out: str = "results"
    schemes: Tuple[str, ...] = SCHEMES
    workers: int = Field(default=1, ge=1)
    traffic_err_frac: float = Field(default=0.4, ge=0)
    price_err_frac: float = Field(default=0.1, ge=0, lt=1)

    @field_validator("traffic")
    @classmethod
    def _traffic_kind(cls, v: str) -> str:
        if v in ("symmetric", "asymmetric") or (v.startswith("file:") and len(v) > 5):
            return v
        raise ValueError("traffic must be symmetric, asymmetric or file:<path>")

    @field_validator("schemes")
    @classmethod
    def _known_schemes(cls, v: Tuple[str, ...]) -> Tuple[str, ...]:
        unknown = [s for s in v if s not in SCHEMES]
        if unknown:
            raise ValueError(f"unknown schemes: {', '.join(unknown)}")
        # canonical order keeps reports byte-stable
        return tuple(s for s in SCHEMES if s in v)


class SlotCostRow(BaseModel):
    slot: int
    scheme: str
    mno: str
    avg_cost: float


class SummaryRow(BaseModel):
    scheme: str
    mno: str
    total: float
    reduction_pct: float


class CostReport(BaseModel):
    per_slot: List[SlotCostRow]
    summary: List[SummaryRow]
    sleep_fraction: List[float] = []
    payments: List[float] = []
    meta: Dict[str, str] = {}

    def total(self, scheme: str, mno: str = "total") -> float:
        for row in self.summary:
            if row.scheme == scheme and row.mno == mno:
                return row.total
        raise KeyError(f"{scheme}/{mno} not in report")

    def reduction(self, scheme: str, mno: str = "total") -> float:
        for row in self.summary:
            if row.scheme == scheme and row.mno == mno:
                return row.reduction_pct
        raise KeyError(f"{scheme}/{mno} not in report")


# HTTP request bodies
class PairShareRequest(BaseModel):
    d1: float
    d2: float
    p1: BsParams
    p2: BsParams


class TradeRequest(BaseModel):
    commitment: float
    demand: DemandSample
    prices: SlotPrices


class ExperimentRequest(BaseModel):
    """Overrides for an experiment run; omitted fields use the service defaults"""
    k_pairs: Optional[int] = None
    n_slots: Optional[int] = None
    m_samples: Optional[int] = None
    realizations: Optional[int] = None
    seed: Optional[int] = None
    traffic: Optional[str] = None
    schemes: Optional[Tuple[str, ...]] = None
    traffic_err_frac: Optional[float] = None
    price_err_frac: Optional[float] = None
    out: Optional[str] = None
    write_reports: bool = False
