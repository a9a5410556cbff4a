import pytest

from app.core.cache import cache_manager
from app.models.schemas import BsParams, SlotPrices
from tests.factories import write_price_csv


@pytest.fixture
def lte_bs() -> BsParams:
    """LTE macro BS used throughout the evaluation"""
    return BsParams(a=12, b=1200, c=30, d_max=150)


@pytest.fixture
def prices() -> SlotPrices:
    return SlotPrices(alpha=40, alpha_buy=50, alpha_sell=20)


@pytest.fixture
def small_price_file(tmp_path) -> str:
    """Four slots, day-ahead price at the midpoint of the predicted real-time prices"""
    return write_price_csv(tmp_path / "prices.csv", [(40, 50, 30), (30, 40, 20), (50, 60, 40), (45, 55, 35)])


@pytest.fixture(autouse=True)
def empty_cache():
    cache_manager.clear()
    yield
    cache_manager.clear()
