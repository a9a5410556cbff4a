# app/core/cache.py - In-memory report cache
from typing import Dict, Optional

from app.models.schemas import CostReport, ExperimentConfig


class CacheManager:
    """Experiment reports keyed by their config; runs are deterministic, so no expiry"""

    def __init__(self, max_entries: int = 32):
        self.memory_cache: Dict[str, CostReport] = {}
        self.max_entries = max_entries

    @staticmethod
    def key(cfg: ExperimentConfig) -> str:
        return cfg.model_dump_json(exclude={"out", "workers"})

    def get(self, cfg: ExperimentConfig) -> Optional[CostReport]:
        return self.memory_cache.get(self.key(cfg))

    def set(self, cfg: ExperimentConfig, report: CostReport) -> None:
        if len(self.memory_cache) >= self.max_entries:
            # drop the oldest entry
            self.memory_cache.pop(next(iter(self.memory_cache)))
        self.memory_cache[self.key(cfg)] = report

    def clear(self) -> None:
        self.memory_cache.clear()


cache_manager = CacheManager()
