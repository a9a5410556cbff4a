# app/utils/helpers.py
from enum import IntEnum

import numpy as np


class Stream(IntEnum):
    """Top-level RNG streams; each draws from its own child of the root seed"""
    SCENARIO = 0
    MC_SAMPLES = 1
    SYNTH_TRAFFIC = 2
    UPSILON_ESTIMATE = 3


def stream_rng(seed: int, stream: Stream, *keys: int) -> np.random.Generator:
    """Generator for the node (stream, *keys) of the seed tree rooted at `seed`.

    Values depend only on the path, never on how many other nodes were drawn
    before, so realizations and slots can be sampled in any order or process.
    """
    sequence = np.random.SeedSequence(entropy=seed, spawn_key=(int(stream), *(int(k) for k in keys)))
    return np.random.default_rng(sequence)


def uniform_relative(rng: np.random.Generator, center: np.ndarray, frac: float) -> np.ndarray:
    """center * (1 + u), u ~ Uniform[-frac, frac], drawn elementwise"""
    center = np.asarray(center, dtype=float)
    u = rng.uniform(-1.0, 1.0, size=center.shape)
    return center + frac * u * center


def slot_hours(n_slots: int) -> float:
    return 24.0 / n_slots


def to_currency(value: float, n_slots: int) -> float:
    """price-per-kWh x watt-slot -> currency"""
    return value * slot_hours(n_slots) / 1000.0
