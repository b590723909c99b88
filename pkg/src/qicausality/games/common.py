from __future__ import annotations

import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..qcore import make_rng

CHUNK = 8192


class UnsupportedParameter(ValueError):
    """A construction does not exist for the requested parameters."""


@dataclass(frozen=True)
class GameConfig:
    n: int
    m: int
    trials: int = 100_000
    seed: int = 0
    version: int = 1
    mode: str = "exact"

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if not 0 <= self.m <= self.n:
            raise ValueError("m must lie in [0, n]")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.version not in (1, 2):
            raise ValueError("version must be 1 or 2")
        if self.mode not in ("exact", "monte_carlo"):
            raise ValueError("mode must be 'exact' or 'monte_carlo'")
        if self.m >= self.n:
            warnings.warn(f"m={self.m} >= n={self.n}: reference run outside the game's m < n regime", stacklevel=3)


@dataclass(frozen=True)
class GameResult:
    p_hat: float
    std_err: float
    trials: int
    mode: str

    @classmethod
    def exact(cls, p: float) -> GameResult:
        return cls(float(min(max(p, 0.0), 1.0)), 0.0, 0, "exact")

    @classmethod
    def from_counts(cls, wins: int, trials: int) -> GameResult:
        p = wins / trials
        return cls(p, float(np.sqrt(p * (1 - p) / trials)), trials, "monte_carlo")


def run_monte_carlo(
    chunk_fn: Callable[[np.random.Generator, int], int],
    trials: int,
    seed: int,
    workers: int = 1,
) -> GameResult:
    """Count wins over ``trials``, split into fixed chunks with streams (seed, chunk).

    Chunk boundaries do not depend on ``workers`` and counts are summed in
    chunk order, so results are identical for any worker count.
    """
    sizes = [min(CHUNK, trials - start) for start in range(0, trials, CHUNK)]

    def job(i: int) -> int:
        return int(chunk_fn(make_rng(seed, i), sizes[i]))

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            counts = list(pool.map(job, range(len(sizes))))
    else:
        counts = [job(i) for i in range(len(sizes))]
    return GameResult.from_counts(sum(counts), trials)


def pair_values(x: int, n: int) -> list[int]:
    """Split a packed IC-2 input into its n two-bit values (x_j at bits 2j, 2j+1)."""
    return [(x >> (2 * j)) & 3 for j in range(n)]
