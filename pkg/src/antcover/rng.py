"""Seeded random kernels for the optimizer and the benchmark harness.

Every stochastic component in this package draws from a :class:`RandomStream`,
a thin wrapper around NumPy's PCG64 generator. The generator algorithm is
pinned so that one 64-bit seed reproduces the full draw sequence across runs
and platforms. A stream is single-owner: never share one stream between
concurrent workers; derive independent streams with :func:`derive_seed`
instead.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def splitmix64(value: int) -> int:
    """One SplitMix64 finalizer step (the standard 64-bit avalanche mix)."""
    z = (value + _GOLDEN) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def derive_seed(master_seed: int, *indices: int) -> int:
    """Derive an independent 64-bit stream seed from a master seed.

    Each index is folded in with a SplitMix64 step, so ``derive_seed(s, r, 0)``
    and ``derive_seed(s, r, 1)`` give decorrelated streams for the same run.
    The mixing function is fixed; external tools can reproduce run seeds from
    the master seed alone.
    """
    h = master_seed & _MASK64
    for idx in indices:
        h = splitmix64((h ^ (idx & _MASK64)) & _MASK64)
    return h


def _poisson_log_pmf(k: np.ndarray, mean: float) -> np.ndarray:
    """log P(K = k) for K ~ Poisson(mean), evaluated stably via lgamma."""
    k = np.asarray(k, dtype=np.float64)
    return k * math.log(mean) - mean - np.array([math.lgamma(v + 1.0) for v in k])


def poisson_pmf(k: Sequence[int] | np.ndarray, mean: float) -> np.ndarray:
    """Poisson probabilities for the given counts, computed in log space."""
    if mean < 0:
        raise ValueError(f"Poisson mean must be >= 0, got {mean}")
    k = np.asarray(k)
    if mean == 0:
        return np.where(k == 0, 1.0, 0.0)
    return np.exp(_poisson_log_pmf(k, mean))


class RandomStream:
    """Deterministic random source (PCG64) behind a small fixed interface.

    Identical seeds give identical draw sequences. All distributions the
    optimizer needs live here: standard normal, standard Cauchy, Poisson via
    inverse-CDF over the log-space pmf, uniform on (0, 1], roulette-wheel
    selection, and uniform integer draws.
    """

    def __init__(self, seed: int):
        self.seed = seed & _MASK64
        self._gen = np.random.Generator(np.random.PCG64(self.seed))

    def standard_normal(self, size: int | tuple[int, ...] | None = None):
        """Draw from N(0, 1); a scalar when size is None, else an array."""
        return self._gen.standard_normal(size)

    def standard_cauchy(self, size: int | tuple[int, ...] | None = None):
        """Draw from the standard Cauchy distribution (location 0, scale 1)."""
        return self._gen.standard_cauchy(size)

    def uniform(self, size: int | tuple[int, ...] | None = None):
        """Draw uniformly from the half-open interval (0, 1], never 0."""
        return 1.0 - self._gen.random(size)

    def integer(self, upper: int) -> int:
        """Draw one integer uniformly from {0, ..., upper - 1}."""
        if upper < 1:
            raise ValueError(f"integer() needs upper >= 1, got {upper}")
        return int(self._gen.integers(0, upper))

    def distinct_indices(self, upper: int, count: int) -> np.ndarray:
        """Draw `count` distinct integers uniformly from {0, ..., upper - 1}."""
        if count < 0 or count > upper:
            raise ValueError(f"cannot draw {count} distinct indices from {upper}")
        return self._gen.choice(upper, size=count, replace=False)

    def roulette(self, weights: Sequence[float] | np.ndarray, size: int | None = None):
        """Select an index with probability proportional to its weight.

        Weights must be nonnegative with a positive sum. Zero-weight cells
        are never selected. Exactly one uniform draw is consumed per
        selection, so a sized call equals that many scalar calls.
        """
        w = np.asarray(weights, dtype=np.float64)
        if w.ndim != 1 or w.size == 0:
            raise ValueError("roulette needs a nonempty 1-D weight vector")
        if np.any(w < 0):
            raise ValueError("roulette weights must be nonnegative")
        total = float(w.sum())
        if total <= 0:
            raise ValueError("roulette needs at least one positive weight")
        cum = np.cumsum(w)
        if size is None:
            return int(np.searchsorted(cum, self.uniform() * total, side="left"))
        return np.searchsorted(cum, self.uniform(size) * total, side="left")

    def poisson(self, mean: float, size: int | None = None):
        """Draw from Poisson(mean) by inverse-CDF over the log-space pmf.

        Intended for mean <= 500 (the recruitment schedule never exceeds the
        population size). One uniform draw is consumed per sample.
        """
        if mean < 0:
            raise ValueError(f"Poisson mean must be >= 0, got {mean}")
        if mean == 0:
            return 0 if size is None else np.zeros(size, dtype=np.int64)
        # Tail mass beyond this cap is far below double precision.
        cap = int(math.ceil(mean + 12.0 * math.sqrt(mean) + 30.0))
        cum = np.cumsum(poisson_pmf(np.arange(cap + 1), mean))
        if size is None:
            return int(np.searchsorted(cum, self.uniform(), side="left"))
        return np.searchsorted(cum, self.uniform(size), side="left").astype(np.int64)
