"""Ground-truth bookkeeping and p-value generation for the simulated network.

A testing problem consists of ``n`` hypotheses split evenly across ``d``
nodes. Each hypothesis is either a true null (test statistic ~ N(0, 1)) or a
non-null (statistic ~ N(mu, 1) with mu drawn per index from a uniform range).
Two-sided p-values are computed from the standard normal CDF; under a true
null they are exactly Unif[0, 1].
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np
from scipy.special import erfc, ndtr

ATTACK_MODELS = ("none", "oracle", "bh_classifier", "enhanced_bh_classifier", "shuffling")

_SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class HypothesisSet:
    """Ground truth for one trial.

    ``is_null[i]`` marks hypothesis ``i`` as a true null; ``node_of[i]`` is
    the id of the node testing it. Nodes own contiguous index blocks of size
    ``n // d`` (node ``k`` owns ``[k*n/d, (k+1)*n/d)``).
    """

    n: int
    d: int
    is_null: np.ndarray
    node_of: np.ndarray
    n0: int
    n1: int

    def __post_init__(self):
        if self.n0 + self.n1 != self.n:
            raise ValueError("null and non-null counts must sum to n")
        if self.is_null.shape != (self.n,) or self.node_of.shape != (self.n,):
            raise ValueError("label arrays must have length n")
        if int(self.is_null.sum()) != self.n0:
            raise ValueError("is_null does not contain exactly n0 true nulls")

    @property
    def node_size(self) -> int:
        return self.n // self.d

    def node_indices(self, node: int) -> np.ndarray:
        """Hypothesis ids owned by ``node`` (a contiguous block)."""
        size = self.node_size
        return np.arange(node * size, (node + 1) * size)


@dataclass(frozen=True)
class PValueReport:
    """One node's report: parallel arrays of hypothesis ids and p-values."""

    node_id: int
    ids: np.ndarray
    pvalues: np.ndarray

    def __post_init__(self):
        if self.ids.shape != self.pvalues.shape:
            raise ValueError("ids and pvalues must have equal length")
        if self.pvalues.size and (self.pvalues.min() < 0.0 or self.pvalues.max() > 1.0):
            raise ValueError("p-values must lie in [0, 1]")

    @property
    def size(self) -> int:
        return int(self.pvalues.size)

    def entries(self) -> Iterator[tuple[int, float]]:
        for i, p in zip(self.ids, self.pvalues):
            yield int(i), float(p)


@dataclass(frozen=True)
class AltMeanDistribution:
    """Uniform range for the non-null mean shift; ``lo == hi`` pins it."""

    lo: float
    hi: float

    def __post_init__(self):
        if not (self.lo <= self.hi):
            raise ValueError("alternative mean range requires lo <= hi")


@dataclass(frozen=True)
class AttackConfig:
    """Which attack runs and how many nodes it captures.

    ``captured_nodes`` fixes the captured set; when ``None`` a uniformly
    random subset of ``round(lambda_frac * d)`` nodes is drawn each trial.
    """

    model: str = "none"
    lambda_frac: float = 0.0
    captured_nodes: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.model not in ATTACK_MODELS:
            raise ValueError(f"unknown attack model {self.model!r}; expected one of {ATTACK_MODELS}")
        if not (0.0 <= self.lambda_frac <= 1.0):
            raise ValueError("lambda_frac must lie in [0, 1]")
        if self.captured_nodes is not None:
            if len(set(self.captured_nodes)) != len(self.captured_nodes):
                raise ValueError("captured_nodes must be distinct")


def build_hypotheses(
    n: int,
    n0: int,
    d: int,
    nulls_per_node: Sequence[int] | None = None,
    rng: np.random.Generator | None = None,
) -> HypothesisSet:
    """Construct ground-truth labels for ``n`` hypotheses over ``d`` nodes.

    With ``nulls_per_node=None`` the n0 true nulls are a uniformly random
    subset of all indices (requires ``rng``). Otherwise ``nulls_per_node[k]``
    pins the exact null count at node ``k``; the placement is then
    deterministic (the first entries of each node's block), which is
    immaterial for any value-based procedure since null p-values are
    exchangeable.
    """
    if n <= 0 or d <= 0:
        raise ValueError("n and d must be positive")
    if n % d != 0:
        raise ValueError(f"d={d} must divide n={n}")
    if not (0 <= n0 <= n):
        raise ValueError("n0 must lie in [0, n]")
    size = n // d
    is_null = np.zeros(n, dtype=bool)
    if nulls_per_node is None:
        if rng is None:
            raise ValueError("random null placement requires a random stream")
        is_null[rng.permutation(n)[:n0]] = True
    else:
        counts = [int(k) for k in nulls_per_node]
        if len(counts) != d:
            raise ValueError(f"nulls_per_node must list {d} counts, got {len(counts)}")
        if any(k < 0 or k > size for k in counts):
            raise ValueError(f"each per-node null count must lie in [0, {size}]")
        if sum(counts) != n0:
            raise ValueError(f"per-node null counts sum to {sum(counts)}, expected n0={n0}")
        for node, k in enumerate(counts):
            is_null[node * size : node * size + k] = True
    node_of = np.repeat(np.arange(d), size)
    return HypothesisSet(n=n, d=d, is_null=is_null, node_of=node_of, n0=n0, n1=n - n0)


def sample_statistics(hs: HypothesisSet, alt: AltMeanDistribution, rng: np.random.Generator) -> np.ndarray:
    """Draw one test statistic per hypothesis.

    Null statistics are standard normal. Each non-null statistic is
    N(mu_i, 1) with mu_i drawn fresh from ``alt`` for this call. Consumes,
    in order, ``n`` standard-normal draws then one uniform per non-null.
    """
    x = rng.standard_normal(hs.n)
    nonnull = np.flatnonzero(~hs.is_null)
    if nonnull.size:
        x[nonnull] += rng.uniform(alt.lo, alt.hi, size=nonnull.size)
    return x


def normal_cdf(x):
    """Standard normal CDF, absolute error below 1e-12 over the real line."""
    return ndtr(x)


def two_sided_p(x):
    """Two-sided p-value 2*(1 - Phi(|x|)) for a standard normal statistic.

    Evaluated as erfc(|x|/sqrt(2)), which avoids the cancellation of
    1 - Phi(|x|) and keeps full relative accuracy deep in the tail.
    Accepts a scalar or array; rejects non-finite input.
    """
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValueError("test statistics must be finite")
    p = erfc(np.abs(arr) / _SQRT2)
    return float(p) if arr.ndim == 0 else p


def split_reports(hs: HypothesisSet, pvalues: np.ndarray) -> list[PValueReport]:
    """Partition a length-n p-value vector into one report per node."""
    if pvalues.shape != (hs.n,):
        raise ValueError("pvalues must have length n")
    size = hs.node_size
    return [
        PValueReport(
            node_id=node,
            ids=np.arange(node * size, (node + 1) * size),
            pvalues=pvalues[node * size : (node + 1) * size],
        )
        for node in range(hs.d)
    ]
