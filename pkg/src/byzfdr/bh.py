"""The Benjamini-Hochberg step-up procedure and realized per-trial metrics."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import HypothesisSet


@dataclass(frozen=True)
class RejectionResult:
    """Outcome of one BH run.

    ``rejected`` holds the rejected hypothesis ids (unordered);
    ``r == cutoff_index == |rejected|``. ``threshold`` is the step-up level
    ``q * cutoff_index / n_effective`` (0.0 when nothing is rejected).
    """

    rejected: np.ndarray
    r: int
    cutoff_index: int
    threshold: float


@dataclass(frozen=True)
class TrialMetrics:
    """Realized false-discovery proportion and true-positive proportion."""

    v: int
    r: int
    fdp: float
    power_prop: float


def bh_procedure(
    pvalues,
    q: float,
    n_effective: int | None = None,
    ids=None,
) -> RejectionResult:
    """Step-up rejection at level ``q``.

    Sorts the p-values, finds the largest rank ``i`` with
    ``p_(i) <= q * i / n_effective`` and rejects every p-value at or below
    that cutoff. ``n_effective`` defaults to the input length; passing a
    larger value runs BH as if the removed entries were still counted in
    the denominator (it is the removal defense that passes the reduced
    count). Ties are value-based: all entries equal to the cutoff value are
    rejected, which is exactly the set of ranks ``<= i0``.
    """
    if q <= 0.0 or q > 1.0:
        raise ValueError("target FDR level q must lie in (0, 1]")
    p = np.asarray(pvalues, dtype=float)
    k = p.size
    if ids is None:
        ids = np.arange(k)
    else:
        ids = np.asarray(ids)
        if ids.shape != p.shape:
            raise ValueError("ids and pvalues must have equal length")
    n_eff = k if n_effective is None else int(n_effective)
    if n_eff < k:
        raise ValueError("n_effective must be at least the number of p-values")
    if k == 0:
        return RejectionResult(rejected=np.empty(0, dtype=int), r=0, cutoff_index=0, threshold=0.0)

    order = np.sort(p)
    passing = np.flatnonzero(order <= q * np.arange(1, k + 1) / n_eff)
    if passing.size == 0:
        return RejectionResult(rejected=np.empty(0, dtype=ids.dtype), r=0, cutoff_index=0, threshold=0.0)
    i0 = int(passing[-1]) + 1
    cutoff_value = order[i0 - 1]
    rejected = ids[p <= cutoff_value]
    return RejectionResult(rejected=rejected, r=i0, cutoff_index=i0, threshold=q * i0 / n_eff)


def realized_metrics(res: RejectionResult, hs: HypothesisSet) -> TrialMetrics:
    """Count false rejections against ground truth.

    ``v`` is the number of rejected true nulls, ``fdp = v / max(r, 1)`` and
    ``power_prop = (r - v) / max(n1, 1)``. Rejected ids must index into
    ``hs``; removed hypotheses (absent from the BH input) simply count as
    not rejected.
    """
    r = res.r
    if r > 0:
        ids = res.rejected
        if int(ids.min()) < 0 or int(ids.max()) >= hs.n:
            raise ValueError("rejected id outside the hypothesis set")
        v = int(hs.is_null[ids].sum())
    else:
        v = 0
    return TrialMetrics(
        v=v,
        r=r,
        fdp=v / max(r, 1),
        power_prop=(r - v) / max(hs.n1, 1),
    )
