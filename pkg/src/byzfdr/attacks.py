"""Byzantine rewrites applied to captured nodes' reports before transmission.

Four attack models are implemented:

* ``oracle``: with label access, true-null p-values become 0 and non-null
  p-values become 1.
* ``bh_classifier``: the node runs BH locally at level ``q`` (denominator =
  its own report size), treats the locally rejected p-values as non-nulls,
  and sends 1 for those and 0 for everything else.
* ``enhanced_bh_classifier``: same local classification, but instead of
  saturating to {0, 1}, each class's values are rescaled order-preservingly
  into the other class's observed value range.
* ``shuffling``: the assignment of values to hypothesis ids is permuted
  uniformly at random; the value multiset (and hence any global value-based
  threshold) is unchanged.

All transformations are pure: they return new reports and never mutate
their inputs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bh import bh_procedure
from .model import HypothesisSet, PValueReport


@dataclass(frozen=True)
class CapturedNodeStat:
    """Per-captured-node bookkeeping: true-null count and, for the
    classifier variants, the local BH rejection count used to classify."""

    node_id: int
    m0: int
    r_a: int | None


@dataclass(frozen=True)
class AttackOutcome:
    """All reports after the attack (captured ones rewritten, the rest
    passed through untouched) plus per-node stats for bound estimation."""

    reports: tuple[PValueReport, ...]
    per_node: tuple[CapturedNodeStat, ...]
    m0_realized: int


def oracle_attack(report: PValueReport, hs: HypothesisSet) -> PValueReport:
    """Label-aware rewrite: nulls to 0.0, non-nulls to 1.0."""
    values = np.where(hs.is_null[report.ids], 0.0, 1.0)
    return PValueReport(report.node_id, report.ids, values)


def bh_classifier_attack(report: PValueReport, q: float) -> tuple[PValueReport, int]:
    """Classify via a local BH run, then saturate.

    Locally rejected entries (sorted rank <= i0 with denominator m) are
    classified non-null and sent as 1.0; all others are classified null and
    sent as 0.0. Returns the rewritten report and r_a = i0.
    """
    m = report.size
    if m == 0:
        raise ValueError("cannot attack an empty report")
    local = bh_procedure(report.pvalues, q, ids=np.arange(m))
    values = np.zeros(m)
    values[local.rejected] = 1.0
    return PValueReport(report.node_id, report.ids, values), local.r


def enhanced_bh_classifier_attack(report: PValueReport, q: float) -> tuple[PValueReport, int]:
    """Classify via a local BH run, then swap the two classes' value ranges.

    Values classified null are mapped affinely from their own [min, max]
    onto the classified non-nulls' [min, max], and vice versa; the map is
    increasing, so relative order within each class is preserved. Degenerate
    cases: if either class is empty the report is returned unchanged; a
    zero-width target range collapses everything onto that point; a
    zero-width source range maps onto the midpoint of the target.
    """
    m = report.size
    if m == 0:
        raise ValueError("cannot attack an empty report")
    local = bh_procedure(report.pvalues, q, ids=np.arange(m))
    i0 = local.r
    if i0 == 0 or i0 == m:
        return report, i0
    rejected = np.zeros(m, dtype=bool)
    rejected[local.rejected] = True
    low_class = report.pvalues[rejected]
    high_class = report.pvalues[~rejected]
    values = np.empty(m)
    values[~rejected] = _rescale(high_class, float(low_class.min()), float(low_class.max()))
    values[rejected] = _rescale(low_class, float(high_class.min()), float(high_class.max()))
    return PValueReport(report.node_id, report.ids, values), i0


def _rescale(values: np.ndarray, target_lo: float, target_hi: float) -> np.ndarray:
    lo = float(values.min())
    hi = float(values.max())
    if target_hi == target_lo:
        return np.full(values.size, target_lo)
    if hi == lo:
        return np.full(values.size, 0.5 * (target_lo + target_hi))
    return target_lo + (values - lo) * (target_hi - target_lo) / (hi - lo)


def shuffling_attack(report: PValueReport, rng: np.random.Generator) -> PValueReport:
    """Permute the value-to-id assignment uniformly at random."""
    return PValueReport(report.node_id, report.ids, rng.permutation(report.pvalues))


def select_captured(d: int, lambda_frac: float, rng: np.random.Generator) -> np.ndarray:
    """Draw the captured node set: round(lambda_frac * d) distinct ids,
    uniformly at random, returned in ascending order."""
    k = int(round(lambda_frac * d))
    if not (0 <= k <= d):
        raise ValueError("round(lambda_frac * d) must lie in [0, d]")
    if k == 0:
        return np.empty(0, dtype=int)
    return np.sort(rng.choice(d, size=k, replace=False))


def apply_attack(
    model: str,
    reports: list[PValueReport],
    captured,
    hs: HypothesisSet,
    q: float,
    rng: np.random.Generator,
) -> AttackOutcome:
    """Rewrite the captured nodes' reports under the given attack model.

    Each captured node is attacked independently (no cross-node pooling);
    uncaptured reports pass through by reference. ``rng`` is only consumed
    by the shuffling attack, once per captured node in report order.
    """
    captured_set = {int(c) for c in np.asarray(captured).ravel()}
    out: list[PValueReport] = []
    stats: list[CapturedNodeStat] = []
    for report in reports:
        if model == "none" or report.node_id not in captured_set:
            out.append(report)
            continue
        m0 = int(hs.is_null[report.ids].sum())
        r_a: int | None
        if model == "oracle":
            rewritten, r_a = oracle_attack(report, hs), None
        elif model == "bh_classifier":
            rewritten, r_a = bh_classifier_attack(report, q)
        elif model == "enhanced_bh_classifier":
            rewritten, r_a = enhanced_bh_classifier_attack(report, q)
        elif model == "shuffling":
            rewritten, r_a = shuffling_attack(report, rng), None
        else:
            raise ValueError(f"unknown attack model {model!r}")
        out.append(rewritten)
        stats.append(CapturedNodeStat(node_id=report.node_id, m0=m0, r_a=r_a))
    return AttackOutcome(
        reports=tuple(out),
        per_node=tuple(stats),
        m0_realized=sum(s.m0 for s in stats),
    )
