"""Monte Carlo estimators of the attacked-FDR expressions.

Each estimator consumes trial-aligned sample arrays produced by the
simulator and returns a mean with a plain sample-variance standard error.
None of them re-simulate: the expressions couple the attacker's local
rejection count with the global one inside a single expectation, so the
joint per-trial samples must come from the same runs.

Estimator catalogue (``m0`` = true nulls on captured nodes, ``R~`` = global
rejection count under attack):

* ``bh_baseline``: the no-attack identity q * n0 / n. Deterministic.
* ``oracle_exact``: m0 * E[1/(R~ v 1)] + q (n0 - m0) / n, the exact FDR of
  the label-aware attack.
* ``all_ones_upper``: m0 * E[1/(R~(captured -> 1) v 1)], a strategy-free
  upper bound on the attacked-null term; R~(captured -> 1) is the rejection
  count when every captured value is replaced by 1.
* ``classifier_upper``: m0 * E[(1 - (q/m) R_a)/(R~ v 1)] + q (n0 - m0) / n
  for a single captured node of size m with local rejection count R_a.
* ``classifier_loo``: the leave-one-out sum the classifier bound relaxes;
  exact but needs one local and one global BH replay per captured null, so
  it is guarded to small problems and used as a diagnostic.
* ``distributed_upper``: the multi-node generalisation, summing the
  classifier term over captured nodes.
* ``shuffling_upper``: m0 * (m0 q / (m n) + (m1 / m) E[1/(R v 1)]) for the
  value-permuting attack.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bh import bh_procedure
from .model import HypothesisSet

BOUND_KINDS = (
    "bh_baseline",
    "oracle_exact",
    "all_ones_upper",
    "classifier_upper",
    "classifier_loo",
    "distributed_upper",
    "shuffling_upper",
)

# One local and one global BH replay per captured null; quadratic cost.
LOO_MAX_N = 500


@dataclass(frozen=True)
class BoundEstimate:
    """A Monte Carlo mean with its standard error and sample count."""

    kind: str
    value: float
    std_error: float
    trials: int

    def __post_init__(self):
        if self.kind not in BOUND_KINDS:
            raise ValueError(f"unknown bound kind {self.kind!r}; expected one of {BOUND_KINDS}")
        if self.trials < 1:
            raise ValueError("a bound estimate needs at least one sample")
        if self.std_error < 0.0:
            raise ValueError("standard error cannot be negative")


def _from_terms(kind: str, terms: np.ndarray, constant: float = 0.0) -> BoundEstimate:
    t = terms.size
    if t == 0:
        raise ValueError(f"{kind}: need at least one trial sample")
    se = float(terms.std(ddof=1) / math.sqrt(t)) if t > 1 else 0.0
    return BoundEstimate(kind=kind, value=float(terms.mean()) + constant, std_error=se, trials=t)


def bh_baseline(q: float, n0: int, n: int, trials: int = 1) -> BoundEstimate:
    """The no-attack FDR identity q * n0 / n (exact, zero standard error)."""
    if not (0 <= n0 <= n):
        raise ValueError("need 0 <= n0 <= n")
    return BoundEstimate(kind="bh_baseline", value=q * n0 / n, std_error=0.0, trials=trials)


def oracle_fdr_exact(m0: int, n0: int, n: int, q: float, r_tilde_samples) -> BoundEstimate:
    """Exact FDR of the label-aware attack: m0 E[1/(R~ v 1)] + q(n0-m0)/n.

    The reported standard error covers the Monte Carlo first term only; the
    second term is deterministic.
    """
    if not (0 <= m0 <= n0 <= n):
        raise ValueError("need 0 <= m0 <= n0 <= n")
    r = np.asarray(r_tilde_samples, dtype=float)
    terms = m0 / np.maximum(r, 1.0)
    return _from_terms("oracle_exact", terms, constant=q * (n0 - m0) / n)


def all_ones_upper(m0: int, r_tilde_allones_samples) -> BoundEstimate:
    """Strategy-free bound on the attacked-null FDR term.

    ``r_tilde_allones_samples`` are global rejection counts on the same
    realizations with every captured p-value forced to 1, so the attacked
    entries count as rejected in the numerator but never in the denominator.
    """
    if m0 < 0:
        raise ValueError("m0 cannot be negative")
    r = np.asarray(r_tilde_allones_samples, dtype=float)
    terms = m0 / np.maximum(r, 1.0)
    return _from_terms("all_ones_upper", terms)


def classifier_fdr_upper(
    m0: int,
    n0: int,
    n: int,
    m: int,
    q: float,
    r_a_samples,
    r_tilde_samples,
) -> BoundEstimate:
    """Upper bound for the local-BH classifier attack on one captured node.

    ``r_a_samples`` and ``r_tilde_samples`` must be aligned by trial: the
    expression couples the attacker's local rejection count with the global
    one inside a single expectation.
    """
    if not (0 <= m0 <= n0 <= n):
        raise ValueError("need 0 <= m0 <= n0 <= n")
    r_a = np.asarray(r_a_samples, dtype=float)
    r_tilde = np.asarray(r_tilde_samples, dtype=float)
    if r_a.shape != r_tilde.shape:
        raise ValueError("r_a and r_tilde sample lists must be aligned by trial")
    if r_a.size and r_a.max() > m:
        raise ValueError("a local rejection count exceeds the report size m")
    terms = m0 * (1.0 - (q / m) * r_a) / np.maximum(r_tilde, 1.0)
    return _from_terms("classifier_upper", terms, constant=q * (n0 - m0) / n)


def distributed_fdr_upper(
    per_node: list[tuple[int, np.ndarray]],
    r_tilde_samples,
    q: float,
    d: int,
    n: int,
    n0: int,
) -> BoundEstimate:
    """Multi-node classifier bound: sum of per-captured-node terms.

    ``per_node`` lists (m0_i, local rejection count samples) per captured
    node; all sample arrays must be trial-aligned with ``r_tilde_samples``.
    With no captured nodes this reduces to the q * n0 / n baseline.
    """
    if n % d != 0:
        raise ValueError("d must divide n")
    node_size = n // d
    r_tilde = np.asarray(r_tilde_samples, dtype=float)
    guard = np.maximum(r_tilde, 1.0)
    total_m0 = 0
    terms = np.zeros_like(r_tilde)
    for m0_i, r_i_samples in per_node:
        r_i = np.asarray(r_i_samples, dtype=float)
        if r_i.shape != r_tilde.shape:
            raise ValueError("per-node samples must be aligned with r_tilde by trial")
        if r_i.size and r_i.max() > node_size:
            raise ValueError("a local rejection count exceeds the node size n/d")
        if not (0 <= m0_i <= node_size):
            raise ValueError("per-node null count must lie in [0, n/d]")
        total_m0 += m0_i
        terms += m0_i * (1.0 - (q * d / n) * r_i) / guard
    if total_m0 > n0:
        raise ValueError("captured null counts exceed n0")
    return _from_terms("distributed_upper", terms, constant=q * (n0 - total_m0) / n)


def shuffling_fdr_upper(m0: int, m1: int, m: int, n: int, q: float, r_samples) -> BoundEstimate:
    """Bound for the value-permuting attack.

    m0 * (m0 q / (m n) + (m1 / m) E[1/(R v 1)]), where R is the global
    rejection count under the attack (identical to the honest count, since
    the pooled value multiset is unchanged). The v1 guard is ours: R can be
    zero at tiny scales and the expression is stated without one.
    """
    if m0 + m1 != m:
        raise ValueError("captured null and non-null counts must sum to m")
    r = np.asarray(r_samples, dtype=float)
    terms = m0 * (m0 * q / (m * n) + (m1 / m) / np.maximum(r, 1.0))
    return _from_terms("shuffling_upper", terms)


def classifier_fdr_loo(pvalues, hs: HypothesisSet, node_id: int, q: float) -> float:
    """Leave-one-out evaluation of the classifier attack's exact FDR term.

    For each true null i on the captured node, replays the local BH run
    with p_i set to 0 (numerator count) and the whole pipeline -- local BH
    classification, saturating rewrite, pooling, global BH -- with p_i set
    to 1 (denominator count). Both replacements act on the source p-value,
    which keeps each factor independent of the realized p_i; replacing the
    reported value instead would not, because the classification of every
    other entry depends on p_i through the local threshold.

    Returns the per-trial sum; averaging over trials estimates the first
    FDR term (the q(n0-m0)/n honest-null term is not included). One local
    and one global BH replay per captured null makes this quadratic, hence
    the size guard. For q < 1 the rewritten report always contains a zero
    (rank m can never be locally rejected), so the global count is at least
    1 and the v1 guard below is inert.
    """
    if hs.n > LOO_MAX_N:
        raise ValueError(f"leave-one-out diagnostic is limited to n <= {LOO_MAX_N}")
    p = np.asarray(pvalues, dtype=float)
    if p.shape != (hs.n,):
        raise ValueError("pvalues must have length n")
    own = hs.node_indices(node_id)
    m = own.size
    local = p[own].copy()
    total = 0.0
    for j in np.flatnonzero(hs.is_null[own]):
        with_zero = local.copy()
        with_zero[j] = 0.0
        r_a0 = bh_procedure(with_zero, q).r
        with_one = local.copy()
        with_one[j] = 1.0
        classified = bh_procedure(with_one, q, ids=np.arange(m))
        rewritten = np.zeros(m)
        rewritten[classified.rejected] = 1.0
        pooled = p.copy()
        pooled[own] = rewritten
        r_tilde1 = bh_procedure(pooled, q).r
        total += (1.0 - (q / m) * r_a0) / max(r_tilde1, 1)
    return total
