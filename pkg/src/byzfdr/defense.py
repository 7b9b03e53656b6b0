"""Center-side countermeasures against saturating p-value attacks.

Both defenses key on exact 0.0 entries in reports from nodes flagged as
suspicious, since the saturating attacks emit exact zeros and a continuous
p-value is zero with probability zero.

* ``resample_zeros``: each exact 0.0 from a flagged node is replaced with a
  fresh Unif[0, 1) draw before pooling; the testing budget is unchanged.
* ``remove_zeros``: exact 0.0 entries from flagged nodes are dropped, and
  the global BH denominator shrinks by the number removed.
"""

from __future__ import annotations

import numpy as np

from .model import PValueReport

DEFENSES = ("none", "resample_zeros", "remove_zeros")


def counter_resample_zeros(
    reports: list[PValueReport],
    flagged,
    rng: np.random.Generator,
) -> list[PValueReport]:
    """Replace exact 0.0 p-values from flagged nodes with Unif[0, 1) draws.

    Non-flagged reports pass through by reference. ``rng`` is consumed once
    per zero entry, in report order then id order within a report.
    """
    flagged_set = {int(c) for c in np.asarray(flagged).ravel()}
    out: list[PValueReport] = []
    for report in reports:
        if report.node_id not in flagged_set:
            out.append(report)
            continue
        zero = report.pvalues == 0.0
        if not zero.any():
            out.append(report)
            continue
        values = report.pvalues.copy()
        values[zero] = rng.uniform(size=int(zero.sum()))
        out.append(PValueReport(report.node_id, report.ids, values))
    return out


def counter_remove_zeros(
    reports: list[PValueReport],
    flagged,
    n: int,
) -> tuple[list[PValueReport], int]:
    """Drop exact 0.0 p-values from flagged nodes.

    Returns the filtered reports together with the effective denominator
    ``n - (number of entries removed)`` for the subsequent global BH run.
    An emptied report is kept (with zero entries) so node accounting stays
    intact downstream.
    """
    flagged_set = {int(c) for c in np.asarray(flagged).ravel()}
    out: list[PValueReport] = []
    removed = 0
    for report in reports:
        if report.node_id not in flagged_set:
            out.append(report)
            continue
        keep = report.pvalues != 0.0
        dropped = int(report.size - keep.sum())
        if dropped == 0:
            out.append(report)
            continue
        removed += dropped
        out.append(PValueReport(report.node_id, report.ids[keep], report.pvalues[keep]))
    return out, n - removed
