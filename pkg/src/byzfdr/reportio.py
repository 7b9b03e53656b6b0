"""Serialization: node report wire format, results CSV, and trial dumps.

Every floating-point number is printed as its shortest round-trip decimal
(``repr`` of a Python float), so parse(serialize(x)) is bit-exact and the
same run produces byte-identical files on any platform or worker count.
"""

from __future__ import annotations

import csv

import numpy as np

from .attacks import CapturedNodeStat
from .model import PValueReport
from .sim import ExperimentConfig, TrialRecord

RESULTS_HEADER = (
    "axis_value",
    "attack",
    "defense",
    "mean_fdr",
    "se_fdr",
    "mean_power",
    "se_power",
    "bound_kind",
    "bound_value",
    "bound_se",
    "trials",
    "seed",
)

DUMP_HEADER = (
    "trial_index",
    "fdp",
    "power_prop",
    "r_tilde",
    "v",
    "r_tilde_allones",
    "captured",
    "n",
    "d",
    "n0",
    "q",
    "seed",
)


def format_float(x) -> str:
    """Shortest decimal that round-trips to the same 64-bit float.

    numpy scalars are converted first; their repr carries a type prefix.
    """
    return repr(float(x))


class ReportParseError(ValueError):
    """Malformed wire line; the message names the line and field."""


def serialize_report(report: PValueReport) -> str:
    """One line per report: ``node_id<TAB>id:pvalue,id:pvalue,...``."""
    entries = ",".join(f"{i}:{format_float(p)}" for i, p in report.entries())
    return f"{report.node_id}\t{entries}"


def parse_report(line: str, lineno: int = 1) -> PValueReport:
    """Inverse of serialize_report; bit-exact on the p-values."""
    body = line.rstrip("\n")
    head, sep, rest = body.partition("\t")
    if not sep:
        raise ReportParseError(f"line {lineno}: missing tab after node id")
    try:
        node_id = int(head)
    except ValueError:
        raise ReportParseError(f"line {lineno}: node id {head!r} is not an integer") from None
    ids: list[int] = []
    pvalues: list[float] = []
    if rest:
        for field_no, field in enumerate(rest.split(","), start=1):
            hyp, sep, value = field.partition(":")
            if not sep:
                raise ReportParseError(
                    f"line {lineno}: field {field_no}: expected id:pvalue, got {field!r}"
                )
            try:
                ids.append(int(hyp))
            except ValueError:
                raise ReportParseError(
                    f"line {lineno}: field {field_no}: hypothesis id {hyp!r} is not an integer"
                ) from None
            try:
                pvalues.append(float(value))
            except ValueError:
                raise ReportParseError(
                    f"line {lineno}: field {field_no}: p-value {value!r} is not a number"
                ) from None
    return PValueReport(
        node_id=node_id,
        ids=np.asarray(ids, dtype=int),
        pvalues=np.asarray(pvalues, dtype=float),
    )


def results_rows(axis_value, attack: str, defense: str, stats, seed: int):
    """Rows for one aggregated grid point: one per bound, or a single row
    with the bound columns empty when no bounds were requested."""
    prefix = (
        format_float(axis_value),
        attack,
        defense,
        format_float(stats.mean_fdr),
        format_float(stats.se_fdr),
        format_float(stats.mean_power),
        format_float(stats.se_power),
    )
    suffix = (str(stats.trials), str(seed))
    if not stats.bounds:
        yield (*prefix, "", "", "", *suffix)
        return
    for bound in stats.bounds:
        yield (
            *prefix,
            bound.kind,
            format_float(bound.value),
            format_float(bound.std_error),
            *suffix,
        )


def write_results_csv(fh, rows) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(RESULTS_HEADER)
    writer.writerows(rows)


def _encode_captured(per_captured) -> str:
    return ";".join(
        f"{s.node_id}:{s.m0}:{'' if s.r_a is None else s.r_a}" for s in per_captured
    )


def _decode_captured(text: str, lineno: int):
    if not text:
        return ()
    stats = []
    for part in text.split(";"):
        pieces = part.split(":")
        if len(pieces) != 3:
            raise ValueError(f"line {lineno}: captured entry {part!r} is not node:m0:r_a")
        node_id, m0, r_a = pieces
        stats.append(
            CapturedNodeStat(
                node_id=int(node_id),
                m0=int(m0),
                r_a=None if r_a == "" else int(r_a),
            )
        )
    return tuple(stats)


def write_trial_dump(fh, cfg: ExperimentConfig, records) -> None:
    """One row per trial plus the run context needed to re-evaluate bounds."""
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(DUMP_HEADER)
    context = (str(cfg.n), str(cfg.d), str(cfg.n0), format_float(cfg.q), str(cfg.master_seed))
    for rec in records:
        writer.writerow(
            (
                str(rec.trial_index),
                format_float(rec.fdp),
                format_float(rec.power_prop),
                str(rec.r_tilde),
                str(rec.v),
                "" if rec.r_tilde_allones is None else str(rec.r_tilde_allones),
                _encode_captured(rec.per_captured),
                *context,
            )
        )


def read_trial_dump(fh) -> tuple[ExperimentConfig, list[TrialRecord]]:
    """Parse a trial dump back into records plus a minimal config.

    The config carries the run context (n, d, n0, q, seed) that the bound
    estimators need; the attack and defense fields are not recorded in the
    dump and come back as "none".
    """
    from .model import AttackConfig

    reader = csv.reader(fh)
    header = next(reader, None)
    if header is None or tuple(header) != DUMP_HEADER:
        raise ValueError(f"trial dump must start with the header {','.join(DUMP_HEADER)}")
    records: list[TrialRecord] = []
    context: tuple | None = None
    for lineno, row in enumerate(reader, start=2):
        if len(row) != len(DUMP_HEADER):
            raise ValueError(f"line {lineno}: expected {len(DUMP_HEADER)} columns, got {len(row)}")
        row_context = tuple(row[7:12])
        if context is None:
            context = row_context
        elif row_context != context:
            raise ValueError(f"line {lineno}: run context differs from earlier rows")
        records.append(
            TrialRecord(
                trial_index=int(row[0]),
                fdp=float(row[1]),
                power_prop=float(row[2]),
                r_tilde=int(row[3]),
                v=int(row[4]),
                r_tilde_allones=None if row[5] == "" else int(row[5]),
                per_captured=_decode_captured(row[6], lineno),
            )
        )
    if context is None:
        raise ValueError("trial dump contains no records")
    n, d, n0, q, seed = context
    cfg = ExperimentConfig(
        n=int(n),
        d=int(d),
        n0=int(n0),
        q=float(q),
        attack=AttackConfig(model="none"),
        trials=len(records),
        master_seed=int(seed),
    )
    return cfg, records
