"""Deterministic Monte Carlo driver: generation, attack, defense, global BH.

Each trial runs on its own random stream derived from
``(master_seed, grid_index, trial_index)``, so results are bit-identical
for any worker count or scheduling and any two configs sharing a seed see
identical p-value realizations up to the point where their pipelines
diverge. The stream is consumed in a fixed order:

1. null placement (only under random placement),
2. test statistics (n normal draws, then one uniform per non-null),
3. captured-node selection (only when the captured set is not pinned),
4. the attack (only shuffling draws),
5. the defense (only zero-resampling draws).

Because attacks and defenses sit at the end of the order, runs that differ
only in those stages share the same hypotheses and p-values, which is what
makes matched-trial bound comparisons meaningful.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from . import bounds as bounds_mod
from .attacks import AttackOutcome, apply_attack, select_captured
from .bh import bh_procedure, realized_metrics
from .defense import DEFENSES, counter_remove_zeros, counter_resample_zeros
from .model import (
    AltMeanDistribution,
    AttackConfig,
    HypothesisSet,
    build_hypotheses,
    sample_statistics,
    split_reports,
    two_sided_p,
)

# Trial counts below this run serially; process startup would dominate.
_PARALLEL_MIN_TRIALS = 512


@dataclass(frozen=True)
class ExperimentConfig:
    """Full description of one Monte Carlo run.

    ``nulls_per_node`` pins the exact null count per node and freezes the
    labels across trials (the bound expressions treat the captured null
    count as a constant); ``None`` redraws a uniformly random placement of
    ``n0`` nulls every trial. ``collect_allones`` additionally replays the
    global BH run with every captured value forced to 1.0, feeding the
    strategy-free bound. ``grid_index`` keeps sweep points on independent
    seed streams.
    """

    n: int
    d: int
    n0: int
    q: float
    attack: AttackConfig
    defense: str = "none"
    alt: AltMeanDistribution = AltMeanDistribution(1.0, 1.5)
    trials: int = 10_000
    master_seed: int = 0
    nulls_per_node: tuple[int, ...] | None = None
    collect_allones: bool = False
    grid_index: int = 0

    def __post_init__(self):
        if self.n <= 0 or self.d <= 0 or self.n % self.d != 0:
            raise ValueError("d must divide n and both must be positive")
        if not (0 <= self.n0 <= self.n):
            raise ValueError("n0 must lie in [0, n]")
        if not (0.0 < self.q <= 1.0):
            raise ValueError("q must lie in (0, 1]")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if self.defense not in DEFENSES:
            raise ValueError(f"unknown defense {self.defense!r}; expected one of {DEFENSES}")
        if self.attack.captured_nodes is not None:
            for node in self.attack.captured_nodes:
                if not (0 <= node < self.d):
                    raise ValueError(f"captured node {node} outside [0, {self.d})")
        if self.nulls_per_node is not None and len(self.nulls_per_node) != self.d:
            raise ValueError("nulls_per_node must list one count per node")

    @property
    def node_size(self) -> int:
        return self.n // self.d


@dataclass(frozen=True)
class TrialRecord:
    """Realized quantities of one trial, aligned for bound estimation."""

    trial_index: int
    fdp: float
    power_prop: float
    r_tilde: int
    v: int
    per_captured: tuple
    r_tilde_allones: int | None = None


@dataclass(frozen=True)
class AggregateStats:
    """Monte Carlo means, standard errors, and attached bound estimates."""

    mean_fdr: float
    se_fdr: float
    mean_power: float
    se_power: float
    trials: int
    bounds: tuple = ()


def trial_rng(cfg: ExperimentConfig, trial_index: int) -> np.random.Generator:
    """The trial's private stream, a pure function of seed and indices."""
    return np.random.default_rng(
        np.random.SeedSequence((cfg.master_seed, cfg.grid_index, trial_index))
    )


def _build_trial_hypotheses(cfg: ExperimentConfig, rng: np.random.Generator) -> HypothesisSet:
    if cfg.nulls_per_node is None:
        return build_hypotheses(cfg.n, cfg.n0, cfg.d, rng=rng)
    return build_hypotheses(cfg.n, cfg.n0, cfg.d, nulls_per_node=cfg.nulls_per_node)


def run_trial(cfg: ExperimentConfig, trial_index: int) -> TrialRecord:
    """Generate, attack, defend, and test once; see the module docstring
    for the stream consumption order this function guarantees."""
    rng = trial_rng(cfg, trial_index)
    hs = _build_trial_hypotheses(cfg, rng)
    pvalues = two_sided_p(sample_statistics(hs, cfg.alt, rng))
    reports = split_reports(hs, pvalues)

    if cfg.attack.model == "none":
        captured = np.empty(0, dtype=int)
    elif cfg.attack.captured_nodes is not None:
        captured = np.asarray(sorted(cfg.attack.captured_nodes), dtype=int)
    else:
        captured = select_captured(cfg.d, cfg.attack.lambda_frac, rng)

    outcome = apply_attack(cfg.attack.model, reports, captured, hs, cfg.q, rng)

    final_reports = list(outcome.reports)
    n_effective = cfg.n
    if cfg.defense == "resample_zeros":
        final_reports = counter_resample_zeros(final_reports, captured, rng)
    elif cfg.defense == "remove_zeros":
        final_reports, n_effective = counter_remove_zeros(final_reports, captured, cfg.n)

    pooled_ids = np.concatenate([r.ids for r in final_reports])
    pooled_p = np.concatenate([r.pvalues for r in final_reports])
    result = bh_procedure(pooled_p, cfg.q, n_effective=n_effective, ids=pooled_ids)
    metrics = realized_metrics(result, hs)

    r_tilde_allones = None
    if cfg.collect_allones:
        forced = pvalues.copy()
        for node in captured:
            forced[hs.node_indices(int(node))] = 1.0
        r_tilde_allones = bh_procedure(forced, cfg.q).r

    return TrialRecord(
        trial_index=trial_index,
        fdp=metrics.fdp,
        power_prop=metrics.power_prop,
        r_tilde=metrics.r,
        v=metrics.v,
        per_captured=outcome.per_node,
        r_tilde_allones=r_tilde_allones,
    )


def _run_chunk(cfg: ExperimentConfig, start: int, stop: int) -> list[TrialRecord]:
    return [run_trial(cfg, t) for t in range(start, stop)]


def _worker_count(trials: int) -> int:
    env = os.environ.get("BYZFDR_THREADS", "").strip()
    if env:
        workers = int(env)
        if workers < 1:
            raise ValueError("BYZFDR_THREADS must be a positive integer")
    else:
        workers = os.cpu_count() or 1
    return max(1, min(workers, trials))


def run_trials(cfg: ExperimentConfig) -> list[TrialRecord]:
    """All trial records in trial-index order.

    Trials are farmed out to worker processes in contiguous chunks and
    merged in submission order, so the output is identical for every
    worker count (including 1).
    """
    workers = _worker_count(cfg.trials)
    if workers == 1 or cfg.trials < _PARALLEL_MIN_TRIALS:
        return _run_chunk(cfg, 0, cfg.trials)
    edges = np.linspace(0, cfg.trials, 4 * workers + 1).astype(int)
    records: list[TrialRecord] = []
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [
            pool.submit(_run_chunk, cfg, int(a), int(b))
            for a, b in zip(edges[:-1], edges[1:])
            if b > a
        ]
        for future in futures:
            records.extend(future.result())
    return records


def _constant_captured_profile(records: list[TrialRecord], kind: str) -> list[tuple[int, int]]:
    """The (node_id, m0) profile shared by every trial.

    The bound expressions treat the captured composition as a constant, so
    attaching them to runs with per-trial random placement or captured-set
    draws is refused rather than silently averaged.
    """
    profile = [(s.node_id, s.m0) for s in records[0].per_captured]
    for rec in records[1:]:
        if [(s.node_id, s.m0) for s in rec.per_captured] != profile:
            raise ValueError(
                f"bound {kind!r} needs a fixed captured composition across trials; "
                "pin captured_nodes and nulls_per_node"
            )
    return profile


def _local_count_samples(records: list[TrialRecord], position: int, kind: str) -> np.ndarray:
    samples = []
    for rec in records:
        r_a = rec.per_captured[position].r_a
        if r_a is None:
            raise ValueError(f"bound {kind!r} needs local rejection counts; run a classifier attack")
        samples.append(r_a)
    return np.asarray(samples)


def estimate_bound(cfg: ExperimentConfig, records: list[TrialRecord], kind: str):
    """Evaluate one bound estimator over the run's trial-aligned samples."""
    if not records:
        raise ValueError("need at least one trial record")
    r_tilde = np.asarray([rec.r_tilde for rec in records])
    if kind == "bh_baseline":
        return bounds_mod.bh_baseline(cfg.q, cfg.n0, cfg.n, trials=len(records))
    if kind == "classifier_loo":
        raise ValueError(
            "bound 'classifier_loo' replays raw p-values, which trial records "
            "do not carry; call byzfdr.bounds.classifier_fdr_loo per trial instead"
        )
    profile = _constant_captured_profile(records, kind)
    m0 = sum(m0_i for _, m0_i in profile)
    if kind == "oracle_exact":
        return bounds_mod.oracle_fdr_exact(m0, cfg.n0, cfg.n, cfg.q, r_tilde)
    if kind == "all_ones_upper":
        allones = [rec.r_tilde_allones for rec in records]
        if any(r is None for r in allones):
            raise ValueError("bound 'all_ones_upper' needs collect_allones=True")
        return bounds_mod.all_ones_upper(m0, np.asarray(allones))
    if kind == "classifier_upper":
        if len(profile) != 1:
            raise ValueError("bound 'classifier_upper' covers exactly one captured node")
        r_a = _local_count_samples(records, 0, kind)
        return bounds_mod.classifier_fdr_upper(
            m0, cfg.n0, cfg.n, cfg.node_size, cfg.q, r_a, r_tilde
        )
    if kind == "distributed_upper":
        per_node = [
            (m0_i, _local_count_samples(records, pos, kind))
            for pos, (_, m0_i) in enumerate(profile)
        ]
        return bounds_mod.distributed_fdr_upper(per_node, r_tilde, cfg.q, cfg.d, cfg.n, cfg.n0)
    if kind == "shuffling_upper":
        m = len(profile) * cfg.node_size
        return bounds_mod.shuffling_fdr_upper(m0, m - m0, m, cfg.n, cfg.q, r_tilde)
    raise ValueError(f"unknown bound kind {kind!r}; expected one of {bounds_mod.BOUND_KINDS}")


def aggregate(
    cfg: ExperimentConfig,
    records: list[TrialRecord],
    bound_kinds: tuple[str, ...] = (),
) -> AggregateStats:
    """Reduce trial records to means, standard errors, and bounds."""
    if not records:
        raise ValueError("need at least one trial record")
    fdp = np.asarray([rec.fdp for rec in records])
    power = np.asarray([rec.power_prop for rec in records])
    t = len(records)
    scale = 1.0 / np.sqrt(t) if t > 1 else 0.0
    return AggregateStats(
        mean_fdr=float(fdp.mean()),
        se_fdr=float(fdp.std(ddof=1)) * scale if t > 1 else 0.0,
        mean_power=float(power.mean()),
        se_power=float(power.std(ddof=1)) * scale if t > 1 else 0.0,
        trials=t,
        bounds=tuple(estimate_bound(cfg, records, kind) for kind in bound_kinds),
    )


def run_experiment(
    cfg: ExperimentConfig,
    bound_kinds: tuple[str, ...] = (),
) -> AggregateStats:
    """Run all trials and aggregate."""
    return aggregate(cfg, run_trials(cfg), bound_kinds)


def even_null_counts(n0: int, d: int) -> tuple[int, ...]:
    """Spread n0 nulls over d equal nodes as evenly as possible."""
    base, extra = divmod(n0, d)
    return tuple(base + 1 if node < extra else base for node in range(d))


def config_at(cfg: ExperimentConfig, axis: str, value, grid_index: int = 0) -> ExperimentConfig:
    """The sweep template specialised to one grid point.

    The ``m`` axis re-partitions the network so captured node 0 holds
    exactly m values; the ``n0`` axis re-spreads pinned per-node null
    counts evenly; the ``lambda_frac`` axis unpins the captured set.
    """
    if axis == "n0":
        n0 = int(value)
        per_node = even_null_counts(n0, cfg.d) if cfg.nulls_per_node is not None else None
        return replace(cfg, n0=n0, nulls_per_node=per_node, grid_index=grid_index)
    if axis == "m":
        m = int(value)
        if m <= 0 or cfg.n % m != 0:
            raise ValueError(f"grid value m={m} must divide n={cfg.n}")
        d = cfg.n // m
        per_node = even_null_counts(cfg.n0, d) if cfg.nulls_per_node is not None else None
        attack = replace(cfg.attack, captured_nodes=(0,))
        return replace(cfg, d=d, attack=attack, nulls_per_node=per_node, grid_index=grid_index)
    if axis == "lambda_frac":
        lam = float(value)
        attack = replace(cfg.attack, lambda_frac=lam, captured_nodes=None)
        return replace(cfg, attack=attack, grid_index=grid_index)
    raise ValueError(f"unknown sweep axis {axis!r}; expected n0, m, or lambda_frac")


def sweep(
    cfg: ExperimentConfig,
    axis: str,
    values,
    bound_kinds: tuple[str, ...] = (),
) -> list[tuple[float, AggregateStats]]:
    """One aggregated run per grid value.

    Each point runs on its own seed stream (the grid index feeds the trial
    streams), so adding or reordering points never perturbs the others.
    The ``m`` axis re-partitions the network so a single captured node (id
    0) holds exactly m p-values; the ``n0`` axis re-spreads the null counts
    when the template pins them per node.
    """
    out = []
    for grid_index, value in enumerate(values):
        point_cfg = config_at(cfg, axis, value, grid_index)
        out.append((float(value), run_experiment(point_cfg, bound_kinds)))
    return out
