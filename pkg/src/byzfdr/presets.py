"""Canned experiment plans.

Each preset bundles a base configuration, a sweep axis with grids at two
scales, and the list of (attack, defense, bounds) runs to execute per grid
point. The desk grids shrink n so a full preset finishes in seconds;
``paper_scale=True`` switches to the full problem sizes (n = 10^4,
minutes of runtime). The five plans:

* ``exp1a``: one captured node holding 20% of the values, null count swept;
  label-aware and classifier attacks side by side with their bounds.
* ``exp1b``: same pair of attacks with the captured share m swept (the
  network is re-partitioned so node 0 holds exactly m values).
* ``exp2``: classifier attack with no defense, zero-resampling, and
  zero-removal, null count swept.
* ``exp3``: the rescaling and shuffling attacks, null count swept far
  enough to show the rescaling attack's rise-then-fall.
* ``exp4``: all three value-rewriting attacks across a 20-node network
  with the captured fraction swept; placement and captured sets are
  randomized per trial.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .model import AltMeanDistribution, AttackConfig
from .sim import ExperimentConfig, even_null_counts


@dataclass(frozen=True)
class PresetRun:
    """One (attack, defense) curve and the bounds attached to it."""

    attack: str
    defense: str
    bound_kinds: tuple[str, ...] = ()


@dataclass(frozen=True)
class Preset:
    name: str
    description: str
    axis: str
    desk_values: tuple[float, ...]
    paper_values: tuple[float, ...]
    runs: tuple[PresetRun, ...]
    desk_base: ExperimentConfig
    paper_base: ExperimentConfig

    def base(self, paper_scale: bool) -> ExperimentConfig:
        return self.paper_base if paper_scale else self.desk_base

    def values(self, paper_scale: bool) -> tuple[float, ...]:
        return self.paper_values if paper_scale else self.desk_values


def _single_node_base(n: int, d: int, n0: int) -> ExperimentConfig:
    """Captured node 0, per-node null counts pinned to the even spread."""
    return ExperimentConfig(
        n=n,
        d=d,
        n0=n0,
        q=0.05,
        attack=AttackConfig(model="none", captured_nodes=(0,)),
        alt=AltMeanDistribution(1.0, 1.5),
        nulls_per_node=even_null_counts(n0, d),
    )


def _network_base(n: int, n0: int) -> ExperimentConfig:
    """20-node network, random placement and captured set each trial."""
    return ExperimentConfig(
        n=n,
        d=20,
        n0=n0,
        q=0.05,
        attack=AttackConfig(model="none", lambda_frac=0.0),
        alt=AltMeanDistribution(2.5, 3.0),
    )


_ORACLE_VS_CLASSIFIER = (
    PresetRun("oracle", "none", ("bh_baseline", "oracle_exact", "all_ones_upper")),
    PresetRun("bh_classifier", "none", ("bh_baseline", "classifier_upper")),
)

PRESETS: dict[str, Preset] = {
    p.name: p
    for p in (
        Preset(
            name="exp1a",
            description=(
                "label-aware vs classifier attack, one captured node with 20% of the "
                "values, sweeping the true-null count"
            ),
            axis="n0",
            desk_values=(1000, 1400, 1600, 1800),
            paper_values=(5000, 6000, 7000, 8000, 9000),
            runs=_ORACLE_VS_CLASSIFIER,
            desk_base=_single_node_base(2000, 5, 1600),
            paper_base=_single_node_base(10_000, 5, 8000),
        ),
        Preset(
            name="exp1b",
            description=(
                "label-aware vs classifier attack with 80% true nulls, sweeping the "
                "captured value count m (node 0 re-sized to hold exactly m)"
            ),
            axis="m",
            desk_values=(100, 200, 400, 500, 1000),
            paper_values=(500, 1000, 2000, 2500, 5000),
            runs=_ORACLE_VS_CLASSIFIER,
            desk_base=_single_node_base(2000, 5, 1600),
            paper_base=_single_node_base(10_000, 5, 8000),
        ),
        Preset(
            name="exp2",
            description=(
                "classifier attack with no defense vs zero-resampling vs zero-removal, "
                "one captured node, sweeping the true-null count"
            ),
            axis="n0",
            desk_values=(1000, 1400, 1600, 1800),
            paper_values=(5000, 6000, 7000, 8000, 9000),
            runs=(
                PresetRun("bh_classifier", "none", ("bh_baseline",)),
                PresetRun("bh_classifier", "resample_zeros", ("bh_baseline",)),
                PresetRun("bh_classifier", "remove_zeros", ("bh_baseline",)),
            ),
            desk_base=_single_node_base(2000, 5, 1600),
            paper_base=_single_node_base(10_000, 5, 8000),
        ),
        Preset(
            name="exp3",
            description=(
                "rescaling and shuffling attacks, one captured node with 20% of the "
                "values, sweeping the true-null count up to nearly n"
            ),
            axis="n0",
            desk_values=(1000, 1400, 1600, 1800, 1900, 1980),
            paper_values=(5000, 7000, 8000, 9000, 9500, 9900),
            runs=(
                PresetRun("enhanced_bh_classifier", "none"),
                PresetRun("shuffling", "none", ("shuffling_upper",)),
            ),
            desk_base=_single_node_base(2000, 5, 1600),
            paper_base=_single_node_base(10_000, 5, 8000),
        ),
        Preset(
            name="exp4",
            description=(
                "classifier, rescaling, and shuffling attacks on a 20-node network, "
                "sweeping the captured node fraction; strong alternatives (2.5, 3.0)"
            ),
            axis="lambda_frac",
            desk_values=(0.05, 0.10, 0.15, 0.20, 0.25, 0.30, 0.35, 0.40, 0.45, 0.50),
            paper_values=(0.05, 0.10, 0.15, 0.20, 0.25, 0.30, 0.35, 0.40, 0.45, 0.50),
            runs=(
                PresetRun("bh_classifier", "none"),
                PresetRun("enhanced_bh_classifier", "none"),
                PresetRun("shuffling", "none"),
            ),
            desk_base=_network_base(2000, 1600),
            paper_base=_network_base(10_000, 8000),
        ),
    )
}


def get_preset(name: str) -> Preset:
    if name not in PRESETS:
        known = ", ".join(sorted(PRESETS))
        raise KeyError(f"unknown preset {name!r}; available presets: {known}")
    return PRESETS[name]


def run_config(preset: Preset, run: PresetRun, paper_scale: bool) -> ExperimentConfig:
    """The base config specialised to one of the preset's runs."""
    base = preset.base(paper_scale)
    return replace(
        base,
        attack=replace(base.attack, model=run.attack),
        defense=run.defense,
        collect_allones="all_ones_upper" in run.bound_kinds,
    )
