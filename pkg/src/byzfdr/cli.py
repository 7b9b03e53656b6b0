"""Command-line front end.

Three subcommands:

* ``simulate``: run a preset or a config-file experiment and emit the
  results CSV. Settings resolve field-wise with CLI flags beating the
  config file, which beats the preset defaults.
* ``presets``: list the canned experiment plans.
* ``bound``: re-evaluate a bound estimator from a trial dump written by
  ``simulate --dump-out``.

Config files are flat ``key = value`` lines whose keys mirror the
ExperimentConfig fields (an ``[experiment]`` section header is accepted
but not required), e.g.::

    n = 2000
    d = 5
    n0 = 1600
    q = 0.05
    attack = bh_classifier
    captured_nodes = 0
    nulls_per_node = 320, 320, 320, 320, 320
    axis = n0
    values = 1000, 1400, 1600, 1800
    bounds = bh_baseline, classifier_upper
"""

from __future__ import annotations

import argparse
import configparser
import sys
from dataclasses import replace

from .bounds import BOUND_KINDS
from .defense import DEFENSES
from .model import ATTACK_MODELS, AltMeanDistribution, AttackConfig
from .presets import PRESETS, PresetRun, get_preset, run_config
from .reportio import (
    format_float,
    read_trial_dump,
    results_rows,
    write_results_csv,
    write_trial_dump,
)
from .sim import (
    ExperimentConfig,
    aggregate,
    config_at,
    estimate_bound,
    run_trials,
)

_INT_KEYS = ("n", "d", "n0", "trials", "seed")
_FLOAT_KEYS = ("q", "lambda_frac", "alt_lo", "alt_hi")
_KNOWN_KEYS = _INT_KEYS + _FLOAT_KEYS + (
    "attack",
    "defense",
    "captured_nodes",
    "nulls_per_node",
    "axis",
    "values",
    "bounds",
    "collect_allones",
)


def _parse_int_list(text: str) -> tuple[int, ...]:
    items = [part.strip() for part in text.split(",") if part.strip()]
    return tuple(int(part) for part in items)


def _parse_float_list(text: str) -> tuple[float, ...]:
    items = [part.strip() for part in text.split(",") if part.strip()]
    return tuple(float(part) for part in items)


def load_config(path: str) -> dict:
    """Parse the flat key-value config file into a settings dict."""
    with open(path) as fh:
        text = fh.read()
    parser = configparser.ConfigParser()
    try:
        try:
            parser.read_string(text)
        except configparser.MissingSectionHeaderError:
            # Bare key = value file; wrap it in the section configparser wants.
            parser = configparser.ConfigParser()
            parser.read_string("[experiment]\n" + text)
    except configparser.Error as exc:
        raise ValueError(f"config file {path!r}: {exc}") from exc
    if not parser.has_section("experiment"):
        raise ValueError(f"config file {path!r} needs flat keys or an [experiment] section")
    section = parser["experiment"]
    settings: dict = {}
    for key in section:
        if key not in _KNOWN_KEYS:
            known = ", ".join(_KNOWN_KEYS)
            raise ValueError(f"unknown config key {key!r}; known keys: {known}")
        raw = section[key]
        if key in _INT_KEYS:
            settings[key] = int(raw)
        elif key in _FLOAT_KEYS:
            settings[key] = float(raw)
        elif key in ("captured_nodes", "nulls_per_node"):
            settings[key] = _parse_int_list(raw)
        elif key == "values":
            settings[key] = _parse_float_list(raw)
        elif key == "bounds":
            kinds = tuple(part.strip() for part in raw.split(",") if part.strip())
            for kind in kinds:
                if kind not in BOUND_KINDS:
                    raise ValueError(
                        f"unknown bound kind {kind!r}; expected one of {BOUND_KINDS}"
                    )
            settings[key] = kinds
        elif key == "collect_allones":
            settings[key] = section.getboolean(key)
        else:
            settings[key] = raw.strip()
    return settings


def _apply_settings(base: ExperimentConfig, settings: dict) -> ExperimentConfig:
    """Overlay parsed config-file settings onto a base config, field-wise."""
    cfg = base
    plain = {k: settings[k] for k in ("n", "d", "n0", "q", "trials") if k in settings}
    if plain:
        cfg = replace(cfg, **plain)
    if "seed" in settings:
        cfg = replace(cfg, master_seed=settings["seed"])
    if "alt_lo" in settings or "alt_hi" in settings:
        alt = AltMeanDistribution(
            settings.get("alt_lo", cfg.alt.lo), settings.get("alt_hi", cfg.alt.hi)
        )
        cfg = replace(cfg, alt=alt)
    attack = cfg.attack
    if "lambda_frac" in settings:
        attack = replace(attack, lambda_frac=settings["lambda_frac"])
    if "captured_nodes" in settings:
        attack = replace(attack, captured_nodes=settings["captured_nodes"] or None)
    if attack is not cfg.attack:
        cfg = replace(cfg, attack=attack)
    if "nulls_per_node" in settings:
        cfg = replace(cfg, nulls_per_node=settings["nulls_per_node"] or None)
    if "collect_allones" in settings:
        cfg = replace(cfg, collect_allones=settings["collect_allones"])
    return cfg


def _resolve_runs(preset_runs, settings: dict, args) -> list[PresetRun]:
    """Collapse to a single run when the file or flags pick the attack or
    defense; preset bound lists are dropped on such overrides since they
    are attack-specific (the ``bounds`` key can restore them)."""
    overridden = (
        args.attack is not None
        or args.defense is not None
        or "attack" in settings
        or "defense" in settings
        or "bounds" in settings
    )
    if not overridden:
        return list(preset_runs)
    first = preset_runs[0]
    attack = args.attack or settings.get("attack", first.attack)
    defense = args.defense or settings.get("defense", first.defense)
    bounds = settings.get("bounds", ())
    return [PresetRun(attack, defense, tuple(bounds))]


def cmd_simulate(args) -> int:
    settings = load_config(args.config) if args.config else {}
    if args.preset:
        preset = get_preset(args.preset)
        base = preset.base(args.paper_scale)
        axis: str | None = preset.axis
        values = list(preset.values(args.paper_scale))
        preset_runs: tuple[PresetRun, ...] = preset.runs
    else:
        if "n" not in settings or "n0" not in settings:
            raise ValueError("a config file with at least n and n0 is required without --preset")
        base = ExperimentConfig(
            n=settings["n"],
            d=settings.get("d", 1),
            n0=settings["n0"],
            q=settings.get("q", 0.05),
            attack=AttackConfig(model="none"),
        )
        axis = None
        values = []
        preset_runs = (PresetRun("none", "none"),)

    base = _apply_settings(base, settings)
    if "axis" in settings:
        axis = settings["axis"]
    if "values" in settings:
        values = list(settings["values"])
    if axis is not None and not values:
        raise ValueError(f"sweep axis {axis!r} needs a non-empty values list")
    runs = _resolve_runs(preset_runs, settings, args)
    if args.seed is not None:
        base = replace(base, master_seed=args.seed)
    if args.trials is not None:
        base = replace(base, trials=args.trials)

    if args.dump_out and (len(runs) != 1 or (axis is not None and len(values) != 1)):
        raise ValueError("--dump-out needs a single run at a single grid point")

    rows = []
    for run in runs:
        cfg = replace(
            base,
            attack=replace(base.attack, model=run.attack),
            defense=run.defense,
            collect_allones=base.collect_allones or "all_ones_upper" in run.bound_kinds,
        )
        if axis is None:
            points = [(float(cfg.n0), cfg)]
        else:
            points = [
                (float(value), config_at(cfg, axis, value, grid_index))
                for grid_index, value in enumerate(values)
            ]
        for axis_value, point_cfg in points:
            records = run_trials(point_cfg)
            stats = aggregate(point_cfg, records, run.bound_kinds)
            rows.extend(
                results_rows(axis_value, run.attack, run.defense, stats, base.master_seed)
            )
            if args.dump_out:
                with open(args.dump_out, "w", newline="") as fh:
                    write_trial_dump(fh, point_cfg, records)

    if args.out:
        with open(args.out, "w", newline="") as fh:
            write_results_csv(fh, rows)
    else:
        write_results_csv(sys.stdout, rows)
    return 0


def cmd_presets(args) -> int:
    for name in sorted(PRESETS):
        preset = PRESETS[name]
        base = preset.desk_base
        print(f"{name}: {preset.description}")
        print(
            f"  base: n={base.n} d={base.d} n0={base.n0} q={base.q} "
            f"alt=({base.alt.lo}, {base.alt.hi}) trials={base.trials} "
            f"(paper scale: n={preset.paper_base.n})"
        )
        desk = ", ".join(str(v) for v in preset.desk_values)
        paper = ", ".join(str(v) for v in preset.paper_values)
        print(f"  axis {preset.axis}: desk [{desk}] / paper [{paper}]")
        for run in preset.runs:
            bounds = f" bounds: {', '.join(run.bound_kinds)}" if run.bound_kinds else ""
            print(f"  run: attack={run.attack} defense={run.defense}{bounds}")
    return 0


def cmd_bound(args) -> int:
    with open(args.dump, newline="") as fh:
        cfg, records = read_trial_dump(fh)
    estimate = estimate_bound(cfg, records, args.kind)
    out = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        writer_rows = [
            ("bound_kind", "bound_value", "bound_se", "trials"),
            (
                estimate.kind,
                format_float(estimate.value),
                format_float(estimate.std_error),
                str(estimate.trials),
            ),
        ]
        for row in writer_rows:
            out.write(",".join(row) + "\n")
    finally:
        if args.out:
            out.close()
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="byzfdr",
        description=(
            "Monte Carlo simulator for distributed multiple testing with FDR "
            "control under Byzantine p-value rewriting"
        ),
    )
    sub = parser.add_subparsers(dest="command")

    sim = sub.add_parser("simulate", help="run an experiment and emit the results CSV")
    sim.add_argument("config", nargs="?", help="flat key-value config file")
    sim.add_argument("--preset", help="start from a canned experiment plan")
    sim.add_argument("--seed", type=int, help="master seed (beats config file and preset)")
    sim.add_argument("--trials", type=int, help="Monte Carlo trials per grid point")
    sim.add_argument("--out", help="write the results CSV here instead of stdout")
    sim.add_argument("--attack", choices=ATTACK_MODELS, help="override the attack model")
    sim.add_argument("--defense", choices=DEFENSES, help="override the defense")
    sim.add_argument("--format", choices=("csv",), default="csv", help="output format")
    sim.add_argument(
        "--paper-scale",
        action="store_true",
        help="use the original problem sizes (n=10^4; minutes, not seconds)",
    )
    sim.add_argument(
        "--dump-out",
        help="also write per-trial records (single run, single grid point only)",
    )

    sub.add_parser("presets", help="list the canned experiment plans")

    bound = sub.add_parser("bound", help="evaluate a bound estimator from a trial dump")
    bound.add_argument("--dump", required=True, help="trial dump written by simulate --dump-out")
    bound.add_argument("--kind", required=True, choices=BOUND_KINDS)
    bound.add_argument("--out", help="write the estimate here instead of stdout")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help()
        return 2
    try:
        if args.command == "simulate":
            return cmd_simulate(args)
        if args.command == "presets":
            return cmd_presets(args)
        return cmd_bound(args)
    except (ValueError, KeyError, OSError) as exc:
        # OSError args are (errno, strerror); str() restores the filename.
        message = str(exc) if isinstance(exc, OSError) else (exc.args[0] if exc.args else exc)
        print(f"byzfdr: error: {message}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
