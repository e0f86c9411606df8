"""Command-line entry point for reproducible batch runs.

Subcommands: ``simulate`` writes the two-joint validation datasets as CSV
directories, ``compare`` runs both metrics (optionally with a baseline and
verdicts) between a reference and a comparison directory, ``baseline``
computes the natural-variability report alone. Exit codes: 0 success,
2 input or configuration problem, 3 metric computation failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .baseline import DEFAULT_N_SPLITS, classify, shuffle_split_baseline
from .dataset import NormalizedGrid, SimConfig, generate_simulated, load_dataset, write_dataset_csv
from .errors import (
    ConfigError,
    CoordMetricsError,
    ParameterError,
    SchemaError,
    ValidationError,
)
from .figures import render_figures
from .jcvpca import compute_jcvpca
from .jsvcrp import jsvcrp_all_pairs
from .report import (
    AnalysisReport,
    build_metadata,
    canonical_json,
    export_plot_data,
    human_summary,
    render_json,
)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_COMPUTE = 3

_CONFIG_TYPES = {
    "ref": str,
    "cmp": str,
    "unit": str,
    "p": int,
    "m": int,
    "grid": int,
    "seed": int,
    "splits": int,
    "rule": str,
    "out": str,
    "amplitude": float,
    "omega": float,
    "duration": float,
    "samples": int,
    "noise": float,
    "reps": int,
    "with_baseline": lambda s: s.lower() in ("1", "true", "yes"),
    "figures": lambda s: s.lower() in ("1", "true", "yes"),
}


def _load_config_file(path: str) -> dict:
    """Parse a key=value config file; keys mirror the CLI flags, flags win."""
    values = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in _CONFIG_TYPES:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            values[key] = _CONFIG_TYPES[key](value.strip("\"'"))
        except ValueError as exc:
            raise ConfigError(f"{path}:{lineno}: {exc}") from None
    return values


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coordmetrics",
        description="Quantify inter-joint coordination changes between kinematic datasets.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="write the two-joint sine validation datasets")
    sim.add_argument("--out", default=".", help="output directory (sim_A/, sim_B/ created inside)")
    sim.add_argument("--amplitude", type=float, default=1.0, help="first-joint amplitude")
    sim.add_argument("--omega", type=float, default=SimConfig().omega, help="angular frequency (rad/s)")
    sim.add_argument("--duration", type=float, default=1.0, help="movement duration (s)")
    sim.add_argument("--samples", type=int, default=1000, help="samples per repetition")
    sim.add_argument("--noise", type=float, default=0.0, help="Gaussian noise std (rad)")
    sim.add_argument("--reps", type=int, default=1, help="repetitions per dataset")
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--config", help="key=value config file (flags win)")

    def common(p: argparse.ArgumentParser, needs_cmp: bool):
        p.add_argument("--ref", required=True, help="reference dataset directory")
        if needs_cmp:
            p.add_argument("--cmp", required=True, help="comparison dataset directory")
        p.add_argument("--unit", choices=("deg", "rad"), default="deg", help="angle unit of the CSV data")
        p.add_argument("--p", type=int, default=1, help="task dimensionality")
        p.add_argument("--m", type=int, default=None, help="retained components (default p+1)")
        p.add_argument("--grid", type=int, default=101, help="normalized grid size")
        p.add_argument("--seed", type=int, default=0, help="baseline shuffle seed")
        p.add_argument("--splits", type=int, default=DEFAULT_N_SPLITS, help="baseline shuffle-splits")
        p.add_argument("--rule", choices=("std", "sem"), default="std", help="variability threshold rule")
        p.add_argument("--out", default="coordmetrics_out", help="output directory")
        p.add_argument("--config", help="key=value config file (flags win)")

    comp = sub.add_parser("compare", help="run JcvPCA and JsvCRP between two dataset directories")
    common(comp, needs_cmp=True)
    comp.add_argument(
        "--with-baseline",
        action="store_true",
        help="also shuffle-split the reference directory and classify the results",
    )
    comp.add_argument(
        "--no-figures",
        dest="figures",
        action="store_false",
        help="skip PNG figure rendering",
    )

    base = sub.add_parser("baseline", help="natural-variability baseline of one dataset directory")
    common(base, needs_cmp=False)
    return parser


def _apply_config(args: argparse.Namespace, argv: list[str]) -> argparse.Namespace:
    """Fill unset values from the config file; explicit flags keep priority."""
    if not getattr(args, "config", None):
        return args
    file_values = _load_config_file(args.config)
    given = {token.split("=", 1)[0].lstrip("-").replace("-", "_") for token in argv if token.startswith("--")}
    for key, value in file_values.items():
        if key not in given and hasattr(args, key):
            setattr(args, key, value)
    return args


def _resolve_m(args: argparse.Namespace, n_joints: int) -> tuple[int, int]:
    p = args.p
    m = args.m if args.m is not None else p + 1
    if p < 1:
        raise ConfigError(f"p must be >= 1, got {p}")
    if not p <= m <= n_joints:
        raise ConfigError(
            f"need p <= m <= n (p={p}, m={m}, n={n_joints}); pick m in [{p}, {n_joints}]"
        )
    return p, m


def _cmd_simulate(args: argparse.Namespace) -> int:
    config = SimConfig(
        amplitude=args.amplitude,
        omega=args.omega,
        duration=args.duration,
        samples=args.samples,
        noise=args.noise,
        reps=args.reps,
        seed=args.seed,
    )
    ds_a, ds_b = generate_simulated(config)
    out = Path(args.out)
    paths_a = write_dataset_csv(ds_a, out / "sim_A")
    paths_b = write_dataset_csv(ds_b, out / "sim_B")
    print(
        f"simulated datasets written: {out / 'sim_A'} ({len(paths_a)} reps), "
        f"{out / 'sim_B'} ({len(paths_b)} reps)"
    )
    print(
        f"parameters: amplitude={config.amplitude} omega={config.omega} "
        f"duration={config.duration}s samples={config.samples} noise={config.noise} "
        f"reps={config.reps} seed={config.seed} unit=rad"
    )
    return EXIT_OK


def _cmd_compare(args: argparse.Namespace) -> int:
    ref = load_dataset(args.ref, unit=args.unit)
    cmp_ = load_dataset(args.cmp, unit=args.unit)
    p, m = _resolve_m(args, ref.n_joints)
    grid = NormalizedGrid.with_size(args.grid)

    result = compute_jcvpca(ref, cmp_, m, p=p)
    pair_results = jsvcrp_all_pairs(ref, cmp_, grid)
    baseline = None
    verdicts = None
    if args.with_baseline:
        baseline = shuffle_split_baseline(
            ref, n_splits=args.splits, seed=args.seed, m=m, grid=grid
        )
        verdicts = {
            "jcvpca": {
                "metric": "jcvpca",
                "rule": args.rule,
                "labels": classify(result, baseline, args.rule).labels(),
            },
            "jsvcrp": [
                {
                    "metric": "jsvcrp",
                    "rule": args.rule,
                    "pair": list(res.pair),
                    "labels": classify(res, baseline, args.rule).labels(),
                }
                for res in pair_results
            ],
        }

    report = AnalysisReport(
        metadata=build_metadata(
            reference=ref.name,
            comparison=cmp_.name,
            joints=ref.joints,
            unit=args.unit,
            m=m,
            p=p,
            grid_size=len(grid),
            extra={
                "reference_dir": str(args.ref),
                "comparison_dir": str(args.cmp),
                "threshold_rule": args.rule,
                "baseline_splits": args.splits if args.with_baseline else None,
                "seed": args.seed if args.with_baseline else None,
            },
        ),
        jcvpca=result,
        jsvcrp=pair_results,
        baseline=baseline,
        verdicts=verdicts,
    )
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "report.json").write_text(render_json(report), encoding="utf-8")
    export_plot_data(report, out / "plots")
    if args.figures:
        render_figures(report, out / "figures")
    print(human_summary(report))
    print(f"report written to {out / 'report.json'}")
    return EXIT_OK


def _cmd_baseline(args: argparse.Namespace) -> int:
    ref = load_dataset(args.ref, unit=args.unit)
    p, m = _resolve_m(args, ref.n_joints)
    grid = NormalizedGrid.with_size(args.grid)
    base = shuffle_split_baseline(ref, n_splits=args.splits, seed=args.seed, m=m, grid=grid)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    document = base.to_dict()
    document["rule"] = args.rule
    (out / "baseline.json").write_text(canonical_json(document), encoding="utf-8")

    print(f"natural-variability baseline of {ref.name!r} ({base.n_splits} splits, seed {base.seed})")
    print("JcvPCA (mean +/- std | mean +/- sem):")
    for u in range(base.jcvpca_mean.shape[0]):
        for c, joint in enumerate(ref.joints):
            print(
                f"  PC{u + 1} {joint}: {base.jcvpca_mean[u, c]:+.4f} +/- {base.jcvpca_std[u, c]:.4f}"
                f" | {base.jcvpca_mean[u, c]:+.4f} +/- {base.jcvpca_sem[u, c]:.4f}"
            )
    print("JsvCRP (mean +/- std | mean +/- sem):")
    for idx, (i, j) in enumerate(base.pairs):
        print(
            f"  {ref.joints[i]}-{ref.joints[j]}: {base.jsvcrp_mean[idx]:.2f} +/- {base.jsvcrp_std[idx]:.2f}"
            f" | {base.jsvcrp_mean[idx]:.2f} +/- {base.jsvcrp_sem[idx]:.2f}"
        )
    print(f"baseline written to {out / 'baseline.json'}")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "simulate": _cmd_simulate,
        "compare": _cmd_compare,
        "baseline": _cmd_baseline,
    }
    try:
        args = _apply_config(args, argv)
        return handlers[args.command](args)
    except (SchemaError, ValidationError, ConfigError, ParameterError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except CoordMetricsError as exc:
        print(f"computation error: {exc}", file=sys.stderr)
        return EXIT_COMPUTE


if __name__ == "__main__":
    sys.exit(main())
