"""Machine-readable analysis reports and plot-ready CSV exports.

JSON is the canonical output; CSV files exist solely as plot transport.
Every report carries a conventions block (centering choice, subtraction
orientation, CRP sign, integration axis, unwrapping) so any number in it
can be traced back to the exact pipeline that produced it.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .baseline import BaselineReport, SignificanceVerdict
from .jcvpca import JcvPcaResult
from .jsvcrp import JsvCrpResult

CONVENTIONS = {
    "centering": "comparison dataset centered with the reference model mean",
    "delta_orientation": "comparison minus reference; positive = joint used more in comparison",
    "variance_weighting": "weighted delta rows scaled by the reference explained-variance ratio",
    "eigenvector_sign": "largest absolute component non-negative",
    "phase_angle": "atan2(normalized velocity, normalized position), unwrapped along time",
    "crp_sign": "positive = second joint of the pair leads",
    "crp_unit": "degrees",
    "integration_axis": "normalized time [0, 1]; percent-axis value = 100 x area",
    "degenerate_joint_policy": "phase forced to constant zero, joint flagged",
}


@dataclass(frozen=True)
class AnalysisReport:
    """One comparison run: metadata, both metrics, optional baseline/verdicts."""

    metadata: dict
    jcvpca: JcvPcaResult
    jsvcrp: list[JsvCrpResult]
    baseline: BaselineReport | None = None
    verdicts: dict | None = None
    conventions: dict = field(default_factory=lambda: dict(CONVENTIONS))


def build_metadata(
    reference: str,
    comparison: str,
    joints: tuple[str, ...],
    unit: str,
    m: int,
    p: int | None,
    grid_size: int,
    extra: dict | None = None,
) -> dict:
    meta = {
        "reference": reference,
        "comparison": comparison,
        "joints": list(joints),
        "angle_unit": unit,
        "m": m,
        "p": p,
        "grid_size": grid_size,
        "tool_version": __version__,
    }
    if extra:
        meta.update(extra)
    return meta


def _jsonify(value):
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, dict):
        return {k: _jsonify(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonify(v) for v in value]
    return value


def canonical_json(document: dict) -> str:
    """Serialize with sorted keys and fixed separators; round-trip stable."""
    return json.dumps(_jsonify(document), sort_keys=True, indent=2, separators=(",", ": "))


def _jcvpca_dict(result: JcvPcaResult) -> dict:
    return {
        "reference": result.reference_name,
        "comparison": result.comparison_name,
        "m": result.m,
        "p": result.p,
        "joints": list(result.joints),
        "jrw_a": result.jrw.jrw_a.tolist(),
        "jrw_b": result.jrw.jrw_b.tolist(),
        "explained_variance_a": result.jrw.explained_variance_a.tolist(),
        "explained_variance_b": result.jrw.explained_variance_b.tolist(),
        "delta": result.delta.tolist(),
        "weighted_delta": result.weighted_delta.tolist(),
        "pca_flags": list(result.jrw.model_a.flags),
    }


def _jsvcrp_dict(result: JsvCrpResult) -> dict:
    return {
        "pair": list(result.pair),
        "area": result.area,
        "area_percent_axis": result.area_percent_axis,
        "axis_convention": "normalized_time_0_1",
        "n_reps_a": result.curve_a.n_reps_averaged,
        "n_reps_b": result.curve_b.n_reps_averaged,
        "flags": {
            "degenerate_joints_a": list(result.curve_a.degenerate_joints),
            "degenerate_joints_b": list(result.curve_b.degenerate_joints),
        },
    }


def _verdict_dict(verdict: SignificanceVerdict) -> dict:
    return {
        "metric": verdict.metric,
        "rule": verdict.rule,
        "labels": verdict.labels(),
    }


def report_to_dict(report: AnalysisReport) -> dict:
    document = {
        "metadata": dict(report.metadata),
        "conventions": dict(report.conventions),
        "jcvpca": _jcvpca_dict(report.jcvpca),
        "jsvcrp": [_jsvcrp_dict(r) for r in report.jsvcrp],
        "baseline": report.baseline.to_dict() if report.baseline else None,
        "verdicts": _jsonify(report.verdicts) if report.verdicts else None,
    }
    return document


def render_json(report: AnalysisReport) -> str:
    """Canonical JSON document for one analysis run."""
    return canonical_json(report_to_dict(report))


# ---------------------------------------------------------------------------
# CSV exports (plot transport)
# ---------------------------------------------------------------------------

def _write_matrix(path: Path, matrix: np.ndarray, joints: tuple[str, ...] | list[str]):
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["pc", *joints])
        for row_idx, row in enumerate(matrix, start=1):
            writer.writerow([row_idx, *(repr(float(v)) for v in row)])


def export_plot_data(report: AnalysisReport, out_dir: str | Path) -> list[Path]:
    """Write every matrix, curve pair, and baseline summary as CSV files.

    Emits ``jrw_a.csv``, ``jrw_b.csv``, ``jcvpca_delta.csv``,
    ``jcvpca_weighted_delta.csv``, one ``crp_pair_<i>_<j>.csv`` per joint
    pair (percent axis, both curves, absolute difference), and
    ``baseline_summary.csv`` when a baseline is present. Values are written
    at full round-trip precision; re-exports overwrite deterministically.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    joints = list(report.jcvpca.joints)
    written: list[Path] = []

    for name, matrix in (
        ("jrw_a.csv", report.jcvpca.jrw.jrw_a),
        ("jrw_b.csv", report.jcvpca.jrw.jrw_b),
        ("jcvpca_delta.csv", report.jcvpca.delta),
        ("jcvpca_weighted_delta.csv", report.jcvpca.weighted_delta),
    ):
        path = out / name
        _write_matrix(path, matrix, joints)
        written.append(path)

    for result in report.jsvcrp:
        i, j = result.pair
        path = out / f"crp_pair_{i + 1}_{j + 1}.csv"
        with path.open("w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle)
            writer.writerow(["percent", "crp_ref_deg", "crp_cmp_deg", "abs_diff_deg"])
            for pct, ref, cmp_, diff in zip(
                result.curve_a.grid.percent,
                result.curve_a.values,
                result.curve_b.values,
                result.difference_profile,
            ):
                writer.writerow([repr(float(pct)), repr(float(ref)), repr(float(cmp_)), repr(float(diff))])
        written.append(path)

    if report.baseline is not None:
        path = out / "baseline_summary.csv"
        with path.open("w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle)
            writer.writerow(["metric", "element", "mean", "std", "sem"])
            b = report.baseline
            for u in range(b.jcvpca_mean.shape[0]):
                for c, joint in enumerate(joints):
                    writer.writerow(
                        [
                            "jcvpca",
                            f"pc{u + 1}:{joint}",
                            repr(float(b.jcvpca_mean[u, c])),
                            repr(float(b.jcvpca_std[u, c])),
                            repr(float(b.jcvpca_sem[u, c])),
                        ]
                    )
            for idx, (i, j) in enumerate(b.pairs):
                writer.writerow(
                    [
                        "jsvcrp",
                        f"{joints[i]}-{joints[j]}",
                        repr(float(b.jsvcrp_mean[idx])),
                        repr(float(b.jsvcrp_std[idx])),
                        repr(float(b.jsvcrp_sem[idx])),
                    ]
                )
        written.append(path)
    return written


# ---------------------------------------------------------------------------
# Human summary
# ---------------------------------------------------------------------------

def human_summary(report: AnalysisReport) -> str:
    """Console summary: signed percentages per joint per component, areas
    per pair, and verdict tags when a baseline is available. Percentages
    are rounded here only; machine outputs keep full precision."""
    lines = []
    meta = report.metadata
    lines.append(
        f"JcvPCA ({meta['reference']} -> {meta['comparison']}, m={meta['m']}, "
        "positive = used more in comparison):"
    )
    result = report.jcvpca
    jcv_labels = None
    if report.verdicts and "jcvpca" in report.verdicts:
        jcv_labels = np.asarray(report.verdicts["jcvpca"]["labels"])
    for u in range(result.m):
        parts = []
        for c, joint in enumerate(result.joints):
            pct = round(result.delta[u, c] * 100)
            tag = ""
            if jcv_labels is not None and jcv_labels[u, c] == "exceeds_variability":
                tag = "*"
            parts.append(f"{joint} {pct:+d}%{tag}")
        lines.append(f"  PC{u + 1} (var {result.jrw.explained_variance_a[u]:.0%}): " + ", ".join(parts))
    lines.append("JsvCRP areas (deg x normalized time; percent axis = 100x):")
    for idx, res in enumerate(report.jsvcrp):
        i, j = res.pair
        pair_name = f"{result.joints[i]}-{result.joints[j]}"
        tag = ""
        if report.verdicts and "jsvcrp" in report.verdicts:
            label = report.verdicts["jsvcrp"][idx]["labels"]
            tag = " [exceeds natural variability]" if label == "exceeds_variability" else " [within natural variability]"
        lines.append(f"  {pair_name}: {res.area:.2f}{tag}")
    if jcv_labels is not None:
        lines.append("  (* = exceeds natural variability)")
    return "\n".join(lines)
