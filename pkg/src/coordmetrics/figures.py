"""Render report figures to files (weights, contribution changes, CRP areas).

The CSV exports carry the same numbers; these figures exist so a batch run
leaves something a human can look at without firing up a plotting session.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .report import AnalysisReport


def _jrw_figure(report: AnalysisReport, path: Path):
    result = report.jcvpca
    joints = list(result.joints)
    x = np.arange(len(joints))
    fig, axes = plt.subplots(result.m, 2, figsize=(9, 3 * result.m), squeeze=False)
    for u in range(result.m):
        ax = axes[u][0]
        ax.bar(x - 0.2, result.jrw.jrw_a[u], width=0.4, label="reference", color="tab:blue")
        ax.bar(x + 0.2, result.jrw.jrw_b[u], width=0.4, label="comparison", color="tab:orange")
        ax.set_xticks(x, joints)
        ax.set_ylim(0, 1.05)
        ax.set_ylabel(f"PC{u + 1} |weight|")
        if u == 0:
            ax.set_title("Joint reprojection weights")
            ax.legend()
        ax = axes[u][1]
        colors = ["tab:green" if v >= 0 else "tab:red" for v in result.delta[u]]
        ax.bar(x, result.delta[u], color=colors)
        ax.axhline(0.0, color="black", linewidth=0.8)
        ax.set_xticks(x, joints)
        ax.set_ylim(-1, 1)
        ax.set_ylabel(f"PC{u + 1} change")
        if u == 0:
            ax.set_title("Contribution change (comparison - reference)")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def _crp_figure(report: AnalysisReport, idx: int, path: Path):
    result = report.jsvcrp[idx]
    joints = report.jcvpca.joints
    i, j = result.pair
    pct = result.curve_a.grid.percent
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.plot(pct, result.curve_a.values, color="tab:blue", label=f"reference ({report.metadata['reference']})")
    ax.plot(pct, result.curve_b.values, color="tab:orange", label=f"comparison ({report.metadata['comparison']})")
    ax.fill_between(
        pct,
        result.curve_a.values,
        result.curve_b.values,
        color="tab:green",
        alpha=0.3,
        label=f"area = {result.area:.1f}",
    )
    ax.set_xlabel("movement duration (%)")
    ax.set_ylabel("CRP (deg)")
    ax.set_title(f"CRP {joints[i]} vs {joints[j]}")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def _baseline_figure(report: AnalysisReport, path: Path):
    base = report.baseline
    result = report.jcvpca
    joints = list(result.joints)
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(11, 4))
    labels, means, stds, observed = [], [], [], []
    for u in range(base.jcvpca_mean.shape[0]):
        for c, joint in enumerate(joints):
            labels.append(f"PC{u + 1}\n{joint}")
            means.append(base.jcvpca_mean[u, c])
            stds.append(base.jcvpca_std[u, c])
            observed.append(result.delta[u, c])
    x = np.arange(len(labels))
    ax1.errorbar(x, means, yerr=stds, fmt="o", color="tab:blue", capsize=4, label="baseline mean +/- std")
    ax1.scatter(x, observed, color="tab:red", zorder=3, label="observed")
    ax1.set_xticks(x, labels, fontsize=8)
    ax1.axhline(0.0, color="black", linewidth=0.8)
    ax1.set_title("JcvPCA vs natural variability")
    ax1.legend(fontsize=8)

    pair_labels = [f"{joints[i]}-{joints[j]}" for i, j in base.pairs]
    areas = [r.area for r in report.jsvcrp]
    x = np.arange(len(pair_labels))
    ax2.errorbar(x, base.jsvcrp_mean, yerr=base.jsvcrp_std, fmt="o", color="tab:blue", capsize=4)
    ax2.scatter(x, areas, color="tab:red", zorder=3)
    ax2.set_xticks(x, pair_labels, fontsize=8)
    ax2.set_title("JsvCRP vs natural variability")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_figures(report: AnalysisReport, out_dir: str | Path) -> list[Path]:
    """Write all report figures as PNG files; returns the paths written."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    path = out / "jrw_weights.png"
    _jrw_figure(report, path)
    written.append(path)
    for idx, result in enumerate(report.jsvcrp):
        i, j = result.pair
        path = out / f"crp_pair_{i + 1}_{j + 1}.png"
        _crp_figure(report, idx, path)
        written.append(path)
    if report.baseline is not None:
        path = out / "baseline_intervals.png"
        _baseline_figure(report, path)
        written.append(path)
    return written
