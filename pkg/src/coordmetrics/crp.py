"""Phase angles and continuous relative phase (CRP) between joint pairs.

For each joint the range-normalized position and velocity form a phase
portrait; the phase angle is the quadrant-aware angle of the
(position, velocity) point, unwrapped along time so consecutive samples
never jump by more than pi. The CRP of a joint pair is the difference of
the two phase angles, oriented so that a positive value means the second
joint of the pair is ahead in its movement cycle (it leads).
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .dataset import (
    Dataset,
    NormalizedGrid,
    Repetition,
    compute_velocity,
    range_normalize,
    time_normalize_linear,
)
from .errors import DegenerateRangeError, MetricError, ParameterError


@dataclass(frozen=True)
class PhaseAngleSeries:
    """Unwrapped phase angle of one joint, radians, on a normalized grid."""

    values: np.ndarray
    degenerate: bool = False
    grid: NormalizedGrid | None = None


@dataclass(frozen=True)
class CrpCurve:
    """CRP of one joint pair on a normalized grid, degrees.

    ``pair`` holds 0-based joint indices in the order the curve was
    computed; all-pairs enumerations emit them with i < j.
    ``degenerate_joints`` lists joints whose phase was forced to zero
    because position or velocity had no range.
    """

    grid: NormalizedGrid
    values: np.ndarray
    pair: tuple[int, int]
    n_reps_averaged: int = 1
    degenerate_joints: tuple[int, ...] = ()

    def __post_init__(self):
        if not np.isfinite(self.values).all():
            raise MetricError("CRP curve contains non-finite values")
        if len(self.values) != len(self.grid):
            raise MetricError("CRP curve length does not match its grid")


def phase_angle(theta_norm: np.ndarray, vel_norm: np.ndarray) -> PhaseAngleSeries:
    """Phase angle of one joint from range-normalized position and velocity.

    Uses the two-argument arctangent of (velocity, position) so all four
    quadrants are distinguished, then unwraps along time. A sample where
    position and velocity are both exactly zero carries the previous
    sample's angle (zero at the start) and flags the series as degenerate.

    The only fragile part of unwrapping is its integration constant: the
    first sample's principal branch. Movements start near rest, where the
    portrait point can sit next to the arctangent branch cut (negative
    position, zero velocity) and measurement noise flips the whole curve by
    360 deg. The branch is therefore anchored at the first sample whose
    portrait angle lies within 90 deg of the positive position axis, a
    quarter turn away from the cut; for range-normalized inputs such a
    sample always exists because the position attains +1. The shift is an
    exact multiple of 2 pi and is zero whenever the first sample is already
    unambiguous.
    """
    pos = np.asarray(theta_norm, dtype=float)
    vel = np.asarray(vel_norm, dtype=float)
    if pos.shape != vel.shape:
        raise ParameterError("position and velocity series must have the same shape")
    raw = np.arctan2(vel, pos)
    undefined = (pos == 0.0) & (vel == 0.0)
    if undefined.any():
        for idx in np.flatnonzero(undefined):
            raw[idx] = raw[idx - 1] if idx > 0 else 0.0
    phi = np.unwrap(raw)
    away_from_cut = np.abs(raw) <= np.pi / 2
    anchor = int(np.argmax(away_from_cut)) if away_from_cut.any() else 0
    phi -= 2.0 * np.pi * np.round((phi[anchor] - raw[anchor]) / (2.0 * np.pi))
    return PhaseAngleSeries(values=phi, degenerate=bool(undefined.any()))


def _joint_phase(positions: np.ndarray, velocities: np.ndarray) -> tuple[np.ndarray, bool]:
    """Phase of one joint with the constant-zero policy for degenerate ranges.

    A joint whose position or velocity has no range is treated as not
    moving: its phase is identically zero. This keeps the pair computable
    but does not reflect an actual phase relationship, hence the flag.
    """
    try:
        pos_norm = range_normalize(positions)
        vel_norm = range_normalize(velocities)
    except DegenerateRangeError:
        return np.zeros(len(positions)), True
    return phase_angle(pos_norm, vel_norm).values, False


def crp_pair(rep: Repetition, i: int, j: int, grid: NormalizedGrid | None = None) -> CrpCurve:
    """CRP curve of joints (i, j) for one repetition.

    Pipeline: resample onto the grid, differentiate on the normalized time
    axis, range-normalize position and velocity per joint, extract phase
    angles, subtract. The sign is oriented so a positive CRP means joint j
    leads joint i.

    Raises
    ------
    MetricError
        If both joints are degenerate (no range in position or velocity).
    """
    if i == j:
        raise ParameterError("CRP needs two distinct joints")
    if not (0 <= i < rep.n_joints and 0 <= j < rep.n_joints):
        raise ParameterError(
            f"joint indices ({i}, {j}) out of range for {rep.n_joints} joints"
        )
    grid = grid or NormalizedGrid()
    resampled = time_normalize_linear(rep, grid)
    vel = compute_velocity(resampled).velocities
    phi_i, degenerate_i = _joint_phase(resampled.angles[:, i], vel[:, i])
    phi_j, degenerate_j = _joint_phase(resampled.angles[:, j], vel[:, j])
    if degenerate_i and degenerate_j:
        raise MetricError(f"both joints ({i}, {j}) are degenerate; CRP is undefined")
    flagged = tuple(idx for idx, bad in ((i, degenerate_i), (j, degenerate_j)) if bad)
    return CrpCurve(
        grid=grid,
        values=np.degrees(phi_i - phi_j),
        pair=(i, j),
        n_reps_averaged=1,
        degenerate_joints=flagged,
    )


def mean_crp(ds: Dataset, i: int, j: int, grid: NormalizedGrid | None = None) -> CrpCurve:
    """Pointwise mean CRP curve of joints (i, j) over all repetitions."""
    grid = grid or NormalizedGrid()
    curves = []
    for idx, rep in enumerate(ds.reps):
        try:
            curves.append(crp_pair(rep, i, j, grid))
        except (MetricError, ParameterError) as exc:
            raise MetricError(
                f"dataset {ds.name!r}, repetition {idx}: {exc}"
            ) from exc
    values = np.mean([c.values for c in curves], axis=0)
    flagged = tuple(sorted({idx for c in curves for idx in c.degenerate_joints}))
    return CrpCurve(
        grid=grid,
        values=values,
        pair=(i, j),
        n_reps_averaged=ds.n_reps,
        degenerate_joints=flagged,
    )


@dataclass(frozen=True)
class NoiseRatio:
    """Noise-to-range ratio of one joint; above 1 the CRP is not meaningful."""

    ratio: float
    exceeds: bool
    degenerate: bool


def noise_ratio_guard(rep: Repetition, i: int, noise_estimate: float) -> NoiseRatio:
    """Ratio of a caller-supplied noise amplitude to a joint's range of motion.

    Range normalization amplifies noise on joints that barely move, so a
    ratio above 1 flags the joint as uninformative for CRP. A joint with
    zero range yields an infinite ratio and a degenerate flag.
    """
    if noise_estimate < 0:
        raise ParameterError("noise_estimate must be >= 0")
    series = rep.angles[:, i]
    extent = float(series.max() - series.min())
    if extent == 0.0:
        return NoiseRatio(ratio=math.inf, exceeds=True, degenerate=True)
    ratio = noise_estimate / extent
    return NoiseRatio(ratio=ratio, exceeds=ratio > 1.0, degenerate=False)


def write_curve_csv(curve: CrpCurve, path: str | Path, joints: tuple[str, ...] | None = None) -> Path:
    """Write one CRP curve as ``percent,crp_deg`` plus a JSON metadata sidecar."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["percent", "crp_deg"])
        for pct, val in zip(curve.grid.percent, curve.values):
            writer.writerow([repr(float(pct)), repr(float(val))])
    meta = {
        "pair": list(curve.pair),
        "n_reps": curve.n_reps_averaged,
        "flags": {"degenerate_joints": list(curve.degenerate_joints)},
    }
    if joints is not None:
        meta["joint_names"] = [joints[curve.pair[0]], joints[curve.pair[1]]]
    path.with_suffix(".json").write_text(json.dumps(meta, indent=2, sort_keys=True))
    return path
