"""Natural-variability baseline via repeated shuffle-splits of one dataset.

Movements are never repeated identically, so a measured metric difference
only means something relative to the variability the same condition shows
against itself. Splitting one dataset repeatedly into two random halves and
computing both metrics between the halves yields that baseline; a
comparison value outside the baseline interval indicates an actual change
in coordination.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .dataset import Dataset, NormalizedGrid
from .errors import ParameterError, ValidationError
from .jcvpca import JcvPcaResult, compute_jcvpca
from .jsvcrp import JsvCrpResult, jsvcrp_all_pairs

DEFAULT_N_SPLITS = 15

THRESHOLD_RULES = ("std", "sem")


@dataclass(frozen=True)
class BaselineReport:
    """Per-element mean/std/sem of both metrics over the shuffle-splits."""

    jcvpca_mean: np.ndarray
    jcvpca_std: np.ndarray
    jcvpca_sem: np.ndarray
    pairs: tuple[tuple[int, int], ...]
    jsvcrp_mean: np.ndarray
    jsvcrp_std: np.ndarray
    jsvcrp_sem: np.ndarray
    n_splits: int
    seed: int
    m: int
    joints: tuple[str, ...]

    def __post_init__(self):
        if self.n_splits < 2:
            raise ParameterError("n_splits must be >= 2")
        if (self.jcvpca_std < 0).any() or (self.jsvcrp_std < 0).any():
            raise ValidationError("standard deviations must be non-negative")

    def band(self, rule: str) -> tuple[np.ndarray, np.ndarray]:
        """Half-widths of the JcvPCA and JsvCRP intervals for a rule."""
        if rule == "std":
            return self.jcvpca_std, self.jsvcrp_std
        if rule == "sem":
            return self.jcvpca_sem, self.jsvcrp_sem
        raise ParameterError(f"rule must be one of {THRESHOLD_RULES}, got {rule!r}")

    def to_dict(self) -> dict:
        return {
            "joints": list(self.joints),
            "m": self.m,
            "n_splits": self.n_splits,
            "seed": self.seed,
            "jcvpca": {
                "mean": _listify(self.jcvpca_mean),
                "std": _listify(self.jcvpca_std),
                "sem": _listify(self.jcvpca_sem),
            },
            "jsvcrp": {
                "pairs": [list(p) for p in self.pairs],
                "mean": _listify(self.jsvcrp_mean),
                "std": _listify(self.jsvcrp_std),
                "sem": _listify(self.jsvcrp_sem),
            },
        }


@dataclass(frozen=True)
class SignificanceVerdict:
    """Element-wise classification of a result against a baseline interval.

    Signed JcvPCA entries are outside natural variability when they leave
    [mean - band, mean + band]. JsvCRP areas are non-negative
    dissimilarities, so only the upper bound matters: an area below the
    baseline mean means the datasets agree better than the condition agrees
    with itself, which is not a coordination change. Boundary values count
    as within. The verdict is fully reproducible from the result, the
    baseline, and the rule.
    """

    exceeds: np.ndarray
    rule: str
    metric: str

    def labels(self) -> list:
        flat = np.asarray(self.exceeds)
        mapped = np.where(flat, "exceeds_variability", "within_variability")
        return mapped.tolist()


def _listify(arr: np.ndarray) -> list:
    return np.asarray(arr, dtype=float).tolist()


def _subset(ds: Dataset, indices: np.ndarray, tag: str) -> Dataset:
    reps = tuple(ds.reps[int(k)] for k in indices)
    return Dataset(
        name=f"{ds.name}[{tag}]", joints=ds.joints, reps=reps, angle_unit=ds.angle_unit
    )


def shuffle_split_baseline(
    ds: Dataset,
    n_splits: int = DEFAULT_N_SPLITS,
    seed: int = 0,
    m: int | None = None,
    grid: NormalizedGrid | None = None,
) -> BaselineReport:
    """Natural-variability baseline of both metrics for one dataset.

    Each split shuffles the repetition indices with its own RNG stream
    (spawned from the master seed, so parallel evaluation cannot change the
    outcome), assigns the first ceil(k/2) repetitions to the reference half
    and the rest to the comparison half, and computes JcvPCA plus all-pairs
    JsvCRP between the halves. Splits are drawn independently, not as a
    partition schedule.

    Parameters
    ----------
    ds : Dataset
        Single-condition dataset with at least 4 repetitions.
    n_splits : int
        Number of independent shuffle-splits (default 15).
    seed : int
        Master seed; same seed and inputs give a bit-identical report.
    m : int, optional
        Component count for JcvPCA; defaults to the joint count.
    grid : NormalizedGrid, optional
        Grid for the CRP curves (default 101 points).
    """
    k = ds.n_reps
    if k < 4:
        raise ValidationError(
            f"baseline needs at least 4 repetitions (2 per half), got {k}"
        )
    if n_splits < 2:
        raise ParameterError(f"n_splits must be >= 2, got {n_splits}")
    m = m if m is not None else ds.n_joints
    grid = grid or NormalizedGrid()
    pairs = tuple(combinations(range(ds.n_joints), 2))
    half = math.ceil(k / 2)

    deltas = []
    areas = []
    for child in np.random.SeedSequence(seed).spawn(n_splits):
        rng = np.random.default_rng(child)
        order = rng.permutation(k)
        ref = _subset(ds, order[:half], "ref")
        cmp_ = _subset(ds, order[half:], "cmp")
        deltas.append(compute_jcvpca(ref, cmp_, m).delta)
        areas.append([res.area for res in jsvcrp_all_pairs(ref, cmp_, grid)])

    delta_stack = np.asarray(deltas)
    area_stack = np.asarray(areas)
    jcv_std = delta_stack.std(axis=0, ddof=1)
    jsv_std = area_stack.std(axis=0, ddof=1)
    root = math.sqrt(n_splits)
    return BaselineReport(
        jcvpca_mean=delta_stack.mean(axis=0),
        jcvpca_std=jcv_std,
        jcvpca_sem=jcv_std / root,
        pairs=pairs,
        jsvcrp_mean=area_stack.mean(axis=0),
        jsvcrp_std=jsv_std,
        jsvcrp_sem=jsv_std / root,
        n_splits=n_splits,
        seed=seed,
        m=m,
        joints=ds.joints,
    )


def classify(
    result: JcvPcaResult | JsvCrpResult,
    baseline: BaselineReport,
    rule: str = "std",
) -> SignificanceVerdict:
    """Classify a metric result against the baseline interval.

    The default rule uses mean +/- std; ``rule="sem"`` narrows the band to
    the standard error of the splits. Values outside the interval are
    classified as exceeding natural variability.
    """
    jcv_band, jsv_band = baseline.band(rule)
    if isinstance(result, JcvPcaResult):
        if result.delta.shape != baseline.jcvpca_mean.shape:
            raise ParameterError(
                f"delta shape {result.delta.shape} does not match baseline "
                f"{baseline.jcvpca_mean.shape}"
            )
        lo = baseline.jcvpca_mean - jcv_band
        hi = baseline.jcvpca_mean + jcv_band
        return SignificanceVerdict(
            exceeds=(result.delta < lo) | (result.delta > hi),
            rule=rule,
            metric="jcvpca",
        )
    if isinstance(result, JsvCrpResult):
        ordered = tuple(sorted(result.pair))
        if ordered not in baseline.pairs:
            raise ParameterError(
                f"pair {result.pair} not present in baseline pairs {baseline.pairs}"
            )
        idx = baseline.pairs.index(ordered)
        hi = baseline.jsvcrp_mean[idx] + jsv_band[idx]
        return SignificanceVerdict(
            exceeds=np.asarray(result.area > hi),
            rule=rule,
            metric="jsvcrp",
        )
    raise ParameterError(f"cannot classify {type(result).__name__}")
