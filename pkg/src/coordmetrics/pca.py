"""Principal component analysis over concatenated joint trajectories.

Fits are eigendecompositions of the sample covariance (1/(N-1)) of all
samples of all repetitions stacked row-wise. Data are centered but never
variance-normalized, so joints that move more keep their weight. The joint
count n is small, which makes the dense symmetric eigensolver the robust
choice.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .dataset import Dataset, Repetition
from .errors import (
    EigenvalueTieWarning,
    ParameterError,
    SampleSizeWarning,
    ValidationError,
)

# recommended variable-to-factor ratio for a stable fit
MIN_SAMPLES_PER_JOINT = 10

# relative eigenvalue gap below which the component basis is flagged as non-unique
TIE_RTOL = 0.1


@dataclass(frozen=True)
class PcaModel:
    """Fitted component frame for one dataset.

    Attributes
    ----------
    mean : ndarray, shape (n,)
        Per-joint mean removed before the fit (angle units).
    components : ndarray, shape (m, n)
        Unit eigenvectors as rows, ordered by descending eigenvalue. In each
        row the entry of largest absolute value is non-negative, which makes
        the output deterministic (PCA is otherwise sign-ambiguous).
    explained_variance : ndarray, shape (m,)
        Retained eigenvalues of the sample covariance.
    explained_variance_ratio : ndarray, shape (m,)
        Eigenvalues divided by the total variance; sums to 1 when m == n.
    joints : tuple of str
        Column labels of the fitted data.
    flags : tuple of str
        Diagnostic flags ("eigenvalue_tie", "sample_size") attached during
        the fit; echoed in reports.
    """

    mean: np.ndarray
    components: np.ndarray
    explained_variance: np.ndarray
    explained_variance_ratio: np.ndarray
    joints: tuple[str, ...]
    flags: tuple[str, ...] = ()

    def __post_init__(self):
        comps = np.asarray(self.components, dtype=float)
        norms = np.linalg.norm(comps, axis=1)
        if not np.allclose(norms, 1.0, atol=1e-9):
            raise ValidationError("component rows must be unit-norm")
        gram = comps @ comps.T
        if not np.allclose(gram - np.diag(np.diag(gram)), 0.0, atol=1e-9):
            raise ValidationError("component rows must be mutually orthogonal")
        evr = np.asarray(self.explained_variance_ratio, dtype=float)
        if (np.diff(evr) > 1e-12).any():
            raise ValidationError("explained variance ratios must be non-increasing")

    @property
    def n_joints(self) -> int:
        return self.components.shape[1]

    @property
    def n_components(self) -> int:
        return self.components.shape[0]

    def to_dict(self) -> dict:
        """JSON-ready form (components row-major) for audit output."""
        return {
            "joints": list(self.joints),
            "mean": [float(v) for v in self.mean],
            "components": [[float(v) for v in row] for row in self.components],
            "explained_variance": [float(v) for v in self.explained_variance],
            "explained_variance_ratio": [float(v) for v in self.explained_variance_ratio],
            "flags": list(self.flags),
        }


def _apply_sign_convention(components: np.ndarray) -> np.ndarray:
    components = components.copy()
    for row in components:
        pivot = int(np.argmax(np.abs(row)))
        if row[pivot] < 0:
            row *= -1.0
    return components


def _order_eigenpairs(eigenvalues: np.ndarray, eigenvectors: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Descending eigenvalue order; exact ties ordered by the joint index of
    the largest component so the output stays deterministic."""
    order = list(np.argsort(eigenvalues)[::-1])
    start = 0
    while start < len(order):
        end = start
        while end + 1 < len(order) and eigenvalues[order[end + 1]] == eigenvalues[order[start]]:
            end += 1
        if end > start:
            order[start : end + 1] = sorted(
                order[start : end + 1],
                key=lambda idx: int(np.argmax(np.abs(eigenvectors[:, idx]))),
            )
        start = end + 1
    idx = np.asarray(order)
    return eigenvalues[idx], eigenvectors[:, idx]


def fit_pca(ds: Dataset, m: int) -> PcaModel:
    """Fit an m-component PCA on a dataset's concatenated samples.

    Parameters
    ----------
    ds : Dataset
        Input trajectories; all repetitions are stacked row-wise.
    m : int
        Number of retained components, 1 <= m <= n. A sensible default for
        a task needing p degrees of freedom is m = p + 1 so the last row
        summarizes the null space.

    Warns
    -----
    SampleSizeWarning
        When the total sample count is below 10 per joint.
    EigenvalueTieWarning
        When adjacent retained (or boundary) eigenvalues are within 10% of
        each other, making the retained basis effectively non-unique.
    """
    n = ds.n_joints
    if not 1 <= m <= n:
        raise ParameterError(f"m must satisfy 1 <= m <= {n}, got {m}")
    data = ds.concatenated()
    total = len(data)
    flags: list[str] = []
    if total < MIN_SAMPLES_PER_JOINT * n:
        flags.append("sample_size")
        warnings.warn(
            f"dataset {ds.name!r}: {total} samples for {n} joints is below the "
            f"recommended {MIN_SAMPLES_PER_JOINT} per joint",
            SampleSizeWarning,
            stacklevel=2,
        )
    mean = data.mean(axis=0)
    centered = data - mean
    cov = centered.T @ centered / (total - 1)
    eigenvalues, eigenvectors = np.linalg.eigh(cov)
    eigenvalues = np.maximum(eigenvalues, 0.0)  # clip eigensolver noise on PSD input
    eigenvalues, eigenvectors = _order_eigenpairs(eigenvalues, eigenvectors)
    total_var = eigenvalues.sum()
    if total_var == 0.0:
        raise ValidationError(f"dataset {ds.name!r} has zero variance")
    boundary = min(m, n - 1)
    for i in range(boundary):
        hi, lo = eigenvalues[i], eigenvalues[i + 1]
        if hi > 0 and (hi - lo) / hi < TIE_RTOL:
            if "eigenvalue_tie" not in flags:
                flags.append("eigenvalue_tie")
                warnings.warn(
                    f"dataset {ds.name!r}: eigenvalues {i + 1} and {i + 2} are within "
                    f"{TIE_RTOL:.0%}; the component basis is not unique",
                    EigenvalueTieWarning,
                    stacklevel=2,
                )
    components = _apply_sign_convention(eigenvectors.T[:m])
    return PcaModel(
        mean=mean,
        components=components,
        explained_variance=eigenvalues[:m],
        explained_variance_ratio=eigenvalues[:m] / total_var,
        joints=ds.joints,
        flags=tuple(flags),
    )


def project(ds: Dataset, model: PcaModel) -> Dataset:
    """Project a dataset into a fitted component frame.

    Samples are centered with the MODEL's mean (not the dataset's own), so a
    comparison dataset lands in the same affine frame as the data the model
    was fitted on. Scores come back as a dataset whose "joints" are the
    component axes, which lets the result feed straight back into
    :func:`fit_pca`.
    """
    if ds.joints != model.joints:
        raise ParameterError(
            f"dataset joints {ds.joints} do not match model joints {model.joints}"
        )
    labels = tuple(f"pc{u + 1}" for u in range(model.n_components))
    reps = tuple(
        Repetition(time=rep.time, angles=(rep.angles - model.mean) @ model.components.T)
        for rep in ds.reps
    )
    return Dataset(name=ds.name, joints=labels, reps=reps, angle_unit=ds.angle_unit)
