"""Per-joint contribution change between two datasets (JcvPCA).

The comparison dataset is projected into the reference dataset's component
frame, a second PCA is fitted on the projected scores, and its components
are composed back onto the original joints. The absolute weights of both
frames (the joint reprojection weights, JRW) then live over the same joint
axes and can be subtracted entry-wise. Positive entries mean the joint is
used more in the comparison dataset; the result is direction-sensitive,
so the reference must be chosen deliberately.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .dataset import Dataset
from .errors import EmptySelectionWarning, ParameterError
from .pca import PcaModel, fit_pca, project


@dataclass(frozen=True)
class JrwMatrices:
    """Absolute per-joint weights of both component frames.

    ``jrw_a`` holds the reference frame's |weights| and ``jrw_b`` the
    comparison frame's |weights| after composition onto the original
    joints. Both are (m, n) with unit-norm rows: the reference rows are
    eigenvectors and the comparison rows are compositions of two
    orthonormal maps.
    """

    jrw_a: np.ndarray
    jrw_b: np.ndarray
    explained_variance_a: np.ndarray
    explained_variance_b: np.ndarray
    joints: tuple[str, ...]
    model_a: PcaModel


@dataclass(frozen=True)
class JcvPcaResult:
    """Signed contribution-change matrix plus the JRW it was derived from.

    ``delta[u, i]`` is the change of joint i's weight in component u,
    comparison minus reference, in [-1, 1]. ``weighted_delta`` scales each
    row by the reference frame's explained-variance ratio so rows can be
    compared across components.
    """

    delta: np.ndarray
    weighted_delta: np.ndarray
    jrw: JrwMatrices
    reference_name: str
    comparison_name: str
    m: int
    p: int | None = None

    def __post_init__(self):
        if (np.abs(self.delta) > 1.0 + 1e-9).any():
            raise ParameterError("delta entries must lie in [-1, 1]")

    @property
    def joints(self) -> tuple[str, ...]:
        return self.jrw.joints


def _check_comparable(a: Dataset, b: Dataset):
    if a.joints != b.joints:
        raise ParameterError(
            f"joint lists differ: {a.joints} vs {b.joints}; datasets must share "
            "identical joint names and order"
        )
    if a.angle_unit != b.angle_unit:
        raise ParameterError(
            f"angle units differ: {a.angle_unit!r} vs {b.angle_unit!r}"
        )


def compute_jrw(a: Dataset, b: Dataset, m: int) -> JrwMatrices:
    """Joint reprojection weights of datasets a (reference) and b.

    Steps: fit PCA on the reference, project the comparison into that frame
    (centered with the reference mean), fit PCA on the projected scores,
    and compose the second frame's rows with the first so both weight sets
    are expressed over the original joints. Absolute values are returned
    because eigenvector signs are arbitrary.
    """
    _check_comparable(a, b)
    model_a = fit_pca(a, m)
    projected = project(b, model_a)
    model_b = fit_pca(projected, m)
    composite = model_b.components @ model_a.components
    return JrwMatrices(
        jrw_a=np.abs(model_a.components),
        jrw_b=np.abs(composite),
        explained_variance_a=model_a.explained_variance_ratio,
        explained_variance_b=model_b.explained_variance_ratio,
        joints=a.joints,
        model_a=model_a,
    )


def compute_jcvpca(a: Dataset, b: Dataset, m: int, p: int | None = None) -> JcvPcaResult:
    """Contribution-change matrix between a reference and a comparison dataset.

    Parameters
    ----------
    a, b : Dataset
        Reference and comparison datasets with identical joint lists.
    m : int
        Number of components carried through both fits.
    p : int, optional
        Task dimensionality, recorded so rows can later be split into task
        (first p) and null-space (last m - p) groups.

    Returns
    -------
    JcvPcaResult
        ``delta = jrw_b - jrw_a``, so a positive entry means the joint
        contributes more in the comparison dataset. ``weighted_delta``
        multiplies each row by the reference explained-variance ratio.

    Notes
    -----
    Swapping the arguments generally changes the result; only the reference
    dataset defines the frame both weight sets are expressed in.
    """
    if p is not None and not 1 <= p <= m:
        raise ParameterError(f"p must satisfy 1 <= p <= m={m}, got {p}")
    jrw = compute_jrw(a, b, m)
    delta = jrw.jrw_b - jrw.jrw_a
    weighted = jrw.explained_variance_a[:, None] * delta
    return JcvPcaResult(
        delta=delta,
        weighted_delta=weighted,
        jrw=jrw,
        reference_name=a.name,
        comparison_name=b.name,
        m=m,
        p=p,
    )


def select_rows(result: JcvPcaResult, focus: str) -> np.ndarray:
    """Slice the delta matrix into task rows or null-space rows.

    ``focus="task"`` returns the first p rows (components doing the task),
    ``focus="null_space"`` the remaining m - p rows (redundant motion).
    """
    if result.p is None:
        raise ParameterError("result carries no task dimensionality p")
    if focus == "task":
        return result.delta[: result.p].copy()
    if focus == "null_space":
        rows = result.delta[result.p : result.m].copy()
        if len(rows) == 0:
            warnings.warn(
                "null-space selection is empty because m == p",
                EmptySelectionWarning,
                stacklevel=2,
            )
        return rows
    raise ParameterError(f"focus must be 'task' or 'null_space', got {focus!r}")
