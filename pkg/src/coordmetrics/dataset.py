"""Joint-trajectory datasets: ingestion, validation, resampling, and simulation.

A dataset is a named collection of movement repetitions sharing one joint
list. Each repetition stores a strictly increasing time vector and one
angle series per joint. All downstream metrics consume these containers,
so every invariant (monotone time, finite values, consistent joint lists)
is enforced at construction time.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple, Sequence

import numpy as np

from .errors import (
    ConfigError,
    DegenerateRangeError,
    SchemaError,
    ValidationError,
)

ANGLE_UNITS = ("deg", "rad")


def _as_float_array(values, name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if not np.isfinite(arr).all():
        raise ValidationError(f"{name} contains NaN or Inf values")
    return arr


@dataclass(frozen=True)
class Repetition:
    """One recorded movement: a time vector plus one angle series per joint.

    Parameters
    ----------
    time : ndarray, shape (T,)
        Sample times in seconds (or normalized time in [0, 1] after
        resampling). Strictly increasing, T >= 3.
    angles : ndarray, shape (T, n)
        Joint angle series, one column per joint.
    """

    time: np.ndarray
    angles: np.ndarray

    def __post_init__(self):
        time = _as_float_array(self.time, "time")
        angles = _as_float_array(self.angles, "angles")
        if angles.ndim == 1:
            angles = angles.reshape(-1, 1)
        if time.ndim != 1 or angles.ndim != 2:
            raise ValidationError("time must be 1-D and angles 2-D")
        if len(time) != len(angles):
            raise ValidationError("time and angles must have the same length")
        if len(time) < 3:
            raise ValidationError(f"repetition needs at least 3 samples, got {len(time)}")
        steps = np.diff(time)
        if (steps <= 0).any():
            row = int(np.argmax(steps <= 0)) + 1
            raise ValidationError(f"time not strictly increasing at row {row}")
        object.__setattr__(self, "time", time)
        object.__setattr__(self, "angles", angles)

    @property
    def n_samples(self) -> int:
        return len(self.time)

    @property
    def n_joints(self) -> int:
        return self.angles.shape[1]


@dataclass(frozen=True)
class Dataset:
    """Named collection of repetitions sharing one joint list and angle unit."""

    name: str
    joints: tuple[str, ...]
    reps: tuple[Repetition, ...]
    angle_unit: str = "deg"

    def __post_init__(self):
        object.__setattr__(self, "joints", tuple(self.joints))
        object.__setattr__(self, "reps", tuple(self.reps))
        if self.angle_unit not in ANGLE_UNITS:
            raise ValidationError(f"angle_unit must be one of {ANGLE_UNITS}")
        if not self.reps:
            raise ValidationError(f"dataset {self.name!r}: no repetitions found")
        n = len(self.joints)
        if n == 0:
            raise ValidationError(f"dataset {self.name!r}: empty joint list")
        for idx, rep in enumerate(self.reps):
            if rep.n_joints != n:
                raise ValidationError(
                    f"dataset {self.name!r}: repetition {idx} has {rep.n_joints} "
                    f"joints, expected {n}"
                )

    @property
    def n_joints(self) -> int:
        return len(self.joints)

    @property
    def n_reps(self) -> int:
        return len(self.reps)

    def concatenated(self) -> np.ndarray:
        """All samples of all repetitions stacked row-wise, shape (N, n)."""
        return np.vstack([rep.angles for rep in self.reps])


@dataclass(frozen=True)
class VelocityProfile:
    """Angular velocities matching a source repetition sample-for-sample."""

    time: np.ndarray
    velocities: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "velocities", _as_float_array(self.velocities, "velocities"))


@dataclass(frozen=True)
class NormalizedGrid:
    """Uniform grid on [0, 1] used as the common time axis for curves.

    Externally reported as 0..100% of movement duration.
    """

    points: np.ndarray = field(default_factory=lambda: np.linspace(0.0, 1.0, 101))

    def __post_init__(self):
        pts = _as_float_array(self.points, "grid")
        if pts.ndim != 1 or len(pts) < 11:
            raise ValidationError("grid must be 1-D with at least 11 points")
        if pts[0] != 0.0 or pts[-1] != 1.0:
            raise ValidationError("grid must start at 0 and end at 1")
        if not np.allclose(np.diff(pts), pts[1] - pts[0], rtol=0, atol=1e-12):
            raise ValidationError("grid spacing must be uniform")
        object.__setattr__(self, "points", pts)

    @classmethod
    def with_size(cls, size: int = 101) -> "NormalizedGrid":
        if size < 11:
            raise ConfigError(f"grid size must be >= 11, got {size}")
        return cls(np.linspace(0.0, 1.0, size))

    def __len__(self) -> int:
        return len(self.points)

    @property
    def percent(self) -> np.ndarray:
        return self.points * 100.0


# ---------------------------------------------------------------------------
# Ingestion
# ---------------------------------------------------------------------------

def _read_csv_repetition(path: Path, expected_header: list[str] | None) -> tuple[list[str], Repetition]:
    with path.open(newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path.name}: file is empty") from None
        header = [h.strip() for h in header]
        if not header or header[0] != "time":
            raise SchemaError(f"{path.name}: first column must be 'time', got {header[:1]}")
        if len(header) < 2:
            raise SchemaError(f"{path.name}: no joint columns after 'time'")
        if expected_header is not None and header != expected_header:
            raise SchemaError(
                f"{path.name}: header {header} does not match {expected_header} "
                "(identical column names and order are required)"
            )
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise ValidationError(
                    f"{path.name}: row {lineno} has {len(row)} fields, expected {len(header)}"
                )
            try:
                rows.append([float(cell) for cell in row])
            except ValueError as exc:
                raise ValidationError(f"{path.name}: row {lineno}: {exc}") from None
    data = np.asarray(rows, dtype=float)
    if len(data) < 3:
        raise ValidationError(f"{path.name}: needs at least 3 samples, got {len(data)}")
    if not np.isfinite(data).all():
        bad = int(np.argwhere(~np.isfinite(data))[0][0]) + 2
        raise ValidationError(f"{path.name}: non-finite value at row {bad}")
    time = data[:, 0]
    steps = np.diff(time)
    if (steps <= 0).any():
        bad = int(np.argmax(steps <= 0)) + 3  # +2 header/1-based, +1 second row of the pair
        raise ValidationError(f"{path.name}: time not strictly increasing at row {bad}")
    return header, Repetition(time=time, angles=data[:, 1:])


def load_dataset(root_path: str | Path, unit: str = "deg", name: str | None = None) -> Dataset:
    """Load every ``*.csv`` file in a directory as one dataset.

    Files are taken in lexicographic order; each must carry the header
    ``time,<joint1>,...,<jointn>`` with identical names and order across
    files. The joint list is taken from the first file's header.

    Parameters
    ----------
    root_path : str or Path
        Directory containing one CSV file per repetition.
    unit : {"deg", "rad"}
        Angle unit of the stored series. Declared, never inferred.
    name : str, optional
        Dataset label; defaults to the directory name.

    Raises
    ------
    SchemaError
        On missing or inconsistent headers (the offending file is named).
    ValidationError
        On empty directories, non-monotone time, or non-finite values.
    """
    root = Path(root_path)
    if unit not in ANGLE_UNITS:
        raise ConfigError(f"unit must be one of {ANGLE_UNITS}, got {unit!r}")
    if not root.is_dir():
        raise ValidationError(f"{root}: not a directory")
    files = sorted(root.glob("*.csv"))
    if not files:
        raise ValidationError(f"{root}: no repetitions found (no *.csv files)")
    header: list[str] | None = None
    reps = []
    for path in files:
        header, rep = _read_csv_repetition(path, header)
        reps.append(rep)
    assert header is not None
    return Dataset(
        name=name if name is not None else root.name,
        joints=tuple(header[1:]),
        reps=tuple(reps),
        angle_unit=unit,
    )


def write_dataset_csv(ds: Dataset, out_dir: str | Path) -> list[Path]:
    """Write one ``rep_###.csv`` per repetition; returns the paths written."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for idx, rep in enumerate(ds.reps, start=1):
        path = out / f"rep_{idx:03d}.csv"
        with path.open("w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle)
            writer.writerow(["time", *ds.joints])
            for t, row in zip(rep.time, rep.angles):
                writer.writerow([repr(float(t)), *(repr(float(v)) for v in row)])
        paths.append(path)
    return paths


# ---------------------------------------------------------------------------
# Differentiation and normalization
# ---------------------------------------------------------------------------

def moving_average(series: np.ndarray, window: int) -> np.ndarray:
    """Centered moving average with edge shrinkage; window <= 1 is a no-op."""
    if window <= 1:
        return np.asarray(series, dtype=float)
    series = np.asarray(series, dtype=float)
    kernel = np.ones(window) / window
    smoothed = np.convolve(series, kernel, mode="same")
    # renormalize the shrunken edge windows
    weights = np.convolve(np.ones_like(series), kernel, mode="same")
    return smoothed / weights


def compute_velocity(
    rep: Repetition,
    method: str = "central_difference",
    smooth_window: int = 0,
) -> VelocityProfile:
    """Differentiate each joint series with respect to time.

    The default is central differences at interior samples with one-sided
    differences at the endpoints; ``forward_difference`` uses forward steps
    with a backward step at the last sample. An optional moving-average
    window (off by default) pre-smooths the angles, which tempers noise
    amplification in the downstream phase angles.
    """
    angles = rep.angles
    if smooth_window and smooth_window > 1:
        angles = np.column_stack(
            [moving_average(angles[:, c], smooth_window) for c in range(angles.shape[1])]
        )
    if method == "central_difference":
        vel = np.gradient(angles, rep.time, axis=0, edge_order=2)
    elif method == "forward_difference":
        dt = np.diff(rep.time)
        fwd = np.diff(angles, axis=0) / dt[:, None]
        vel = np.vstack([fwd, fwd[-1:]])
    else:
        raise ConfigError(f"unknown differentiation method {method!r}")
    return VelocityProfile(time=rep.time, velocities=vel)


def range_normalize(series: np.ndarray) -> np.ndarray:
    """Affinely map a series onto [-1, 1] by its own min and max.

    The minimum maps to -1 and the maximum to +1.

    Raises
    ------
    DegenerateRangeError
        If max == min; callers decide the constant-signal policy.
    """
    series = _as_float_array(series, "series")
    lo, hi = series.min(), series.max()
    if hi == lo:
        raise DegenerateRangeError(f"series has zero range (constant value {lo})")
    return 2.0 * (series - lo) / (hi - lo) - 1.0


def time_normalize_linear(rep: Repetition, grid: NormalizedGrid) -> Repetition:
    """Resample a repetition onto the normalized grid by linear interpolation.

    Time is first mapped to [0, 1] via (t - t0) / (t_end - t0), then every
    joint series is interpolated at the grid points. First and last values
    of each series are preserved exactly.
    """
    t0, t_end = rep.time[0], rep.time[-1]
    if t_end == t0:
        raise ValidationError("zero-duration repetition cannot be time-normalized")
    s = (rep.time - t0) / (t_end - t0)
    resampled = np.column_stack(
        [np.interp(grid.points, s, rep.angles[:, c]) for c in range(rep.n_joints)]
    )
    return Repetition(time=grid.points, angles=resampled)


def center_dataset(ds: Dataset) -> Dataset:
    """Remove each joint's mean over the concatenation of all repetitions.

    Centering also removes small offsets in the starting position between
    datasets, which is why the metrics work on centered data.
    """
    mean = ds.concatenated().mean(axis=0)
    reps = tuple(
        Repetition(time=rep.time, angles=rep.angles - mean) for rep in ds.reps
    )
    return Dataset(name=ds.name, joints=ds.joints, reps=reps, angle_unit=ds.angle_unit)


# ---------------------------------------------------------------------------
# Dynamic time warping
# ---------------------------------------------------------------------------

class DtwAlignment(NamedTuple):
    path: tuple[tuple[int, int], ...]
    cost: float


def time_align_dtw(a: Sequence[float] | np.ndarray, b: Sequence[float] | np.ndarray) -> DtwAlignment:
    """Align two series with standard dynamic time warping.

    Euclidean local cost, unit step pattern {(1,0), (0,1), (1,1)}, and a
    boundary-complete monotone path minimizing total cost. Ties prefer the
    diagonal step so self-alignment returns the plain diagonal.

    Returns
    -------
    DtwAlignment
        ``path`` as index pairs into (a, b) and the total ``cost``.
    """
    a = np.atleast_1d(np.asarray(a, dtype=float))
    b = np.atleast_1d(np.asarray(b, dtype=float))
    if len(a) < 2 or len(b) < 2:
        raise ValidationError("DTW requires series of length >= 2")
    if a.ndim == 1:
        local = np.abs(a[:, None] - b[None, :])
    else:
        local = np.linalg.norm(a[:, None, :] - b[None, :, :], axis=-1)
    n, m = local.shape
    acc = np.full((n + 1, m + 1), np.inf)
    acc[0, 0] = 0.0
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            acc[i, j] = local[i - 1, j - 1] + min(
                acc[i - 1, j - 1], acc[i - 1, j], acc[i, j - 1]
            )
    path = [(n - 1, m - 1)]
    i, j = n, m
    while (i, j) != (1, 1):
        candidates = (
            (acc[i - 1, j - 1], (i - 1, j - 1)),
            (acc[i - 1, j], (i - 1, j)),
            (acc[i, j - 1], (i, j - 1)),
        )
        _, (i, j) = min(candidates, key=lambda item: item[0])
        path.append((i - 1, j - 1))
    path.reverse()
    return DtwAlignment(path=tuple(path), cost=float(acc[n, m]))


# ---------------------------------------------------------------------------
# Simulated validation datasets
# ---------------------------------------------------------------------------

AMPLITUDE_RATIO = 2.0
PHASE_SHIFT_A = 1.0          # rad, second joint of the reference dataset
PHASE_SHIFT_B = math.pi / 2  # rad, second joint of the comparison dataset


@dataclass(frozen=True)
class SimConfig:
    """Parameters of the two-joint sine-wave validation datasets."""

    amplitude: float = 1.0
    omega: float = 2.0 * math.pi
    duration: float = 1.0
    samples: int = 1000
    noise: float = 0.0
    reps: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.amplitude <= 0:
            raise ConfigError("amplitude must be positive")
        if self.omega <= 0:
            raise ConfigError("angular frequency must be positive")
        if self.duration <= 0:
            raise ConfigError("duration must be positive")
        if self.samples < 3:
            raise ConfigError("samples must be >= 3")
        if self.noise < 0:
            raise ConfigError("noise standard deviation must be >= 0")
        if self.reps < 1:
            raise ConfigError("reps must be >= 1")


def generate_simulated(config: SimConfig = SimConfig()) -> tuple[Dataset, Dataset]:
    """Build the two-joint sine-wave datasets used to validate the metrics.

    Both datasets share the first joint, a plain sine. The second joint has
    twice the amplitude and a phase lead of 1 rad in dataset A versus pi/2
    rad in dataset B, so A and B differ in both contribution and timing.
    Gaussian noise (i.i.d. per sample, seeded) is added when
    ``config.noise`` > 0. Same seed, same bytes.
    """
    rng = np.random.default_rng(config.seed)
    t = np.linspace(0.0, config.duration, config.samples)
    base = config.amplitude * np.sin(config.omega * t)

    def build(name: str, phase: float) -> Dataset:
        second = AMPLITUDE_RATIO * config.amplitude * np.sin(config.omega * t + phase)
        reps = []
        for _ in range(config.reps):
            angles = np.column_stack([base, second])
            if config.noise > 0:
                angles = angles + rng.normal(0.0, config.noise, size=angles.shape)
            reps.append(Repetition(time=t, angles=angles))
        return Dataset(name=name, joints=("theta1", "theta2"), reps=tuple(reps), angle_unit="rad")

    return build("sim_A", PHASE_SHIFT_A), build("sim_B", PHASE_SHIFT_B)
