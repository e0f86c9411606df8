"""Ingestion, differentiation, normalization, DTW, and the simulated datasets."""

import math

import numpy as np
import pytest

from coordmetrics import (
    ConfigError,
    Dataset,
    DegenerateRangeError,
    NormalizedGrid,
    Repetition,
    SchemaError,
    SimConfig,
    ValidationError,
    center_dataset,
    compute_velocity,
    generate_simulated,
    load_dataset,
    moving_average,
    range_normalize,
    time_align_dtw,
    time_normalize_linear,
    write_dataset_csv,
)
from conftest import make_smooth_dataset


def write_csv(path, header, rows):
    lines = [",".join(header)]
    lines += [",".join(str(v) for v in row) for row in rows]
    path.write_text("\n".join(lines) + "\n")


def simple_rows(values):
    return [(0.1 * k, v, 2 * v) for k, v in enumerate(values)]


# ---------------------------------------------------------------------------
# Loading
# ---------------------------------------------------------------------------

class TestLoadDataset:
    def test_loads_well_formed_folder(self, tmp_path):
        for k in range(9):
            write_csv(tmp_path / f"rep{k}.csv", ["time", "shoulder", "elbow"], simple_rows([1, 2, 3, 4]))
        ds = load_dataset(tmp_path, unit="deg")
        assert ds.n_joints == 2
        assert ds.n_reps == 9
        assert ds.joints == ("shoulder", "elbow")
        assert ds.angle_unit == "deg"

    def test_header_order_mismatch_names_offending_file(self, tmp_path):
        write_csv(tmp_path / "a.csv", ["time", "shoulder", "elbow"], simple_rows([1, 2, 3]))
        write_csv(tmp_path / "b.csv", ["time", "elbow", "shoulder"], simple_rows([1, 2, 3]))
        with pytest.raises(SchemaError, match="b.csv"):
            load_dataset(tmp_path)

    def test_empty_folder(self, tmp_path):
        with pytest.raises(ValidationError, match="no repetitions found"):
            load_dataset(tmp_path)

    def test_non_monotone_time_reports_row(self, tmp_path):
        write_csv(tmp_path / "a.csv", ["time", "j1"], [(0.0, 1), (0.2, 2), (0.1, 3), (0.3, 4)])
        with pytest.raises(ValidationError, match=r"a.csv.*row 4"):
            load_dataset(tmp_path)

    def test_nan_rejected(self, tmp_path):
        write_csv(tmp_path / "a.csv", ["time", "j1"], [(0.0, 1), (0.1, "nan"), (0.2, 3)])
        with pytest.raises(ValidationError, match="a.csv"):
            load_dataset(tmp_path)

    def test_missing_time_column(self, tmp_path):
        write_csv(tmp_path / "a.csv", ["t", "j1"], [(0.0, 1), (0.1, 2), (0.2, 3)])
        with pytest.raises(SchemaError, match="time"):
            load_dataset(tmp_path)

    def test_ragged_row_rejected(self, tmp_path):
        (tmp_path / "a.csv").write_text("time,j1\n0.0,1\n0.1\n0.2,3\n")
        with pytest.raises(ValidationError, match="row 3"):
            load_dataset(tmp_path)

    def test_files_ordered_lexicographically(self, tmp_path):
        write_csv(tmp_path / "b.csv", ["time", "j1"], [(0, 10), (1, 10), (2, 10)])
        write_csv(tmp_path / "a.csv", ["time", "j1"], [(0, 20), (1, 20), (2, 20)])
        ds = load_dataset(tmp_path)
        assert ds.reps[0].angles[0, 0] == 20.0

    def test_round_trip_through_csv(self, tmp_path):
        ds = make_smooth_dataset(5, n_joints=3, n_reps=4)
        write_dataset_csv(ds, tmp_path)
        back = load_dataset(tmp_path, unit="deg", name=ds.name)
        assert back.joints == ds.joints
        for orig, loaded in zip(ds.reps, back.reps):
            np.testing.assert_array_equal(orig.time, loaded.time)
            np.testing.assert_array_equal(orig.angles, loaded.angles)


class TestContainers:
    def test_repetition_needs_three_samples(self):
        with pytest.raises(ValidationError):
            Repetition(time=[0.0, 1.0], angles=[[1.0], [2.0]])

    def test_duplicate_timestamps_rejected(self):
        with pytest.raises(ValidationError, match="strictly increasing"):
            Repetition(time=[0.0, 0.0, 1.0], angles=[[1.0], [2.0], [3.0]])

    def test_joint_count_consistency(self):
        good = Repetition(time=[0, 1, 2], angles=np.ones((3, 2)))
        bad = Repetition(time=[0, 1, 2], angles=np.ones((3, 3)))
        with pytest.raises(ValidationError, match="repetition 1"):
            Dataset(name="x", joints=("a", "b"), reps=(good, bad))

    def test_grid_validation(self):
        with pytest.raises(ValidationError):
            NormalizedGrid(np.linspace(0, 0.9, 101))
        with pytest.raises(ConfigError):
            NormalizedGrid.with_size(5)
        assert len(NormalizedGrid()) == 101


# ---------------------------------------------------------------------------
# Differentiation
# ---------------------------------------------------------------------------

class TestComputeVelocity:
    def test_constant_gives_zero(self):
        rep = Repetition(time=np.linspace(0, 1, 50), angles=np.full((50, 1), 3.0))
        vel = compute_velocity(rep)
        np.testing.assert_allclose(vel.velocities, 0.0, atol=1e-12)

    def test_linear_ramp_gives_one(self):
        t = np.linspace(0, 1, 50)
        rep = Repetition(time=t, angles=t.reshape(-1, 1))
        vel = compute_velocity(rep)
        np.testing.assert_allclose(vel.velocities, 1.0, atol=1e-12)

    def test_sine_matches_analytic_derivative(self):
        t = np.linspace(0, 1, 1001)
        rep = Repetition(time=t, angles=np.sin(2 * np.pi * t).reshape(-1, 1))
        vel = compute_velocity(rep)
        exact = 2 * np.pi * np.cos(2 * np.pi * t)
        assert np.max(np.abs(vel.velocities[:, 0] - exact)) < 1e-3

    def test_forward_difference(self):
        t = np.linspace(0, 1, 20)
        rep = Repetition(time=t, angles=(2 * t).reshape(-1, 1))
        vel = compute_velocity(rep, method="forward_difference")
        np.testing.assert_allclose(vel.velocities, 2.0, atol=1e-12)

    def test_unknown_method(self):
        rep = Repetition(time=[0, 1, 2], angles=[[0.0], [1.0], [2.0]])
        with pytest.raises(ConfigError):
            compute_velocity(rep, method="spline")

    def test_smoothing_window_reduces_noise(self):
        rng = np.random.default_rng(0)
        t = np.linspace(0, 1, 500)
        noisy = np.sin(2 * np.pi * t) + rng.normal(0, 0.01, t.shape)
        rep = Repetition(time=t, angles=noisy.reshape(-1, 1))
        raw = compute_velocity(rep).velocities
        smooth = compute_velocity(rep, smooth_window=9).velocities
        exact = 2 * np.pi * np.cos(2 * np.pi * t)
        assert np.abs(smooth[:, 0] - exact).mean() < np.abs(raw[:, 0] - exact).mean()

    def test_moving_average_short_window_noop(self):
        x = np.array([1.0, 2.0, 3.0])
        np.testing.assert_array_equal(moving_average(x, 1), x)
        np.testing.assert_allclose(moving_average(np.full(10, 5.0), 4), 5.0)


# ---------------------------------------------------------------------------
# Normalization
# ---------------------------------------------------------------------------

class TestRangeNormalize:
    def test_endpoints(self):
        np.testing.assert_allclose(range_normalize([0, 5, 10]), [-1.0, 0.0, 1.0])

    def test_constant_raises(self):
        with pytest.raises(DegenerateRangeError):
            range_normalize([-3.0, -3.0, -3.0])

    def test_affine_map(self):
        np.testing.assert_allclose(range_normalize([2, 4, 8]), [-1.0, -1.0 / 3.0, 1.0])

    def test_bounds_and_extremes_attained(self):
        rng = np.random.default_rng(7)
        for _ in range(25):
            series = rng.normal(size=rng.integers(3, 40))
            out = range_normalize(series)
            assert out.min() == -1.0 and out.max() == 1.0
            assert (np.abs(out) <= 1.0).all()


class TestTimeNormalize:
    def test_identity_on_matching_grid(self):
        grid = NormalizedGrid()
        values = np.sin(grid.points * 3).reshape(-1, 1)
        rep = Repetition(time=grid.points, angles=values)
        out = time_normalize_linear(rep, grid)
        np.testing.assert_array_equal(out.angles, values)

    def test_linear_data_linear_interpolation(self):
        # linear data interpolates linearly: quarter grid points hit 0, 0.5, 1, 1.5, 2
        rep = Repetition(time=[0.0, 2.0, 4.0], angles=[[0.0], [1.0], [2.0]])
        grid = NormalizedGrid(np.linspace(0, 1, 11))
        out = time_normalize_linear(rep, grid)
        np.testing.assert_allclose(out.angles[:, 0], np.linspace(0.0, 2.0, 11))
        assert out.angles[5, 0] == pytest.approx(1.0)

    def test_irregular_sine_resample(self):
        # 37 jittered (irregular) samples keep the interpolation error below 1%
        rng = np.random.default_rng(3)
        t = np.linspace(0, 1, 37)
        t[1:-1] += rng.uniform(-0.25, 0.25, 35) * (t[1] - t[0])
        rep = Repetition(time=t, angles=np.sin(2 * np.pi * t).reshape(-1, 1))
        out = time_normalize_linear(rep, NormalizedGrid())
        exact = np.sin(2 * np.pi * out.time)
        assert np.max(np.abs(out.angles[:, 0] - exact)) < 0.01

    def test_endpoints_preserved_exactly(self):
        ds = make_smooth_dataset(11, n_joints=3, n_reps=3)
        grid = NormalizedGrid()
        for rep in ds.reps:
            out = time_normalize_linear(rep, grid)
            np.testing.assert_array_equal(out.angles[0], rep.angles[0])
            np.testing.assert_array_equal(out.angles[-1], rep.angles[-1])


class TestCenterDataset:
    def test_idempotent(self):
        ds = make_smooth_dataset(2, n_joints=2, n_reps=4)
        once = center_dataset(ds)
        twice = center_dataset(once)
        for a, b in zip(once.reps, twice.reps):
            np.testing.assert_allclose(a.angles, b.angles, atol=1e-12)

    def test_single_rep_mean_removed(self):
        ds = Dataset(
            name="x",
            joints=("j1",),
            reps=(Repetition(time=[0, 1, 2], angles=[[1.0], [2.0], [3.0]]),),
        )
        out = center_dataset(ds)
        np.testing.assert_allclose(out.reps[0].angles[:, 0], [-1.0, 0.0, 1.0])

    def test_mean_over_concatenation(self):
        # two reps [0, 2] and [4, 6] share the joint mean 3
        ds = Dataset(
            name="x",
            joints=("j1",),
            reps=(
                Repetition(time=[0, 1, 2], angles=[[0.0], [1.0], [2.0]]),
                Repetition(time=[0, 1, 2], angles=[[4.0], [5.0], [6.0]]),
            ),
        )
        out = center_dataset(ds)
        np.testing.assert_allclose(out.reps[0].angles[:, 0], [-3.0, -2.0, -1.0])
        np.testing.assert_allclose(out.reps[1].angles[:, 0], [1.0, 2.0, 3.0])


# ---------------------------------------------------------------------------
# Dynamic time warping
# ---------------------------------------------------------------------------

def dtw_cost_oracle(a, b):
    """Exhaustive minimum alignment cost over all monotone boundary paths."""
    from functools import lru_cache

    @lru_cache(maxsize=None)
    def best(i, j):
        cost = abs(a[i] - b[j])
        if i == 0 and j == 0:
            return cost
        prev = []
        if i > 0 and j > 0:
            prev.append(best(i - 1, j - 1))
        if i > 0:
            prev.append(best(i - 1, j))
        if j > 0:
            prev.append(best(i, j - 1))
        return cost + min(prev)

    return best(len(a) - 1, len(b) - 1)


class TestDtw:
    def test_self_alignment_is_diagonal(self):
        series = [0.0, 1.0, 4.0, 2.0, 5.0]
        out = time_align_dtw(series, series)
        assert out.cost == 0.0
        assert out.path == tuple((k, k) for k in range(5))

    def test_delayed_series_hugs_shifted_diagonal(self):
        a = [0.0, 1.0, 2.0, 3.0, 3.0]
        b = [0.0, 0.0, 1.0, 2.0, 3.0]
        out = time_align_dtw(a, b)
        assert out.cost == dtw_cost_oracle(tuple(a), tuple(b)) == 0.0
        assert all(abs(i - j) <= 1 for i, j in out.path)

    def test_matches_exhaustive_oracle(self):
        a = (0.0, 0.0, 1.0)
        b = (0.0, 1.0, 1.0)
        out = time_align_dtw(a, b)
        assert out.cost == dtw_cost_oracle(a, b)
        rng = np.random.default_rng(9)
        for _ in range(20):
            x = tuple(rng.normal(size=rng.integers(2, 6)))
            y = tuple(rng.normal(size=rng.integers(2, 6)))
            assert time_align_dtw(x, y).cost == pytest.approx(dtw_cost_oracle(x, y))

    def test_cost_symmetric(self):
        rng = np.random.default_rng(4)
        x = rng.normal(size=6)
        y = rng.normal(size=8)
        assert time_align_dtw(x, y).cost == pytest.approx(time_align_dtw(y, x).cost)

    def test_path_boundary_complete_and_monotone(self):
        rng = np.random.default_rng(5)
        x = rng.normal(size=7)
        y = rng.normal(size=5)
        path = time_align_dtw(x, y).path
        assert path[0] == (0, 0) and path[-1] == (6, 4)
        for (i0, j0), (i1, j1) in zip(path, path[1:]):
            assert (i1 - i0, j1 - j0) in {(1, 0), (0, 1), (1, 1)}

    def test_too_short_series(self):
        with pytest.raises(ValidationError):
            time_align_dtw([1.0], [1.0, 2.0])


# ---------------------------------------------------------------------------
# Simulated datasets
# ---------------------------------------------------------------------------

class TestGenerateSimulated:
    def test_first_joint_shared(self):
        a, b = generate_simulated(SimConfig())
        np.testing.assert_array_equal(a.reps[0].angles[:, 0], b.reps[0].angles[:, 0])

    def test_second_joint_amplitude_doubled(self):
        a, _ = generate_simulated(SimConfig())
        theta1, theta2 = a.reps[0].angles[:, 0], a.reps[0].angles[:, 1]
        assert np.max(np.abs(theta2)) == pytest.approx(2 * np.max(np.abs(theta1)), rel=1e-6)

    def test_closed_form_sample(self):
        a, _ = generate_simulated(SimConfig())
        assert a.reps[0].angles[0, 1] == pytest.approx(2 * math.sin(1.0), abs=1e-12)

    def test_seed_reproducible(self):
        cfg = SimConfig(noise=0.05, reps=3, seed=42)
        a1, b1 = generate_simulated(cfg)
        a2, b2 = generate_simulated(cfg)
        for d1, d2 in ((a1, a2), (b1, b2)):
            for r1, r2 in zip(d1.reps, d2.reps):
                np.testing.assert_array_equal(r1.angles, r2.angles)

    def test_different_seeds_differ(self):
        a1, _ = generate_simulated(SimConfig(noise=0.05, seed=1))
        a2, _ = generate_simulated(SimConfig(noise=0.05, seed=2))
        assert not np.array_equal(a1.reps[0].angles, a2.reps[0].angles)

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"amplitude": 0.0},
            {"omega": -1.0},
            {"duration": 0.0},
            {"noise": -0.1},
            {"reps": 0},
            {"samples": 2},
        ],
    )
    def test_config_validation(self, kwargs):
        with pytest.raises(ConfigError):
            SimConfig(**kwargs)
