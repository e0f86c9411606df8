"""Report serialization, CSV plot exports, and the human summary."""

import csv
import json

import numpy as np
import pytest

import coordmetrics
from coordmetrics import (
    AnalysisReport,
    NormalizedGrid,
    build_metadata,
    canonical_json,
    classify,
    compute_jcvpca,
    export_plot_data,
    human_summary,
    jsvcrp_all_pairs,
    render_json,
    report_to_dict,
    shuffle_split_baseline,
)
from conftest import make_smooth_dataset


@pytest.fixture(scope="module")
def small_report():
    a = make_smooth_dataset(110, n_joints=2, n_reps=6, name="reference")
    b = make_smooth_dataset(111, n_joints=2, n_reps=5, name="comparison")
    grid = NormalizedGrid()
    result = compute_jcvpca(a, b, 2, p=1)
    pairs = jsvcrp_all_pairs(a, b, grid)
    return AnalysisReport(
        metadata=build_metadata(a.name, b.name, a.joints, "deg", 2, 1, len(grid)),
        jcvpca=result,
        jsvcrp=pairs,
    )


@pytest.fixture(scope="module")
def report_with_baseline():
    a = make_smooth_dataset(112, n_joints=2, n_reps=6, name="reference")
    b = make_smooth_dataset(113, n_joints=2, n_reps=5, name="comparison")
    grid = NormalizedGrid()
    result = compute_jcvpca(a, b, 2, p=1)
    pairs = jsvcrp_all_pairs(a, b, grid)
    baseline = shuffle_split_baseline(a, n_splits=3, seed=5, m=2, grid=grid)
    verdicts = {
        "jcvpca": {"rule": "std", "labels": classify(result, baseline).labels()},
        "jsvcrp": [
            {"rule": "std", "pair": list(r.pair), "labels": classify(r, baseline).labels()}
            for r in pairs
        ],
    }
    return AnalysisReport(
        metadata=build_metadata(a.name, b.name, a.joints, "deg", 2, 1, len(grid)),
        jcvpca=result,
        jsvcrp=pairs,
        baseline=baseline,
        verdicts=verdicts,
    )


class TestRenderJson:
    def test_round_trip_byte_identical(self, small_report):
        text = render_json(small_report)
        assert canonical_json(json.loads(text)) == text

    def test_no_baseline_is_null(self, small_report):
        document = json.loads(render_json(small_report))
        assert document["baseline"] is None
        assert document["verdicts"] is None

    def test_version_echoed(self, small_report):
        document = json.loads(render_json(small_report))
        assert document["metadata"]["tool_version"] == coordmetrics.__version__

    def test_conventions_block_present(self, small_report):
        document = json.loads(render_json(small_report))
        conventions = document["conventions"]
        for key in ("centering", "delta_orientation", "crp_sign", "integration_axis", "phase_angle"):
            assert key in conventions

    def test_baseline_and_verdicts_serialized(self, report_with_baseline):
        document = json.loads(render_json(report_with_baseline))
        assert document["baseline"]["n_splits"] == 3
        assert document["baseline"]["seed"] == 5
        assert document["verdicts"]["jcvpca"]["labels"]


class TestExportPlotData:
    def test_expected_files(self, small_report, tmp_path):
        written = export_plot_data(small_report, tmp_path)
        names = {p.name for p in written}
        assert names == {
            "jrw_a.csv",
            "jrw_b.csv",
            "jcvpca_delta.csv",
            "jcvpca_weighted_delta.csv",
            "crp_pair_1_2.csv",
        }
        rows = (tmp_path / "jrw_a.csv").read_text().strip().splitlines()
        assert rows[0] == "pc,j1,j2"
        assert len(rows) == 3  # header + 2 components

    def test_crp_csv_row_count(self, small_report, tmp_path):
        export_plot_data(small_report, tmp_path)
        rows = (tmp_path / "crp_pair_1_2.csv").read_text().strip().splitlines()
        assert len(rows) == 101 + 1

    def test_full_precision_round_trip(self, small_report, tmp_path):
        export_plot_data(small_report, tmp_path)
        with (tmp_path / "jcvpca_delta.csv").open() as handle:
            rows = list(csv.reader(handle))
        values = np.array([[float(v) for v in row[1:]] for row in rows[1:]])
        np.testing.assert_array_equal(values, small_report.jcvpca.delta)

    def test_reexport_is_deterministic(self, small_report, tmp_path):
        export_plot_data(small_report, tmp_path)
        first = (tmp_path / "jrw_b.csv").read_bytes()
        export_plot_data(small_report, tmp_path)
        assert (tmp_path / "jrw_b.csv").read_bytes() == first

    def test_baseline_summary_written(self, report_with_baseline, tmp_path):
        written = export_plot_data(report_with_baseline, tmp_path)
        assert any(p.name == "baseline_summary.csv" for p in written)
        rows = (tmp_path / "baseline_summary.csv").read_text().strip().splitlines()
        # 2x2 jcvpca elements + 1 pair
        assert len(rows) == 1 + 4 + 1


class TestHumanSummary:
    def test_percentages_and_tags(self, report_with_baseline):
        text = human_summary(report_with_baseline)
        assert "JcvPCA" in text and "JsvCRP" in text
        assert "%" in text
        assert "PC1" in text and "PC2" in text
        assert "natural variability" in text

    def test_round_trip_document_structure(self, small_report):
        document = report_to_dict(small_report)
        assert set(document) == {
            "metadata",
            "conventions",
            "jcvpca",
            "jsvcrp",
            "baseline",
            "verdicts",
        }
        assert len(document["jsvcrp"]) == 1
        assert np.asarray(document["jcvpca"]["delta"]).shape == (2, 2)
