"""Metrics for quantifying inter-joint coordination changes between datasets.

Two complementary measures are provided. JcvPCA captures how much each
joint's contribution to the movement changed: the comparison dataset is
projected into the reference dataset's principal-component frame and the
per-joint weights of both frames are subtracted. JsvCRP captures timing:
for each joint pair the area between the two datasets' mean continuous
relative phase curves measures the change in synchronization. A
shuffle-split baseline turns either number into a verdict against the
natural variability of the reference condition.
"""

__version__ = "0.1.0"

from .baseline import (
    BaselineReport,
    SignificanceVerdict,
    classify,
    shuffle_split_baseline,
)
from .crp import (
    CrpCurve,
    NoiseRatio,
    PhaseAngleSeries,
    crp_pair,
    mean_crp,
    noise_ratio_guard,
    phase_angle,
    write_curve_csv,
)
from .dataset import (
    Dataset,
    DtwAlignment,
    NormalizedGrid,
    Repetition,
    SimConfig,
    VelocityProfile,
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
from .errors import (
    ConfigError,
    CoordMetricsError,
    DegenerateRangeError,
    EigenvalueTieWarning,
    EmptySelectionWarning,
    MetricError,
    ParameterError,
    SampleSizeWarning,
    SchemaError,
    ValidationError,
)
from .jcvpca import JcvPcaResult, JrwMatrices, compute_jcvpca, compute_jrw, select_rows
from .jsvcrp import JsvCrpResult, area_between, jsvcrp, jsvcrp_all_pairs
from .pca import PcaModel, fit_pca, project
from .report import (
    AnalysisReport,
    build_metadata,
    canonical_json,
    export_plot_data,
    human_summary,
    render_json,
    report_to_dict,
)

__all__ = [
    "__version__",
    "AnalysisReport",
    "BaselineReport",
    "ConfigError",
    "CoordMetricsError",
    "CrpCurve",
    "Dataset",
    "DegenerateRangeError",
    "DtwAlignment",
    "EigenvalueTieWarning",
    "EmptySelectionWarning",
    "JcvPcaResult",
    "JrwMatrices",
    "JsvCrpResult",
    "MetricError",
    "NoiseRatio",
    "NormalizedGrid",
    "ParameterError",
    "PcaModel",
    "PhaseAngleSeries",
    "Repetition",
    "SampleSizeWarning",
    "SchemaError",
    "SignificanceVerdict",
    "SimConfig",
    "ValidationError",
    "VelocityProfile",
    "area_between",
    "build_metadata",
    "canonical_json",
    "center_dataset",
    "classify",
    "compute_jcvpca",
    "compute_jrw",
    "compute_velocity",
    "crp_pair",
    "export_plot_data",
    "fit_pca",
    "generate_simulated",
    "human_summary",
    "jsvcrp",
    "jsvcrp_all_pairs",
    "load_dataset",
    "mean_crp",
    "moving_average",
    "noise_ratio_guard",
    "phase_angle",
    "project",
    "range_normalize",
    "render_json",
    "report_to_dict",
    "select_rows",
    "shuffle_split_baseline",
    "time_align_dtw",
    "time_normalize_linear",
    "write_curve_csv",
    "write_dataset_csv",
]
