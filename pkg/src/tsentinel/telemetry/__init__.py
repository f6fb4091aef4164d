"""
Telemetry observations, traces and their CSV form.
"""

from src.tsentinel.telemetry.csv_io import (
    parse_trace_csv,
    read_trace,
    write_trace,
    write_trace_csv,
)
from src.tsentinel.telemetry.matrix import FeatureMatrix, to_feature_matrix
from src.tsentinel.telemetry.models import (
    Label,
    MetricSample,
    TelemetryTrace,
    concatenate_traces,
)

__all__ = [
    "FeatureMatrix",
    "Label",
    "MetricSample",
    "TelemetryTrace",
    "concatenate_traces",
    "parse_trace_csv",
    "read_trace",
    "to_feature_matrix",
    "write_trace",
    "write_trace_csv",
]
