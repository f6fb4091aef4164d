import csv
import logging
import math

import pytest

from src.tsentinel.config import METRIC_NAMES
from src.tsentinel.errors import TraceFormatError
from src.tsentinel.export import compare_scenarios, write_plot_data
from src.tsentinel.export.plot_data import MetricComparison
from src.tsentinel.synth import LoadModel, attack_scenario, baseline_scenario, synthesize
from src.tsentinel.telemetry import TelemetryTrace
from tests.conftest import make_sample


@pytest.fixture(scope="module")
def scenario_traces():
    model = LoadModel()
    return synthesize(baseline_scenario(), model, 0), synthesize(attack_scenario(), model, 1)


def read_rows(path):
    with open(path, newline="") as f:
        return list(csv.reader(f))


def test_one_file_per_metric(tmp_path, scenario_traces):
    written = write_plot_data(*scenario_traces, tmp_path)
    assert sorted(p.name for name, p in written.items() if name != "summary") == sorted(
        f"{name}.csv" for name in METRIC_NAMES
    )
    rows = read_rows(tmp_path / "cpu_util.csv")
    assert rows[0] == ["t", "scenario_a", "scenario_b"]
    assert len(rows) == 361
    assert float(rows[1][1]) == scenario_traces[0].samples[0].cpu_util


def test_same_trace_twice(tmp_path, scenario_traces):
    write_plot_data(scenario_traces[0], scenario_traces[0], tmp_path)
    for name in METRIC_NAMES:
        for row in read_rows(tmp_path / f"{name}.csv")[1:]:
            assert row[1] == row[2]


def test_truncates_to_shorter(tmp_path, caplog):
    long = TelemetryTrace(samples=tuple(make_sample(5.0 * i) for i in range(5)))
    short = TelemetryTrace(samples=tuple(make_sample(5.0 * i) for i in range(3)))
    with caplog.at_level(logging.WARNING):
        write_plot_data(long, short, tmp_path)
    assert "truncating" in caplog.text
    assert len(read_rows(tmp_path / "net_pkts_in.csv")) == 4


def test_interval_mismatch(tmp_path):
    a = TelemetryTrace(interval=5.0, samples=(make_sample(0.0),))
    b = TelemetryTrace(interval=10.0, samples=(make_sample(0.0),))
    with pytest.raises(TraceFormatError, match="interval mismatch"):
        write_plot_data(a, b, tmp_path)


def test_summary_shows_attack_contrast(scenario_traces):
    comparison = {item.metric: item for item in compare_scenarios(*scenario_traces)}
    assert list(comparison) == list(METRIC_NAMES)
    assert comparison["net_pkts_in"].ratio > 2
    assert comparison["cpu_util"].ratio > 2
    assert comparison["disk_read_reqs"].ratio == pytest.approx(1.0, abs=0.2)


def test_ratio_edge_cases():
    assert MetricComparison(metric="cpu_util", mean_a=0.0, mean_b=0.0).ratio == 1.0
    assert math.isinf(MetricComparison(metric="cpu_util", mean_a=0.0, mean_b=2.0).ratio)
