import io

import pytest

from src.tsentinel.config import METRIC_NAMES
from src.tsentinel.errors import TraceFormatError
from src.tsentinel.telemetry import (
    Label,
    TelemetryTrace,
    parse_trace_csv,
    read_trace,
    write_trace,
    write_trace_csv,
)
from tests.conftest import make_sample

HEADER = "t," + ",".join(METRIC_NAMES)
ROW = "12.5,0.25,3,7,1500,2500,15,12"


def csv_text(times, label_column=None):
    header = HEADER + (",label" if label_column else "")
    lines = [header]
    for i, t in enumerate(times):
        line = f"{t},{ROW}"
        if label_column:
            line += f",{label_column[i]}"
        lines.append(line)
    return "\n".join(lines) + "\n"


def test_minimal_trace():
    trace = parse_trace_csv(csv_text([0, 5]))
    assert trace.interval == 5.0
    assert len(trace) == 2
    assert not trace.is_labeled


def test_non_uniform_spacing_reports_row():
    with pytest.raises(TraceFormatError, match="non-uniform timestamp spacing at row 3") as info:
        parse_trace_csv(csv_text([0, 5, 11]))
    assert info.value.row == 3


def test_interval_inferred_from_first_rows():
    assert parse_trace_csv(csv_text([0, 10, 20])).interval == 10.0


def test_missing_column():
    text = csv_text([0, 5]).replace(",net_pkts_out", "", 1)
    with pytest.raises(TraceFormatError, match="missing required column 'net_pkts_out'"):
        parse_trace_csv(text)


def test_duplicate_column_rejected():
    text = csv_text([0, 5]).replace("t,cpu_util,", "t,cpu_util,cpu_util,", 1)
    with pytest.raises(TraceFormatError, match="duplicate columns") as info:
        parse_trace_csv(text)
    assert info.value.field == "cpu_util"


def test_malformed_number():
    text = csv_text([0, 5]).replace("\n5,12.5", "\n5,abc", 1)
    with pytest.raises(TraceFormatError, match="malformed number") as info:
        parse_trace_csv(text)
    assert info.value.row == 2
    assert info.value.field == "cpu_util"


def test_out_of_range_names_field():
    text = csv_text([0, 5]).replace("\n0,12.5", "\n0,120", 1)
    with pytest.raises(TraceFormatError, match="cpu_util") as info:
        parse_trace_csv(text)
    assert info.value.row == 1


def test_mixed_labeling():
    text = csv_text([0, 5], label_column=["attack", ""])
    with pytest.raises(TraceFormatError, match="mixed labeling") as info:
        parse_trace_csv(text)
    assert info.value.row == 2


def test_unknown_label():
    with pytest.raises(TraceFormatError, match="unknown label"):
        parse_trace_csv(csv_text([0], label_column=["maybe"]))


def test_labels_parsed():
    trace = parse_trace_csv(csv_text([0, 5], label_column=["no_attack", "attack"]))
    assert trace.labels == [Label.BENIGN, Label.ATTACK]


def test_header_only_gives_empty_trace():
    trace = parse_trace_csv(HEADER + "\n")
    assert len(trace) == 0


def test_accepts_stream():
    assert len(parse_trace_csv(io.StringIO(csv_text([0, 5, 10])))) == 3


def test_round_trip_is_lossless():
    samples = tuple(
        make_sample(5.0 * i, Label.from_flag(i % 2 == 1), cpu_util=0.1 * i + 1 / 3, net_bytes_in=1e6 / 7)
        for i in range(4)
    )
    trace = TelemetryTrace(samples=samples)
    text = write_trace_csv(trace)
    assert parse_trace_csv(text) == trace
    assert write_trace_csv(parse_trace_csv(text)) == text


@pytest.mark.parametrize("interval,t", [(3.0, 3.0), (10.0, 10.0), (2.0, 0.0), (5.0, 25.0)])
def test_single_sample_round_trip(interval, t):
    trace = TelemetryTrace(interval=interval, samples=(make_sample(t, Label.ATTACK),))
    text = write_trace_csv(trace)
    parsed = parse_trace_csv(text)
    assert parsed.samples == trace.samples
    assert write_trace_csv(parsed) == text


def test_single_sample_off_default_grid_takes_its_timestamp():
    trace = TelemetryTrace(interval=3.0, samples=(make_sample(3.0),))
    assert parse_trace_csv(write_trace_csv(trace)) == trace


def test_unlabeled_trace_has_no_label_column():
    trace = TelemetryTrace(samples=(make_sample(0.0), make_sample(5.0)))
    assert write_trace_csv(trace).splitlines()[0] == HEADER


def test_read_trace_skips_byte_order_mark(tmp_path):
    path = tmp_path / "bom.csv"
    path.write_bytes(b"\xef\xbb\xbf" + csv_text([0, 5]).encode("utf-8"))
    trace = read_trace(path)
    assert len(trace) == 2
    assert trace.samples[0].cpu_util == 12.5


def test_file_round_trip(tmp_path):
    trace = TelemetryTrace(samples=(make_sample(0.0, Label.BENIGN), make_sample(5.0, Label.ATTACK)))
    path = write_trace(trace, tmp_path / "nested" / "trace.csv")
    assert read_trace(path) == trace
