"""
Command-line interface for tsentinel.

Subcommands:
- synth: synthesize a labeled trace from a built-in or file scenario
- features: PCA study of a trace and the resulting feature ranking
- eval: train kNN and CART, print the results table, optionally save the models
- detect: replay a trace through a saved model with majority-vote smoothing
- plot-data: per-metric CSVs comparing two traces
"""

import argparse
import logging
import sys
from collections import Counter
from pathlib import Path
from typing import List, Optional

from src.tsentinel import config
from src.tsentinel.classifiers import ALGORITHMS, CartParams, get_algorithm_by_name
from src.tsentinel.classifiers.model_io import ModelBundle, load_model_bundle, save_model_bundle
from src.tsentinel.detection import DetectorConfig, detect_events
from src.tsentinel.errors import FeatureError, ModelError, TsentinelError
from src.tsentinel.evaluation import (
    Provenance,
    build_report,
    evaluate_pipeline,
    fit_pipeline,
    format_results_table,
    holdout_split,
)
from src.tsentinel.export import (
    compare_scenarios,
    write_decision_csv,
    write_detection_report,
    write_experiment_report,
    write_plot_data,
)
from src.tsentinel.features import analyze_features
from src.tsentinel.features.serialization import save_pca_json
from src.tsentinel.synth import get_default_load_model, get_scenario_by_name, synthesize
from src.tsentinel.synth.scenarios import (
    BUILTIN_SCENARIOS,
    attack_onsets,
    read_scenario,
    write_scenario,
)
from src.tsentinel.telemetry import concatenate_traces, read_trace, write_trace
from src.tsentinel.telemetry.matrix import check_feature_names

logger = logging.getLogger("tsentinel.cli")

LOG_LEVELS = ["debug", "info", "warning", "error", "critical"]


# --- Argument types --------------------------------------------------------


def odd_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid integer: {text!r}") from None
    if value < 1 or value % 2 == 0:
        raise argparse.ArgumentTypeError(f"must be a positive odd integer, got {value}")
    return value


def seed_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid seed: {text!r}") from None
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError(f"seed must be in [0, 2^64), got {value}")
    return value


def fraction(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid number: {text!r}") from None
    if not 0 < value <= 1:
        raise argparse.ArgumentTypeError(f"must be in (0, 1], got {value}")
    return value


def non_negative_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid number: {text!r}") from None
    if not value >= 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {value}")
    return value


def positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def max_depth(text: str) -> Optional[int]:
    if text.lower() == "none":
        return None
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid depth: {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"depth must be >= 0, got {value}")
    return value


def feature_list(text: str) -> List[str]:
    names = [name.strip() for name in text.split(",") if name.strip()]
    try:
        return list(check_feature_names(names))
    except FeatureError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


# --- Helpers ---------------------------------------------------------------


def load_traces(paths: List[str]):
    """Read one or more trace files and join them in order."""
    traces = [read_trace(path) for path in paths]
    return traces[0] if len(traces) == 1 else concatenate_traces(traces)


def label_distribution(trace) -> str:
    if not trace.is_labeled:
        return "unlabeled"
    counts = Counter(label.value for label in trace.labels)
    return ", ".join(f"{name}: {count}" for name, count in sorted(counts.items()))


def print_metrics_line(name: str, m):
    print(
        f"{name}: accuracy {100 * m.accuracy:.2f}%, precision {100 * m.macro_precision:.2f}%, "
        f"recall {100 * m.macro_recall:.2f}%, F1 {100 * m.macro_f1:.2f}%"
    )


# --- Subcommands -----------------------------------------------------------


def cmd_synth(args) -> int:
    """Synthesize a trace and write it as CSV."""
    if args.scenario_file:
        spec = read_scenario(args.scenario_file)
        scenario_name = str(args.scenario_file)
    elif args.scenario:
        spec = get_scenario_by_name(args.scenario, args.seed)
        scenario_name = args.scenario
    else:
        print("Error: give a scenario name or --scenario-file", file=sys.stderr)
        return 2
    if args.noise_scale is not None:
        spec = spec.model_copy(update={"noise_scale": args.noise_scale})

    trace = synthesize(spec, get_default_load_model(), args.seed)
    write_trace(trace, args.out)
    if args.write_scenario:
        write_scenario(spec, args.write_scenario)

    print(f"Scenario {scenario_name} (seed {args.seed}): {len(trace)} samples written to {args.out}")
    print(f"Labels: {label_distribution(trace)}")
    return 0


def cmd_features(args) -> int:
    """Print explained variance and the feature ranking of a trace."""
    trace = load_traces(args.traces)
    analysis = analyze_features(trace, args.variance_threshold, args.top_features)

    print("Explained variance ratio:")
    cumulative = 0.0
    for index, ratio in enumerate(analysis.ratios, start=1):
        cumulative += ratio
        print(f"  PC{index}: {100 * ratio:6.2f}%  (cumulative {100 * cumulative:6.2f}%)")

    ranking = analysis.ranking
    print(
        f"\nFeature ranking ({ranking.components_used} component(s), "
        f"threshold {ranking.variance_threshold}):"
    )
    width = max(len(name) for name in ranking.names)
    for position, (name, score) in enumerate(ranking.entries, start=1):
        print(f"  {position}. {name.ljust(width)}  {score:.4f}")
    print(f"\nSelected features: {','.join(analysis.chosen)}")

    if args.save_pca:
        save_pca_json(analysis.pca, analysis.standardizer, args.save_pca)
        print(f"PCA model written to {args.save_pca}")
    return 0


def cmd_eval(args) -> int:
    """Train both classifiers, print the results table and write the report."""
    train = load_traces(args.train)
    seeds = {}
    if args.test:
        test = load_traces(args.test)
        test_sources = list(args.test)
    else:
        train, test = holdout_split(train, args.holdout_fraction, args.seed)
        test_sources = [f"holdout {args.holdout_fraction} of training data"]
        seeds["holdout"] = args.seed

    if args.features:
        features = args.features
        selection = "explicit"
    else:
        analysis = analyze_features(train, args.variance_threshold, args.top_features)
        features = analysis.chosen
        selection = (
            f"pca(variance_threshold={args.variance_threshold}, top={args.top_features})"
        )

    cart_params = CartParams(
        max_depth=args.max_depth,
        min_samples_split=args.min_samples_split,
        min_gain=args.min_gain,
    )
    pipeline = fit_pipeline(train, features, args.k, cart_params)
    results = evaluate_pipeline(pipeline, test)
    provenance = Provenance(
        train_sources=list(args.train),
        test_sources=test_sources,
        seeds=seeds,
        feature_selection=selection,
    )
    report = build_report(pipeline, results, len(test), args.k, cart_params, provenance)

    print(f"Features: {','.join(report.features)} ({selection})")
    print(format_results_table(report))
    if args.out:
        write_experiment_report(report, args.out)
        print(f"Report written to {args.out}")
    if args.save_model:
        bundle = ModelBundle(pipeline.feature_names, pipeline.standardizer, dict(pipeline.models))
        save_model_bundle(bundle, args.save_model)
        print(f"Models written to {args.save_model}")
    return 0


def cmd_detect(args) -> int:
    """Replay a trace through a saved model."""
    bundle = load_model_bundle(args.model)
    if args.classifier not in bundle.models:
        raise ModelError(f"model file {args.model} holds no {args.classifier} model")
    detector_config = DetectorConfig(
        model=bundle.models[args.classifier],
        standardizer=bundle.standardizer,
        feature_names=bundle.feature_names,
        window=args.window,
    )
    trace = load_traces(args.trace)
    segment_onsets = attack_onsets(read_scenario(args.scenario_file)) if args.scenario_file else None
    report = detect_events(trace, detector_config, segment_onsets)

    write_detection_report(report, args.out)
    decisions_path = args.decisions or Path(args.out).with_suffix(".csv")
    write_decision_csv(report, decisions_path)

    _, algorithm_id = get_algorithm_by_name(args.classifier)
    print(f"{algorithm_id}, window {args.window}: {len(report.events)} attack event(s)")
    for event in report.events:
        print(f"  {event.start_t:8.1f} s - {event.end_t:8.1f} s  ({event.duration:.0f} s)")
    if report.latencies:
        mean = report.mean_latency
        mean_text = "n/a" if mean is None else f"{mean:.2f} samples ({mean * report.interval:.1f} s)"
        print(
            f"Attack onsets: {len(report.latencies)}, missed: {report.missed_count}, "
            f"mean latency: {mean_text}"
        )
    if report.metrics is not None:
        print_metrics_line("Sample-level", report.metrics)
    print(f"Report written to {args.out}, decisions to {decisions_path}")
    return 0


def cmd_plotdata(args) -> int:
    """Write per-metric comparison CSVs for two traces."""
    trace_a = read_trace(args.trace_a)
    trace_b = read_trace(args.trace_b)
    if len(trace_a) != len(trace_b):
        print(
            f"Warning: traces have {len(trace_a)} and {len(trace_b)} samples, "
            f"truncating to {min(len(trace_a), len(trace_b))}",
            file=sys.stderr,
        )
    written = write_plot_data(trace_a, trace_b, args.out)
    print(f"Wrote {len(written)} files to {args.out}")
    if "summary" in written:
        print(f"{'metric':16} {'mean_a':>14} {'mean_b':>14} {'ratio':>10}")
        for item in compare_scenarios(trace_a, trace_b):
            print(f"{item.metric:16} {item.mean_a:14.4f} {item.mean_b:14.4f} {item.ratio:10.3f}")
    return 0


# --- Parser ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tsentinel",
        description="Telemetry-based DoS detection: synthesis, PCA, kNN/CART, replay",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    parser.add_argument(
        "--log-level",
        choices=LOG_LEVELS,
        default=config.get_default_log_level(),
        help=f"Logging level (default from {config.LOG_LEVEL_ENV_VAR})",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    formatter = argparse.ArgumentDefaultsHelpFormatter

    # synth
    synth = subparsers.add_parser(
        "synth", help="Synthesize a labeled trace", formatter_class=formatter
    )
    synth.add_argument("scenario", nargs="?", choices=BUILTIN_SCENARIOS, help="Built-in scenario")
    synth.add_argument("--scenario-file", help="Scenario text file to synthesize instead")
    synth.add_argument("--write-scenario", help="Also write the scenario as text to this path")
    synth.add_argument("--seed", type=seed_int, default=0, help="Noise (and mixed-scenario) seed")
    synth.add_argument(
        "--noise-scale", type=non_negative_float, default=None, help="Override the noise scale"
    )
    synth.add_argument("-o", "--out", required=True, help="Output trace CSV")
    synth.set_defaults(func=cmd_synth)

    # features
    features = subparsers.add_parser(
        "features", help="PCA feature ranking of a trace", formatter_class=formatter
    )
    features.add_argument("traces", nargs="+", help="Trace CSV file(s), concatenated in order")
    features.add_argument(
        "--variance-threshold", type=fraction, default=config.DEFAULT_VARIANCE_THRESHOLD
    )
    features.add_argument(
        "--top-features", type=positive_int, default=config.DEFAULT_TOP_FEATURES,
        help="Size of the automatic feature subset",
    )
    features.add_argument("--save-pca", help="Write the standardizer and PCA model as JSON")
    features.set_defaults(func=cmd_features)

    # eval
    evaluate = subparsers.add_parser(
        "eval", help="Train and evaluate kNN and CART", formatter_class=formatter
    )
    evaluate.add_argument("--train", nargs="+", required=True, help="Labeled training trace(s)")
    evaluate.add_argument(
        "--test", nargs="+", help="Labeled test trace(s); omit to hold out part of the training data"
    )
    evaluate.add_argument("--features", type=feature_list, help="Comma-separated metric names")
    evaluate.add_argument(
        "--variance-threshold", type=fraction, default=config.DEFAULT_VARIANCE_THRESHOLD,
        help="Used when --features is omitted",
    )
    evaluate.add_argument(
        "--top-features", type=positive_int, default=config.DEFAULT_TOP_FEATURES,
        help="Used when --features is omitted",
    )
    evaluate.add_argument("--k", type=odd_int, default=config.DEFAULT_K, help="kNN neighbours")
    evaluate.add_argument(
        "--max-depth", type=max_depth, default=config.DEFAULT_MAX_DEPTH,
        help="CART depth limit ('none' for unlimited)",
    )
    evaluate.add_argument(
        "--min-samples-split", type=positive_int, default=config.DEFAULT_MIN_SAMPLES_SPLIT
    )
    evaluate.add_argument("--min-gain", type=non_negative_float, default=config.DEFAULT_MIN_GAIN)
    evaluate.add_argument("--seed", type=seed_int, default=0, help="Holdout split seed")
    evaluate.add_argument(
        "--holdout-fraction", type=fraction, default=config.DEFAULT_HOLDOUT_FRACTION,
        help="Test share when --test is omitted",
    )
    evaluate.add_argument("-o", "--out", help="Write the experiment report as JSON")
    evaluate.add_argument("--save-model", help="Write both trained models as a bundle")
    evaluate.set_defaults(func=cmd_eval)

    # detect
    detect = subparsers.add_parser(
        "detect", help="Replay a trace through a saved model", formatter_class=formatter
    )
    detect.add_argument("trace", nargs="+", help="Trace CSV file(s), concatenated in order")
    detect.add_argument("--model", required=True, help="Model bundle from eval --save-model")
    detect.add_argument("--classifier", choices=list(ALGORITHMS), default="knn")
    detect.add_argument(
        "--window", type=odd_int, default=config.DEFAULT_WINDOW, help="Majority-vote window"
    )
    detect.add_argument("-o", "--out", required=True, help="Detection report JSON")
    detect.add_argument("--decisions", help="Decision CSV (default: report path with .csv)")
    detect.add_argument(
        "--scenario-file",
        help="Scenario the trace was synthesized from; times each attack segment separately",
    )
    detect.set_defaults(func=cmd_detect)

    # plot-data
    plot = subparsers.add_parser(
        "plot-data", help="Per-metric CSVs comparing two traces", formatter_class=formatter
    )
    plot.add_argument("trace_a", help="First trace (scenario_a column)")
    plot.add_argument("trace_b", help="Second trace (scenario_b column)")
    plot.add_argument("-o", "--out", required=True, help="Output directory")
    plot.set_defaults(func=cmd_plotdata)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """
    Main entry point for tsentinel with command-line argument parsing.

    Returns:
        Exit status: 0 on success, 1 on a runtime error; usage errors exit
        with status 2 from argparse
    """
    parser = build_parser()
    args = parser.parse_args(argv)

    numeric_level = getattr(logging, args.log_level.upper(), logging.INFO)
    logging.basicConfig(
        level=numeric_level,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    )

    try:
        return args.func(args)
    except (TsentinelError, OSError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
