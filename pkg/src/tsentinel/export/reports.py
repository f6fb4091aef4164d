"""
Report files: experiment and detection reports as JSON, decisions as CSV.
"""

import csv
import logging
from pathlib import Path
from typing import Union

from pydantic import ValidationError

from src.tsentinel.detection.detector import DetectionReport
from src.tsentinel.errors import EvaluationError
from src.tsentinel.evaluation.experiment import ExperimentReport

logger = logging.getLogger("tsentinel.export.reports")


def _write_text(path: Union[str, Path], text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    return path


def write_experiment_report(report: ExperimentReport, path: Union[str, Path]) -> Path:
    path = _write_text(path, report.model_dump_json(indent=2))
    logger.info(f"Saved experiment report to {path}")
    return path


def read_experiment_report(path: Union[str, Path]) -> ExperimentReport:
    try:
        return ExperimentReport.model_validate_json(Path(path).read_text())
    except ValidationError as e:
        raise EvaluationError(f"invalid experiment report {path}: {e}") from None


def write_detection_report(report: DetectionReport, path: Union[str, Path]) -> Path:
    path = _write_text(path, report.model_dump_json(indent=2))
    logger.info(f"Saved detection report to {path}")
    return path


def read_detection_report(path: Union[str, Path]) -> DetectionReport:
    try:
        return DetectionReport.model_validate_json(Path(path).read_text())
    except ValidationError as e:
        raise EvaluationError(f"invalid detection report {path}: {e}") from None


def write_decision_csv(report: DetectionReport, path: Union[str, Path]) -> Path:
    """Write the smoothed decisions as a two-column t,decision CSV."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["t", "decision"])
        for decision in report.decisions:
            writer.writerow([repr(float(decision.t)), decision.smoothed.value])
    logger.info(f"Saved {len(report.decisions)} decisions to {path}")
    return path
