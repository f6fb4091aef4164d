"""
Files written for downstream plotting and record keeping.
"""

from src.tsentinel.export.plot_data import (
    MetricComparison,
    compare_scenarios,
    write_plot_data,
)
from src.tsentinel.export.reports import (
    read_detection_report,
    read_experiment_report,
    write_decision_csv,
    write_detection_report,
    write_experiment_report,
)

__all__ = [
    "MetricComparison",
    "compare_scenarios",
    "read_detection_report",
    "read_experiment_report",
    "write_decision_csv",
    "write_detection_report",
    "write_experiment_report",
    "write_plot_data",
]
