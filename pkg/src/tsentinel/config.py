"""
Default settings for tsentinel.

Library code reads these constants; the CLI exposes most of them as flags.
"""

import os

# Environment variables
LOADMODEL_ENV_VAR = "TSENTINEL_LOADMODEL"
LOG_LEVEL_ENV_VAR = "TSENTINEL_LOG_LEVEL"

# Telemetry sampling
DEFAULT_INTERVAL_S = 5.0

# Canonical metric order (also the CSV column order)
METRIC_NAMES = (
    "cpu_util",
    "mem_used",
    "disk_read_reqs",
    "disk_write_reqs",
    "net_bytes_in",
    "net_bytes_out",
    "net_pkts_in",
    "net_pkts_out",
)

# Subset kept after the PCA study on the two 30-minute experiments
DEFAULT_FEATURES = (
    "cpu_util",
    "disk_write_reqs",
    "net_bytes_in",
    "net_bytes_out",
    "net_pkts_in",
    "net_pkts_out",
)

# Scenario protocol
SCENARIO_DURATION_S = 1800
IDLE_GAP_S = 10
ATTACK_PHASE_S = 600
MIXED_DURATION_S = 7200
MIXED_SEGMENT_S = 600
MIXED_MIN_PER_KIND = 2
ATTACK_INTERVALS_MS = (300, 250, "MAX")
DEFAULT_LEGIT_RATE = 40.0
MAX_ATTACK_RATE = 10_000.0

# Feature pipeline
DEFAULT_VARIANCE_THRESHOLD = 0.95
DEFAULT_TOP_FEATURES = 6

# Classifiers
DEFAULT_K = 5
DEFAULT_MAX_DEPTH = 12
DEFAULT_MIN_SAMPLES_SPLIT = 2
DEFAULT_MIN_GAIN = 0.0

# Online detector
DEFAULT_WINDOW = 5

# Evaluation
DEFAULT_HOLDOUT_FRACTION = 0.3


def get_default_log_level():
    """Return the log level named by the environment, or "info"."""
    return os.environ.get(LOG_LEVEL_ENV_VAR, "info").lower()
