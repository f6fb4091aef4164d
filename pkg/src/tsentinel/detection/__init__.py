"""
Streaming replay of telemetry through a trained classifier.
"""

from src.tsentinel.detection.detector import (
    AttackEvent,
    Decision,
    DetectionReport,
    DetectorConfig,
    OnlineDetector,
    OnsetLatency,
    detect_events,
    events_from_decisions,
)

__all__ = [
    "AttackEvent",
    "Decision",
    "DetectionReport",
    "DetectorConfig",
    "OnlineDetector",
    "OnsetLatency",
    "detect_events",
    "events_from_decisions",
]
