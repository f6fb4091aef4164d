"""
tsentinel - DoS detection from cloud resource-usage telemetry
"""

__version__ = "0.1.0"
