"""
Load model: how legitimate requests and attack packets move each metric.

The default numbers are a calibration, not a measurement. They keep the
contrasts seen when the two 30-minute experiments are plotted side by side:
attack traffic raises incoming packets and bytes, CPU, disk writes and
memory, while disk reads barely move.

At the slow attack rates only cpu_util moves by more than its noise, and
then by about 4.5 standard deviations, so the slowest phase overlaps
legitimate load at the tails. Legitimate load shifts every network and disk
metric by roughly one standard deviation of background traffic.
"""

import logging
import os
from pathlib import Path
from typing import Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from src.tsentinel.config import LOADMODEL_ENV_VAR, MAX_ATTACK_RATE, METRIC_NAMES
from src.tsentinel.errors import ScenarioError

logger = logging.getLogger("tsentinel.synth.load_model")


class MetricVector(BaseModel):
    """One non-negative number per canonical metric."""

    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    cpu_util: float = Field(default=0.0, ge=0)
    mem_used: float = Field(default=0.0, ge=0)
    disk_read_reqs: float = Field(default=0.0, ge=0)
    disk_write_reqs: float = Field(default=0.0, ge=0)
    net_bytes_in: float = Field(default=0.0, ge=0)
    net_bytes_out: float = Field(default=0.0, ge=0)
    net_pkts_in: float = Field(default=0.0, ge=0)
    net_pkts_out: float = Field(default=0.0, ge=0)

    def as_array(self) -> np.ndarray:
        return np.array([getattr(self, name) for name in METRIC_NAMES], dtype=np.float64)


class LoadModel(BaseModel):
    """
    Linear resource-usage model of a web server under legitimate and SYN-flood load.

    Per sample, metric = baseline + legit_rate * legit_cost
    + attack_rate * attack_cost + noise, plus a half-open-connection backlog
    term on mem_used, then clamped to the metric's legal range.
    """

    model_config = ConfigDict(frozen=True)

    baseline: MetricVector = Field(
        default_factory=lambda: MetricVector(
            cpu_util=2.0,
            mem_used=0.20,
            disk_read_reqs=3.0,
            disk_write_reqs=4.0,
            net_bytes_in=20000.0,
            net_bytes_out=40000.0,
            net_pkts_in=150.0,
            net_pkts_out=120.0,
        ),
        description="Idle level of each metric",
    )
    legit_cost: MetricVector = Field(
        default_factory=lambda: MetricVector(
            cpu_util=0.025,
            mem_used=0.001,
            disk_read_reqs=0.02,
            disk_write_reqs=0.1,
            net_bytes_in=100.0,
            net_bytes_out=200.0,
            net_pkts_in=1.0,
            net_pkts_out=1.0,
        ),
        description="Metric increase per legitimate request/s",
    )
    attack_cost: MetricVector = Field(
        default_factory=lambda: MetricVector(
            cpu_util=5.4,
            disk_write_reqs=0.1,
            net_bytes_in=60.0,
            net_bytes_out=58.0,
            net_pkts_in=1.0,
            net_pkts_out=1.0,
        ),
        description="Metric increase per attack packet/s (SYN in, SYN-ACK out)",
    )
    noise_std: MetricVector = Field(
        default_factory=lambda: MetricVector(
            cpu_util=4.0,
            mem_used=0.005,
            disk_read_reqs=1.5,
            disk_write_reqs=4.0,
            net_bytes_in=4000.0,
            net_bytes_out=8000.0,
            net_pkts_in=40.0,
            net_pkts_out=40.0,
        ),
        description="Standard deviation of the Gaussian noise per metric",
    )
    backlog_growth: float = Field(
        default=0.001,
        ge=0,
        description="Memory fraction held per queued half-open connection",
    )
    backlog_cap: float = Field(
        default=0.15, ge=0, le=1, description="Largest memory fraction the backlog can hold"
    )
    backlog_relax: float = Field(
        default=0.5,
        ge=0,
        le=1,
        description="Fraction of the backlog left after one attack-free interval",
    )
    max_attack_rate: float = Field(
        default=MAX_ATTACK_RATE,
        gt=0,
        description="Packets per second realized by the MAX attack interval",
    )


def load_load_model(path: Union[str, Path]) -> LoadModel:
    """
    Load a LoadModel from a JSON file.

    Raises:
        ScenarioError: If the file is not a valid LoadModel document
    """
    path = Path(path)
    logger.info(f"Loading load model from {path}")
    try:
        return LoadModel.model_validate_json(path.read_text())
    except ValidationError as e:
        raise ScenarioError(f"invalid load model file {path}: {e}") from None


def save_load_model(model: LoadModel, path: Union[str, Path]) -> Path:
    """Write a LoadModel as a JSON document."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(model.model_dump_json(indent=2))
    return path


def get_default_load_model(env: Optional[dict] = None) -> LoadModel:
    """
    Return the LoadModel to use when none is given explicitly.

    The TSENTINEL_LOADMODEL environment variable, when set, names a JSON file
    that replaces the built-in calibration.
    """
    env = os.environ if env is None else env
    override = env.get(LOADMODEL_ENV_VAR)
    if override:
        logger.info(f"{LOADMODEL_ENV_VAR} set, using load model from {override}")
        return load_load_model(override)
    return LoadModel()
