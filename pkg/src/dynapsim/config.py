import json
import logging
from pathlib import Path
from typing import Dict, List, Literal

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from .core.params import CoreParams, NeuronParams, SynapseParams
from .errors import ConfigError
from .fabric.config import FabricConfig

logger = logging.getLogger(__name__)

DEFAULT_PARAMS = "default"


class PoissonSource(BaseModel):
    """Independent Poisson trains on every neuron of a virtual population."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    population: str
    rate_hz: float = Field(gt=0)
    start_ms: float = Field(0.0, ge=0)
    stop_ms: float | None = Field(None, gt=0)


class AerInput(BaseModel):
    """Maps sensor pixels onto a virtual population, row-major."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    path: str
    format: Literal["csv", "binary-v1"] = "csv"
    population: str
    width: int = Field(gt=0)
    height: int = Field(gt=0)
    polarity: Literal["on", "off", "both"] = "both"


class SimConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    fabric: FabricConfig = Field(default_factory=FabricConfig)
    # Populations without a `params` name run with "default".
    params: Dict[str, CoreParams] = Field(
        default_factory=lambda: {DEFAULT_PARAMS: CoreParams()}
    )
    dt_ms: float = Field(0.1, gt=0)
    seed: int = Field(0, ge=0)
    duration_ms: float = Field(100.0, gt=0)
    jitter_ns: float = Field(0.0, ge=0)
    stimuli: List[PoissonSource] = Field(default_factory=list)
    aer: AerInput | None = None

    def core_params(self, name: str | None) -> CoreParams:
        key = name or DEFAULT_PARAMS
        if key not in self.params:
            if key == DEFAULT_PARAMS:
                return CoreParams()
            raise ConfigError(f"params: no parameter set named '{key}'")
        return self.params[key]


class GridConfig(BaseModel):
    """Design-space grid for analyze-memory; every combination is a row."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    N: List[float] = Field(default_factory=lambda: [2.0**20])
    F: List[float] = Field(default_factory=lambda: [2.0**13])
    C: List[float] = Field(default_factory=lambda: [256.0])
    alpha: List[float] = Field(default_factory=lambda: [1.0])
    # Empty means "evaluate at the optimum".
    M: List[float] = Field(default_factory=list)
    hardware_bits: bool = False
    scaling_sizes: List[int] = Field(
        default_factory=lambda: [10**6, 10**8, 10**10]
    )
    extra_bits: int = Field(2, ge=0)
    rates_hz: List[float] = Field(default_factory=lambda: [20.0, 100.0])


def _layer(weight: float, inhibition: float = 0.0, mismatch: float = 0.0):
    synapse = SynapseParams(tau=2.0, weight=weight, pulse_us=1000.0)
    return CoreParams(
        neuron=NeuronParams(C_mem=50.0, t_ref=1.0, mismatch=mismatch),
        fast_exc=synapse,
        sub_inh=SynapseParams(tau=2.0, weight=inhibition, pulse_us=1000.0),
    )


class CnnDemoConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    fabric: FabricConfig = FabricConfig(grid_w=2)
    seed: int = Field(0, ge=0)
    dt_ms: float = Field(0.1, gt=0)
    jitter_ns: float = Field(0.0, ge=0)
    train_per_class: int = Field(2, ge=1)
    test_presentations: int = Field(40, ge=1)
    presentation_ms: float = Field(45.0, gt=0)
    max_rate_hz: float = Field(400.0, gt=0)
    delay_ms: float = Field(24.0, ge=0)
    window_ms: float = Field(20.0, gt=0)
    readout_size: int = Field(64, ge=1)
    latency_bin_ms: float = Field(5.0, gt=0)
    # The kernel gain is the conv core's fast_exc weight; -1 template
    # entries use its sub_inh weight. Inhibition stays below the gain so a
    # uniformly dark field still drives a conv cell past rheobase.
    conv: CoreParams = _layer(60.0, inhibition=40.0)
    pool: CoreParams = _layer(1500.0)
    output: CoreParams = _layer(60.0, mismatch=0.1)

    def layer_params(self) -> Dict[str, CoreParams]:
        return {"conv": self.conv, "pool": self.pool, "output": self.output}


def load_config[T: BaseModel](path: str | Path | None, schema: type[T]) -> T:
    """Reads a JSON config; None gives the schema's defaults."""
    if path is None:
        return schema()
    text = Path(path).read_text()
    try:
        config = schema.model_validate(json.loads(text))
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path}: not valid JSON: {e}") from e
    except ValidationError as e:
        raise ConfigError(f"{path}: {e}") from e
    logger.debug("loaded %s from %s", schema.__name__, path)
    return config
