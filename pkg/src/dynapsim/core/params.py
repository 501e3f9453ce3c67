from typing import Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..packets.words import SynType


class NeuronParams(BaseModel):
    """AdEx parameters in pF, nS, mV, pA and ms.

    delta_T = 0 selects the leaky integrate-and-fire limit, which spikes at
    V_T instead of V_cut.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    C_mem: float = Field(200.0, gt=0)
    g_L: float = Field(10.0, gt=0)
    E_L: float = -70.0
    V_T: float = -50.0
    delta_T: float = Field(2.0, ge=0)
    a: float = 0.0
    b: float = 0.0
    tau_w: float = Field(100.0, gt=0)
    V_reset: float = -70.0
    V_cut: float = 0.0
    t_ref: float = Field(2.0, ge=0)
    # Log-normal sigma of per-neuron multiplicative mismatch.
    mismatch: float = Field(0.0, ge=0)

    @model_validator(mode="after")
    def _cut_above_threshold(self):
        if self.delta_T > 0 and self.V_cut <= self.V_T:
            raise ValueError("V_cut must lie above V_T")
        if self.V_reset >= (self.V_cut if self.delta_T > 0 else self.V_T):
            raise ValueError("V_reset must lie below the spike threshold")
        return self


class SynapseParams(BaseModel):
    """One DPI accumulator type: weight in pA (nS for shunting)."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    tau: float = Field(5.0, gt=0)
    weight: float = Field(100.0, ge=0)
    # Pulse extender output width, fractions of a us up to tens of ms.
    pulse_us: float = Field(100.0, gt=0, le=100_000)


class CoreParams(BaseModel):
    """Biases shared by every neuron of one core."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    neuron: NeuronParams = Field(default_factory=NeuronParams)
    fast_exc: SynapseParams = Field(default_factory=SynapseParams)
    slow_exc: SynapseParams = SynapseParams(tau=100.0)
    sub_inh: SynapseParams = Field(default_factory=SynapseParams)
    shunt_inh: SynapseParams = SynapseParams(weight=1.0)

    def synapse(self, syn: SynType) -> SynapseParams:
        match syn:
            case SynType.FastExc:
                return self.fast_exc
            case SynType.SlowExc:
                return self.slow_exc
            case SynType.SubInh:
                return self.sub_inh
        return self.shunt_inh

    def synapse_table(self) -> Tuple[list, list, list]:
        """(tau ms, weight, pulse ms) indexed by SynType."""
        rows = [self.synapse(syn) for syn in SynType]
        return (
            [row.tau for row in rows],
            [row.weight for row in rows],
            [row.pulse_us * 1e-3 for row in rows],
        )
