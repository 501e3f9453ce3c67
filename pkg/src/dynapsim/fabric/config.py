from typing import Dict, Literal, Tuple

from pydantic import BaseModel, ConfigDict, Field


class LatencyTable(BaseModel):
    """Per-stage latencies in ns."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    broadcast: float = Field(27.0, ge=0)
    chip_traverse: float = Field(15.4, ge=0)
    r3_hop: float = Field(2.5, ge=0)
    # One 20-bit read at the 750 Mb/s LUT speed.
    r1_loop_read: float = Field(20 / 0.75, ge=0)
    r2_hop: float = Field(1.0, ge=0)


class EnergyTable(BaseModel):
    """Per-operation energies in pJ."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    spike_gen: float = Field(ge=0)
    encode_append: float = Field(ge=0)
    broadcast_same_core: float = Field(ge=0)
    route_diff_core: float = Field(ge=0)
    pulse_extend: float = Field(ge=0)
    r3_hop: float = Field(0.0, ge=0)


ENERGY_PRESETS: Dict[str, EnergyTable] = {
    "1.8V": EnergyTable(
        spike_gen=883,
        encode_append=883,
        broadcast_same_core=6840,
        route_diff_core=360,
        pulse_extend=324,
    ),
    "1.3V": EnergyTable(
        spike_gen=260,
        encode_append=507,
        broadcast_same_core=2200,
        route_diff_core=78,
        pulse_extend=26,
        r3_hop=17,
    ),
}

type Supply = Literal["1.8V", "1.3V"]


class FabricConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    grid_w: int = Field(1, ge=1)
    grid_h: int = Field(1, ge=1)
    cores_per_chip: int = Field(4, ge=1, le=16)
    neurons_per_core: int = Field(256, ge=1)
    cam_slots: int = Field(64, ge=1)
    sram_slots: int = Field(4, ge=1, le=4)
    latency: LatencyTable = Field(default_factory=LatencyTable)
    supply: Supply = "1.8V"
    # Overrides the supply preset when given.
    energy: EnergyTable | None = None
    throttle_io: bool = False
    input_rate_mev: float = Field(30.0, gt=0)
    output_rate_mev: float = Field(21.0, gt=0)
    forward_misaddressed: bool = False
    entry_chip: int = Field(0, ge=0)
    congestion: bool = False

    def energy_table(self) -> EnergyTable:
        return self.energy or ENERGY_PRESETS[self.supply]

    @property
    def chip_count(self) -> int:
        return self.grid_w * self.grid_h

    @property
    def grid(self) -> Tuple[int, int]:
        return self.grid_w, self.grid_h

    def chip_xy(self, chip: int) -> Tuple[int, int]:
        return chip % self.grid_w, chip // self.grid_w

    def chip_index(self, x: int, y: int) -> int:
        return y * self.grid_w + x

    def has_chip(self, chip: int) -> bool:
        return 0 <= chip < self.chip_count

    def summary(self) -> Dict[str, int]:
        neurons = self.cores_per_chip * self.neurons_per_core
        return {
            "chips": self.chip_count,
            "cores_per_chip": self.cores_per_chip,
            "neurons_per_chip": neurons,
            "synapses_per_chip": neurons * self.cam_slots,
            "cam_words_per_chip": neurons * self.cam_slots,
            "sram_words_per_chip": neurons * self.sram_slots,
            "neurons": neurons * self.chip_count,
        }


# Nine chips, the board used for the multi-layer experiment.
BOARD_3X3 = FabricConfig(grid_w=3, grid_h=3)
