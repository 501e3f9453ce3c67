import math
from dataclasses import dataclass
from typing import Iterable, List

from ..errors import DomainError

# Fan-in rate is bounded by how fast a core can broadcast tags to its CAMs.
BROADCAST_NS = 27.0
R3_HOP_NS = 2.5


@dataclass(frozen=True)
class DesignPoint:
    """Fixed per-core sizing used to extrapolate memory to larger models."""

    F: int
    C: int
    K: int
    M: int
    # Network size the first-stage address width is budgeted for.
    n_ref: int

    @property
    def tags_per_neuron(self) -> float:
        return self.K * self.M / self.C

    def bits_per_neuron(self, bits_per_syn_extra: int = 0) -> float:
        tag_bits = math.log2(self.K)
        source = self.F / self.M * (tag_bits + math.log2(self.n_ref / self.C))
        target = self.tags_per_neuron * (tag_bits + bits_per_syn_extra)
        return source + target


# The fabricated chip: 256 neurons and 1024 tags per core, 64 CAM words per
# neuron, 4 SRAM words per neuron and 2 bits of synapse type per CAM word.
PROTOTYPE = DesignPoint(F=64, C=256, K=1024, M=16, n_ref=2**18)


@dataclass(frozen=True)
class ScalingRow:
    size: int
    bits_per_neuron: float
    bits_total: float


def scaling_table(
    model_sizes: Iterable[int],
    bits_per_syn_extra: int = 2,
    design: DesignPoint = PROTOTYPE,
) -> List[ScalingRow]:
    per_neuron = design.bits_per_neuron(bits_per_syn_extra)
    rows = []
    for size in model_sizes:
        if size <= 0:
            raise DomainError(f"model size must be positive, got {size}")
        rows.append(ScalingRow(size, per_neuron, per_neuron * size))
    return rows


def fanin_capacity(
    rate_hz: float,
    broadcast_ns: float = BROADCAST_NS,
    neurons_per_core: int = 256,
) -> float:
    """Source neurons a core can listen to before its broadcast saturates."""
    if rate_hz <= 0 or broadcast_ns <= 0:
        raise DomainError("rate and broadcast time must be positive")
    return (1e9 / broadcast_ns) / (neurons_per_core * rate_hz)


def r3_throughput(r3_hop_ns: float = R3_HOP_NS) -> float:
    if r3_hop_ns <= 0:
        raise DomainError("hop latency must be positive")
    return 1e9 / r3_hop_ns
