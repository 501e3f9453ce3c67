import dataclasses
from dataclasses import dataclass, field
from typing import Dict

from .config import EnergyTable

# Energy-table entry charged for each counter.
OP_COUNTERS: Dict[str, str] = {
    "spike_gen": "spikes",
    "encode_append": "encoded_spikes",
    "broadcast_same_core": "broadcasts",
    "route_diff_core": "cross_core",
    "pulse_extend": "cam_matches",
    "r3_hop": "r3_hops",
}


@dataclass
class SimStats:
    energy_table: EnergyTable
    events_injected: int = 0
    spikes: int = 0
    encoded_spikes: int = 0
    dropped_at_source: int = 0
    packets_emitted: int = 0
    broadcasts: int = 0
    cam_matches: int = 0
    cross_core: int = 0
    cross_chip: int = 0
    r3_hops: int = 0
    packets_delivered: int = 0
    packets_faulted: int = 0
    packets_dropped: int = 0
    programming_writes: int = 0
    programming_dropped: int = 0
    latency_bin_ns: float = 10.0
    # Lower bin edge -> deliveries; filled as packets arrive.
    latency_bins: Dict[float, int] = field(default_factory=dict)
    latency_sum_ns: float = 0.0
    latency_max_ns: float = 0.0

    def charge_broadcast(self, matches: int):
        self.broadcasts += 1
        self.cam_matches += matches

    def op_counts(self) -> Dict[str, int]:
        return {op: getattr(self, name) for op, name in OP_COUNTERS.items()}

    def energy_by_op(self) -> Dict[str, float]:
        return {
            op: count * getattr(self.energy_table, op)
            for op, count in self.op_counts().items()
        }

    @property
    def energy_pj(self) -> float:
        return sum(self.energy_by_op().values())

    @property
    def in_flight(self) -> int:
        return self.packets_emitted - (
            self.packets_delivered + self.packets_faulted + self.packets_dropped
        )

    def counters(self) -> Dict[str, int]:
        return {
            f.name: getattr(self, f.name)
            for f in dataclasses.fields(self)
            if f.type is int
        }

    def record_latency(self, latency_ns: float):
        low = (latency_ns // self.latency_bin_ns) * self.latency_bin_ns
        self.latency_bins[low] = self.latency_bins.get(low, 0) + 1
        self.latency_sum_ns += latency_ns
        self.latency_max_ns = max(self.latency_max_ns, latency_ns)

    @property
    def latency_mean_ns(self) -> float | None:
        samples = sum(self.latency_bins.values())
        return self.latency_sum_ns / samples if samples else None

    def latency_histogram(self) -> Dict[float, int]:
        return dict(sorted(self.latency_bins.items()))

    def snapshot(self) -> "SimStats":
        return dataclasses.replace(self, latency_bins=dict(self.latency_bins))

    def to_tsv(self) -> str:
        lines = ["counter\tvalue"]
        lines += [f"{name}\t{value}" for name, value in self.counters().items()]
        lines += [
            f"energy_{op}_pj\t{e:.3f}"
            for op, e in self.energy_by_op().items()
        ]
        lines.append(f"energy_pj\t{self.energy_pj:.3f}")
        lines.append("")
        lines.append("latency_ns\tcount")
        for low, count in self.latency_histogram().items():
            lines.append(f"{low:.1f}\t{count}")
        return "\n".join(lines) + "\n"
