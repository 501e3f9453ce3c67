from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

from .layout import CoreKey, NeuronSite, Placement
from .netlist import NetworkSpec
from ..errors import DomainError, RoutingFault
from ..fabric.routers import route_word
from ..memopt.model import NetParams, mem_two_stage
from ..packets.words import CAM_ENTRY_BITS, ROUTING_WORD_BITS, SynType

type Edge = Tuple[int, int, SynType]

# Destination of a CAM match at a slot no neuron was placed in.
UNPLACED = -1


@dataclass(frozen=True)
class MemoryUse:
    """Per-neuron routing memory in bits."""

    provisioned: int
    used_mean: float
    used_max: int
    # Two-stage model at the optimum M for this network; None when undefined.
    predicted: float | None


@dataclass
class ValidationReport:
    missing: Counter = field(default_factory=Counter)
    spurious: Counter = field(default_factory=Counter)
    # (src, dst) -> (expected types, realized types)
    mismatched: Dict[Tuple[int, int], Tuple[list, list]] = field(
        default_factory=dict
    )
    faults: List[str] = field(default_factory=list)
    memory: MemoryUse | None = None

    @property
    def ok(self) -> bool:
        return not (self.missing or self.spurious or self.mismatched)

    def to_tsv(self) -> str:
        rows = ["kind\tsrc\tdst\tsyn\tcount"]
        kinds = (("missing", self.missing), ("spurious", self.spurious))
        for kind, edges in kinds:
            for (src, dst, syn), count in sorted(edges.items()):
                rows.append(f"{kind}\t{src}\t{dst}\t{syn.name}\t{count}")
        for (src, dst), (expected, realized) in sorted(self.mismatched.items()):
            types = ",".join(s.name for s in expected)
            got = ",".join(s.name for s in realized)
            rows.append(f"type_mismatch\t{src}\t{dst}\t{types}->{got}\t1")
        return "\n".join(rows) + "\n"


def realized_edges(p: Placement) -> Tuple[Counter, List[str]]:
    """Routes every source's tags symbolically and collects CAM matches."""
    config = p.config
    at = p.neuron_at()
    by_tag: Dict[CoreKey, Dict[int, List[Tuple[int, SynType]]]] = {}
    for key, neurons in p.cam.items():
        tags = by_tag.setdefault(key, {})
        for index, entries in neurons.items():
            for entry in entries:
                tags.setdefault(entry.tag, []).append((index, entry.syn_type))
    deliveries: List[Tuple[int, CoreKey, int]] = []
    faults = []
    for source, words in p.routes().items():
        site = p.sites[source]
        for word in words:
            try:
                xy, core, _ = route_word(
                    word,
                    config.chip_xy(site.chip),
                    site.core,
                    config.grid,
                    config.cores_per_chip,
                )
            except RoutingFault as fault:
                faults.append(f"{source}: {fault}")
                continue
            target = (config.chip_index(*xy), core)
            deliveries.append((source, target, word.tag))
    for source in p.virtual:
        for s in p.stimulus(source):
            deliveries.append((source, (s.chip, s.core), s.tag))
    edges: Counter = Counter()
    for source, key, tag in deliveries:
        for index, syn in by_tag.get(key, {}).get(tag, []):
            dst = at.get(NeuronSite(key[0], key[1], index), UNPLACED)
            edges[(source, dst, syn)] += 1
    return edges, faults


def memory_use(p: Placement, spec: NetworkSpec) -> MemoryUse:
    config = p.config
    provisioned = (
        config.sram_slots * ROUTING_WORD_BITS
        + config.cam_slots * CAM_ENTRY_BITS
    )
    used = []
    for neuron, site in p.sites.items():
        words = len(p.targets.get(neuron, []))
        entries = len(p.cam.get(site.core_key, {}).get(site.index, []))
        used.append(words * ROUTING_WORD_BITS + entries * CAM_ENTRY_BITS)
    predicted = None
    if p.sites and spec.connections:
        fan_out = sum(spec.connections.values()) / len(p.sites)
        try:
            net = NetParams(
                len(p.sites), fan_out, config.neurons_per_core, K=1024
            )
            predicted = mem_two_stage(net).mem_total_bits
        except DomainError:
            predicted = None
    return MemoryUse(
        provisioned,
        sum(used) / len(used) if used else 0.0,
        max(used, default=0),
        predicted,
    )


def validate(p: Placement, spec: NetworkSpec) -> ValidationReport:
    """Diffs the connectivity a placement realizes against the netlist."""
    realized, faults = realized_edges(p)
    expected = Counter(spec.connections)
    report = ValidationReport(
        missing=expected - realized,
        spurious=realized - expected,
        faults=faults,
        memory=memory_use(p, spec),
    )
    pairs: Dict[Tuple[int, int], Tuple[list, list]] = {}
    for (src, dst, syn) in report.missing:
        pairs.setdefault((src, dst), ([], []))[0].append(syn)
    for (src, dst, syn) in report.spurious:
        if (src, dst) in pairs:
            pairs[(src, dst)][1].append(syn)
    for (src, dst), (wanted, got) in pairs.items():
        if not got:
            continue
        report.mismatched[(src, dst)] = (sorted(wanted), sorted(got))
        for syn in wanted:
            del report.missing[(src, dst, syn)]
        for syn in got:
            del report.spurious[(src, dst, syn)]
    return report
