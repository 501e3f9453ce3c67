from dataclasses import dataclass, field
from typing import Dict, List, Tuple

from ..errors import HopFieldError
from ..fabric.config import FabricConfig
from ..packets.words import CamEntry, Packet, RoutingWord

type CoreKey = Tuple[int, int]
type TagMap = Dict[int, Dict[CoreKey, int]]

MAX_HOPS = 3


@dataclass(frozen=True, order=True)
class NeuronSite:
    chip: int
    core: int
    index: int

    @property
    def core_key(self) -> CoreKey:
        return self.chip, self.core


@dataclass(frozen=True)
class Stimulus:
    """Where an external event from a virtual source must be injected."""

    chip: int
    core: int
    tag: int

    def packet(self) -> Packet:
        """The stimulus packet: already on its chip, bound for its core."""
        return Packet(self.tag, 0, self.core, 0, 0, 0, 0, seq=0)


def routing_word(
    config: FabricConfig, source_chip: int, target: CoreKey, tag: int
) -> RoutingWord:
    """The SRAM word sending `tag` from source_chip to the target core."""
    x0, y0 = config.chip_xy(source_chip)
    tx, ty = config.chip_xy(target[0])
    dx, dy = tx - x0, ty - y0
    for axis, distance in (("x", dx), ("y", dy)):
        if abs(distance) > MAX_HOPS:
            raise HopFieldError(axis, abs(distance))
    return RoutingWord(
        tag=tag,
        core_id=target[1],
        dx=abs(dx),
        dy=abs(dy),
        sx=int(dx < 0),
        sy=int(dy < 0),
    )


@dataclass
class Placement:
    """A network mapped onto the fabric.

    `targets` lists, per source neuron, the destination cores in the order
    its SRAM words are written; `tag_map` gives the tag each source uses in
    each of those cores. `cam` holds every destination neuron's CAM entries
    in slot order. `params` names the parameter set each used core runs with.
    """

    config: FabricConfig
    name: str = "network"
    sites: Dict[int, NeuronSite] = field(default_factory=dict)
    targets: Dict[int, List[CoreKey]] = field(default_factory=dict)
    tag_map: TagMap = field(default_factory=dict)
    cam: Dict[CoreKey, Dict[int, List[CamEntry]]] = field(default_factory=dict)
    virtual: List[int] = field(default_factory=list)
    params: Dict[CoreKey, str | None] = field(default_factory=dict)

    def routes(self) -> Dict[int, List[RoutingWord]]:
        """Per-source SRAM words; raises HopFieldError for distant cores."""
        words = {}
        for source, cores in self.targets.items():
            if source not in self.sites:
                continue
            chip = self.sites[source].chip
            words[source] = [
                routing_word(self.config, chip, key, self.tag_map[source][key])
                for key in cores
            ]
        return words

    def stimulus(self, source: int) -> List[Stimulus]:
        return [
            Stimulus(chip, core, self.tag_map[source][(chip, core)])
            for chip, core in self.targets.get(source, [])
        ]

    def neuron_at(self) -> Dict[NeuronSite, int]:
        return {site: neuron for neuron, site in self.sites.items()}

    @property
    def cores_used(self) -> List[CoreKey]:
        return sorted({site.core_key for site in self.sites.values()})

    def report(self) -> str:
        """Tab-separated placement table, one row per placed neuron."""
        rows = ["neuron\tchip\tcore\tindex\twords\tcam_entries"]
        for neuron in sorted(self.sites):
            site = self.sites[neuron]
            words = len(self.targets.get(neuron, []))
            entries = len(self.cam.get(site.core_key, {}).get(site.index, []))
            rows.append(
                f"{neuron}\t{site.chip}\t{site.core}\t{site.index}"
                f"\t{words}\t{entries}"
            )
        return "\n".join(rows) + "\n"
