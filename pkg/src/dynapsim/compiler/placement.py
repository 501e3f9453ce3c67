import logging
from typing import Dict, List, Tuple

import numpy as np

from .layout import CoreKey, NeuronSite, Placement
from .netlist import NetworkSpec
from .tags import allocate_tags
from ..errors import PlacementError
from ..fabric.config import FabricConfig
from ..packets.words import CamEntry

logger = logging.getLogger(__name__)


class _Clusters:
    """Union-find over placement units, bounded by core capacity.

    Only units sharing a parameter set may merge: a core has one set of
    biases for all its neurons.
    """

    def __init__(self, sizes: List[int], params: List[str | None], capacity):
        self.parent = list(range(len(sizes)))
        self.size = list(sizes)
        self.params = params
        self.capacity = capacity

    def find(self, unit: int) -> int:
        while self.parent[unit] != unit:
            self.parent[unit] = self.parent[self.parent[unit]]
            unit = self.parent[unit]
        return unit

    def merge(self, a: int, b: int) -> bool:
        a, b = self.find(a), self.find(b)
        if a == b or self.params[a] != self.params[b]:
            return False
        if self.size[a] + self.size[b] > self.capacity:
            return False
        a, b = min(a, b), max(a, b)
        self.parent[b] = a
        self.size[a] += self.size[b]
        return True


def _units(
    spec: NetworkSpec, capacity: int
) -> List[Tuple[range, str | None]]:
    """Populations cut into core-sized runs of consecutive neurons."""
    units = []
    for p in spec.populations:
        if p.virtual:
            continue
        end = p.first + p.size
        for first in range(p.first, end, capacity):
            units.append((range(first, min(first + capacity, end)), p.params))
    return units


def _check_fan_in(spec: NetworkSpec, config: FabricConfig):
    for neuron, entries in sorted(spec.fan_in().items()):
        if entries > config.cam_slots:
            raise PlacementError(
                "fan-in",
                f"{spec.label(neuron)} needs {entries} CAM entries; a neuron"
                f" has {config.cam_slots}",
            )


def cluster(
    spec: NetworkSpec, config: FabricConfig, seed: int = 0
) -> List[List[int]]:
    """Groups neurons into cores; returns each core's neurons in order.

    Units joined by the most synapses merge first while the result still
    fits a core; equal weights are ordered by a seeded shuffle. The
    clusters are then first-fit packed into cores.
    """
    capacity = config.neurons_per_core
    units = [neurons for neurons, _ in _units(spec, capacity)]
    params = [key for _, key in _units(spec, capacity)]
    unit_of = np.full(spec.size, -1, dtype=np.int64)
    for u, neurons in enumerate(units):
        unit_of[neurons.start : neurons.stop] = u
    weights: Dict[Tuple[int, int], int] = {}
    for (src, dst, _), multiplicity in spec.connections.items():
        a, b = int(unit_of[src]), int(unit_of[dst])
        if a < 0 or a == b:
            continue
        pair = (min(a, b), max(a, b))
        weights[pair] = weights.get(pair, 0) + multiplicity
    pairs = sorted(weights)
    rank = np.random.default_rng(seed).permutation(len(pairs))
    order = sorted(
        range(len(pairs)), key=lambda i: (-weights[pairs[i]], rank[i])
    )
    clusters = _Clusters([len(u) for u in units], params, capacity)
    for i in order:
        clusters.merge(*pairs[i])
    members: Dict[int, List[int]] = {}
    for u in range(len(units)):
        members.setdefault(clusters.find(u), []).append(u)
    cores: List[Tuple[int, List[int]]] = []
    for root in sorted(members):
        size = clusters.size[root]
        for i, (used, core_units) in enumerate(cores):
            if params[core_units[0]] != params[root]:
                continue
            if used + size <= capacity:
                cores[i] = (used + size, core_units + members[root])
                break
        else:
            cores.append((size, list(members[root])))
    return [
        [neuron for u in sorted(core_units) for neuron in units[u]]
        for _, core_units in cores
    ]


def place(
    spec: NetworkSpec, config: FabricConfig, seed: int | None = None
) -> Placement:
    """Maps every neuron to (chip, core, index), allocates tags, fills CAMs.

    Raises PlacementError naming the violated bound.
    """
    seed = spec.seed if seed is None else seed
    _check_fan_in(spec, config)
    cores = cluster(spec, config, seed)
    available = config.chip_count * config.cores_per_chip
    if len(cores) > available:
        raise PlacementError(
            "core capacity",
            f"{len(cores)} cores needed, the fabric has {available}",
        )
    p = Placement(config, spec.name)
    for g, neurons in enumerate(cores):
        chip, core = divmod(g, config.cores_per_chip)
        for index, neuron in enumerate(neurons):
            p.sites[neuron] = NeuronSite(chip, core, index)
        p.params[(chip, core)] = spec.population_of(neurons[0]).params
    p.virtual = [
        neuron
        for population in spec.populations
        if population.virtual
        for neuron in population.ids
    ]
    destinations: Dict[int, set[CoreKey]] = {}
    for src, dst, _ in spec.connections:
        destinations.setdefault(src, set()).add(p.sites[dst].core_key)
    for src in sorted(destinations):
        p.targets[src] = sorted(destinations[src])
        if src in p.sites and len(p.targets[src]) > config.sram_slots:
            raise PlacementError(
                "fan-out cores",
                f"{spec.label(src)} projects into {len(p.targets[src])} cores;"
                f" R1 holds {config.sram_slots} routing words",
            )
    p.tag_map = allocate_tags(p.targets)
    for src, dst, syn, multiplicity in spec.edges():
        site = p.sites[dst]
        entry = CamEntry(p.tag_map[src][site.core_key], syn)
        slots = p.cam.setdefault(site.core_key, {}).setdefault(site.index, [])
        slots.extend([entry] * multiplicity)
    p.routes()
    logger.debug(
        "placed %s: %d neurons on %d cores, %d virtual sources",
        spec.name,
        len(p.sites),
        len(cores),
        len(p.virtual),
    )
    return p
