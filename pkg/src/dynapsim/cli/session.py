import logging
from typing import Callable, Dict, Iterable, List, Sequence, Tuple

import numpy as np

from .aer import AerEvent
from ..compiler.emit import emit_images
from ..compiler.layout import CoreKey, Placement
from ..compiler.netlist import Population
from ..core.memory import CoreMemory
from ..core.node import CoreNode
from ..core.params import CoreParams
from ..errors import ConfigError, SimulationError
from ..fabric.engine import CoreSink, Engine, PassiveCore
from ..fabric.stats import SimStats
from ..packets.image import MemoryImage

logger = logging.getLogger(__name__)

# (time in ms, global neuron id)
type SpikeTrain = List[Tuple[float, int]]


class Session:
    """A placed network running on the fabric with neural dynamics.

    Neurons integrate in fixed steps of dt ms. Before each step the engine
    delivers every packet due by the step's end; spikes found by the step
    enter the fabric at its end, so they reach their targets in the next.
    A precomputed `image` saves re-emitting the memories per session.
    """

    def __init__(
        self,
        placement: Placement,
        params: Callable[[str | None], CoreParams],
        seed: int = 0,
        dt_ms: float = 0.1,
        jitter_ns: float = 0.0,
        trace: bool = False,
        image: MemoryImage | None = None,
    ):
        if not dt_ms > 0:
            raise SimulationError(f"dt must be positive, got {dt_ms}")
        config = placement.config
        self.placement = placement
        self.dt = dt_ms
        self.nodes: Dict[CoreKey, CoreNode] = {}
        for key in placement.cores_used:
            self.nodes[key] = CoreNode(
                params(placement.params.get(key)),
                config.neurons_per_core,
                config.cam_slots,
                rng=np.random.default_rng([seed, *key]),
            )
        cores: Dict[CoreKey, CoreSink] = {}
        for chip in range(config.chip_count):
            for core in range(config.cores_per_chip):
                cores[(chip, core)] = self.nodes.get(
                    (chip, core),
                    PassiveCore(
                        CoreMemory(config.neurons_per_core, config.cam_slots)
                    ),
                )
        self.engine = Engine(
            config, seed, jitter_ns, trace=trace, cores=cores
        )
        self.engine.load_image(
            emit_images(placement) if image is None else image
        )
        self._ids: Dict[CoreKey, np.ndarray] = {
            key: np.full(config.neurons_per_core, -1, dtype=np.int64)
            for key in self.nodes
        }
        for neuron, site in placement.sites.items():
            self._ids[site.core_key][site.index] = neuron
        self.raster: SpikeTrain = []
        self._steps = 0

    @property
    def t_ms(self) -> float:
        return self._steps * self.dt

    def stimulate(self, events: Iterable[Tuple[float, int]]):
        """Queues external events from virtual sources, times in ms."""
        virtual = set(self.placement.virtual)
        batch = []
        for t_ms, source in events:
            if source not in virtual:
                raise SimulationError(
                    f"neuron {source} is not a virtual input source"
                )
            for s in self.placement.stimulus(source):
                batch.append((t_ms * 1e6, s.chip, s.packet()))
        batch.sort(key=lambda event: event[0])
        self.engine.inject_external(batch)

    def run(self, duration_ms: float) -> SimStats:
        steps = int(round(duration_ms / self.dt))
        logger.debug("running %d steps from %.3f ms", steps, self.t_ms)
        for _ in range(steps):
            self._steps += 1
            t_ms = self.t_ms
            self.engine.run_until(t_ms * 1e6)
            for key, node in self.nodes.items():
                for index in node.advance(self.dt):
                    self.raster.append((t_ms, int(self._ids[key][index])))
                    self.engine.spike(t_ms * 1e6, key[0], key[1], int(index))
        return self.engine.stats.snapshot()


def poisson_events(
    population: Population,
    rate_hz: float,
    start_ms: float,
    stop_ms: float,
    rng: np.random.Generator,
) -> SpikeTrain:
    events = []
    span = max(0.0, stop_ms - start_ms)
    counts = rng.poisson(rate_hz * span * 1e-3, size=population.size)
    for neuron, count in zip(population.ids, counts):
        for t in rng.uniform(start_ms, stop_ms, int(count)):
            events.append((float(t), neuron))
    events.sort()
    return events


def aer_sources(
    events: Sequence[AerEvent],
    population: Population,
    width: int,
    height: int,
    polarity: str = "both",
) -> SpikeTrain:
    """Maps pixel (x, y) to neuron first + y*width + x."""
    if population.size < width * height:
        raise ConfigError(
            f"aer: population '{population.name}' has {population.size}"
            f" neurons, the sensor has {width * height} pixels"
        )
    keep = {"on": (1,), "off": (-1,), "both": (1, -1)}[polarity]
    return [
        (e.t_us * 1e-3, population.first + e.y * width + e.x)
        for e in events
        if e.polarity in keep
    ]


def raster_tsv(raster: SpikeTrain, label: Callable[[int], str]) -> str:
    lines = ["t_ms\tneuron\tlabel"]
    for t_ms, neuron in raster:
        lines.append(f"{t_ms:.3f}\t{neuron}\t{label(neuron)}")
    return "\n".join(lines) + "\n"
