import logging
from typing import List

import numpy as np

from .memory import BroadcastLedger, CoreMemory, Match, cam_match
from .neuron import NeuronState, neuron_step
from .params import CoreParams
from .synapse import SynapseState, apply_pulses, dpi_step

logger = logging.getLogger(__name__)


class CoreNode:
    """One core: shared CAM, DPI synapses and AdEx neurons.

    Fabric time is in ns, neural time in ms.
    """

    def __init__(
        self,
        params: CoreParams,
        neurons: int = 256,
        cam_slots: int = 64,
        rng: np.random.Generator | None = None,
    ):
        self.params = params
        self.memory = CoreMemory(neurons, cam_slots)
        self.synapses = SynapseState.from_params(neurons, params)
        self.neurons = NeuronState.from_params(params.neuron, neurons, rng)

    @property
    def t_ms(self) -> float:
        return self.synapses.t

    def broadcast(
        self, tag: int, t_ns: float, stats: BroadcastLedger
    ) -> List[Match]:
        return core_broadcast(self, tag, t_ns * 1e-6, stats)

    def advance(self, dt: float) -> np.ndarray:
        """Integrates one step; returns indices of neurons that spiked."""
        t = self.synapses.t
        I = dpi_step(self.synapses, dt)
        spiked = neuron_step(
            self.neurons, I[:, 0], I[:, 1], I[:, 2], I[:, 3], dt, t
        )
        return np.flatnonzero(spiked)


def core_broadcast(
    node: CoreNode, tag: int, t: float, stats: BroadcastLedger | None = None
) -> List[Match]:
    """Searches the CAM for `tag` and starts a pulse on every match."""
    matches = cam_match(node.memory, tag, stats)
    if matches:
        neurons = np.fromiter((m[0] for m in matches), dtype=np.int64)
        syn = np.fromiter((int(m[2]) for m in matches), dtype=np.int64)
        apply_pulses(node.synapses, neurons, syn, t)
    return matches
