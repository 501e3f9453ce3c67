from typing import Iterator, List, Protocol, Tuple

import numpy as np

from ..packets.words import CamEntry, SynType, check_width

type Match = Tuple[int, int, SynType]


class BroadcastLedger(Protocol):
    def charge_broadcast(self, matches: int) -> None: ...


class CoreMemory:
    """CAM contents of one core: a tag and synapse type per (neuron, slot)."""

    def __init__(self, neurons: int = 256, slots: int = 64):
        self.neurons, self.slots = neurons, slots
        self.valid = np.zeros((neurons, slots), dtype=bool)
        self.tags = np.zeros((neurons, slots), dtype=np.int16)
        self.syn = np.zeros((neurons, slots), dtype=np.int8)

    def write(self, neuron: int, slot: int, entry: CamEntry | None):
        if entry is None:
            self.valid[neuron, slot] = False
            return
        self.valid[neuron, slot] = True
        self.tags[neuron, slot] = entry.tag
        self.syn[neuron, slot] = int(entry.syn_type)

    def entry(self, neuron: int, slot: int) -> CamEntry | None:
        if not self.valid[neuron, slot]:
            return None
        tag = int(self.tags[neuron, slot])
        return CamEntry(tag, SynType(int(self.syn[neuron, slot])))

    def entries(self) -> Iterator[Tuple[int, int, CamEntry]]:
        for neuron, slot in zip(*np.nonzero(self.valid)):
            entry = self.entry(int(neuron), int(slot))
            assert entry is not None
            yield int(neuron), int(slot), entry

    def fan_in(self, neuron: int) -> int:
        return int(self.valid[neuron].sum())

    def free_slot(self, neuron: int) -> int | None:
        free = np.flatnonzero(~self.valid[neuron])
        return int(free[0]) if free.size else None

    @staticmethod
    def from_arrays(
        valid: np.ndarray, tags: np.ndarray, syn: np.ndarray
    ) -> "CoreMemory":
        core = CoreMemory(*valid.shape)
        core.valid[:] = valid
        core.tags[:] = tags
        core.syn[:] = syn
        return core


def cam_match(
    core: CoreMemory, tag: int, stats: BroadcastLedger | None = None
) -> List[Match]:
    """Every valid slot storing `tag`, in (neuron, slot) order.

    One broadcast is charged per call regardless of the match count.
    """
    check_width("tag", tag, 10)
    neurons, slots = np.nonzero(core.valid & (core.tags == tag))
    matches = [
        (int(n), int(s), SynType(int(core.syn[n, s])))
        for n, s in zip(neurons, slots)
    ]
    if stats is not None:
        stats.charge_broadcast(len(matches))
    return matches
