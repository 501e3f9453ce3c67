import math

import numpy as np
import pytest

from dynapsim.core.node import CoreNode, core_broadcast
from dynapsim.core.params import CoreParams, SynapseParams
from dynapsim.packets.words import CamEntry, SynType


class Ledger:
    def __init__(self):
        self.calls = []

    def charge_broadcast(self, matches: int):
        self.calls.append(matches)


def test_broadcast_reaches_every_subscriber():
    node = CoreNode(CoreParams())
    for neuron in range(256):
        node.memory.write(neuron, 0, CamEntry(7, SynType.FastExc))
    ledger = Ledger()
    matches = core_broadcast(node, 7, 0.0, ledger)
    assert len(matches) == 256
    assert ledger.calls == [256]
    node.advance(0.05)
    I = node.synapses.I[:, SynType.FastExc]
    assert np.all(I > 0)
    assert np.allclose(I, I[0])


def test_unmatched_tag_leaves_currents_alone():
    node = CoreNode(CoreParams(), neurons=8, cam_slots=2)
    node.memory.write(0, 1, CamEntry(7, SynType.FastExc))
    assert node.broadcast(8, 0.0, Ledger()) == []
    node.advance(0.1)
    assert not node.synapses.I.any()


def test_broadcast_time_is_in_nanoseconds():
    node = CoreNode(CoreParams(), neurons=2, cam_slots=1)
    node.memory.write(1, 0, CamEntry(3, SynType.SlowExc))
    node.broadcast(3, 50_000.0, Ledger())
    node.advance(0.1)
    slow = CoreParams().slow_exc
    expected = slow.weight * (1 - math.exp(-0.05 / slow.tau))
    assert node.synapses.I[1, SynType.SlowExc] == pytest.approx(expected)
    assert node.synapses.I[0].sum() == 0


def test_only_driven_neuron_spikes():
    params = CoreParams(fast_exc=SynapseParams(weight=20000.0, pulse_us=5000))
    node = CoreNode(params, neurons=16, cam_slots=1)
    node.memory.write(3, 0, CamEntry(1, SynType.FastExc))
    node.broadcast(1, 0.0, Ledger())
    fired = set()
    for _ in range(100):
        fired.update(node.advance(0.1).tolist())
    assert fired == {3}
    assert node.t_ms > 9.99
