import numpy as np
import pytest

from dynapsim.cli.aer import AerEvent
from dynapsim.cli.session import Session, aer_sources, poisson_events
from dynapsim.compiler.netlist import NetworkSpec, Population
from dynapsim.compiler.placement import place
from dynapsim.core.params import CoreParams, SynapseParams
from dynapsim.errors import ConfigError, SimulationError
from dynapsim.fabric.config import FabricConfig
from dynapsim.packets.words import SynType

# One event drives a 10 ms, 5 nA pulse: enough for a spike within a few ms.
STRONG = CoreParams(
    fast_exc=SynapseParams(tau=1.0, weight=5000.0, pulse_us=10_000.0)
)


def chain() -> NetworkSpec:
    spec = NetworkSpec("chain")
    spec.add_population("in", 1, virtual=True)
    spec.add_population("a", 1)
    spec.add_population("b", 1)
    spec.connect(0, 1, SynType.FastExc)
    spec.connect(1, 2, SynType.FastExc)
    return spec


def session(seed: int = 0) -> Session:
    return Session(place(chain(), FabricConfig()), lambda _: STRONG, seed)


def test_spikes_propagate_down_a_chain():
    s = session()
    s.stimulate([(1.0, 0)])
    stats = s.run(30.0)
    first = {}
    for t, neuron in s.raster:
        first.setdefault(neuron, t)
    assert set(first) == {1, 2}
    assert 1.0 < first[1] < first[2]
    assert stats.packets_delivered >= 2
    assert s.t_ms == pytest.approx(30.0)


def test_no_input_no_spikes():
    s = session()
    s.run(20.0)
    assert s.raster == []


def test_sessions_are_reproducible():
    rasters = []
    for _ in range(2):
        s = session(seed=4)
        s.stimulate([(1.0, 0), (12.0, 0)])
        s.run(25.0)
        rasters.append(s.raster)
    assert rasters[0] == rasters[1]


def test_only_virtual_sources_are_stimulated():
    s = session()
    with pytest.raises(SimulationError):
        s.stimulate([(1.0, 1)])


def test_dt_must_be_positive():
    with pytest.raises(SimulationError):
        Session(place(chain(), FabricConfig()), lambda _: STRONG, dt_ms=0.0)


def test_poisson_events():
    population = Population("in", 1000, first=5, virtual=True)
    rng = np.random.default_rng(2)
    events = poisson_events(population, 100.0, 10.0, 110.0, rng)
    # 1000 neurons at 100 Hz for 100 ms.
    assert 9500 < len(events) < 10500
    assert events == sorted(events)
    assert all(10.0 <= t < 110.0 for t, _ in events)
    assert {n for _, n in events} <= set(population.ids)


def test_aer_pixels_map_row_major():
    population = Population("retina", 12, first=3, virtual=True)
    events = [AerEvent(1500, 2, 1, 1), AerEvent(2000, 0, 2, -1)]
    assert aer_sources(events, population, 4, 3) == [(1.5, 9), (2.0, 11)]
    assert aer_sources(events, population, 4, 3, "on") == [(1.5, 9)]
    with pytest.raises(ConfigError):
        aer_sources(events, population, 4, 4)
