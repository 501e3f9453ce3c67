import pydantic
import pytest

from dynapsim.fabric.config import (
    BOARD_3X3,
    ENERGY_PRESETS,
    EnergyTable,
    FabricConfig,
    LatencyTable,
)


def test_defaults():
    config = FabricConfig()
    assert config.latency.broadcast == 27.0
    assert config.latency.chip_traverse == 15.4
    assert config.latency.r3_hop == 2.5
    assert config.latency.r1_loop_read == pytest.approx(26.667, abs=1e-3)
    assert config.energy_table() == ENERGY_PRESETS["1.8V"]


def test_supply_presets():
    low = FabricConfig(supply="1.3V").energy_table()
    assert low.spike_gen == 260
    assert low.encode_append == 507
    assert low.broadcast_same_core == 2200
    assert low.route_diff_core == 78
    assert low.pulse_extend == 26
    assert low.r3_hop == 17
    high = ENERGY_PRESETS["1.8V"]
    assert (high.spike_gen, high.broadcast_same_core) == (883, 6840)
    assert high.r3_hop == 0


def test_custom_energy_overrides_supply():
    table = EnergyTable(
        spike_gen=1,
        encode_append=2,
        broadcast_same_core=3,
        route_diff_core=4,
        pulse_extend=5,
    )
    assert FabricConfig(supply="1.3V", energy=table).energy_table() == table


@pytest.mark.parametrize(
    "kwargs",
    [
        {"grid_w": 0},
        {"sram_slots": 5},
        {"supply": "3.3V"},
        {"latency": {"broadcast": -1}},
        {"unknown": 1},
    ],
)
def test_rejects_invalid(kwargs):
    with pytest.raises(pydantic.ValidationError):
        FabricConfig(**kwargs)


def test_rejects_negative_latency():
    with pytest.raises(pydantic.ValidationError):
        LatencyTable(r2_hop=-0.5)


def test_chip_geometry():
    config = FabricConfig(grid_w=4, grid_h=3)
    assert config.chip_count == 12
    assert config.chip_xy(5) == (1, 1)
    assert config.chip_index(3, 2) == 11
    assert config.has_chip(11) and not config.has_chip(12)


def test_chip_summary():
    summary = FabricConfig().summary()
    assert summary["neurons_per_chip"] == 1024
    assert summary["synapses_per_chip"] == 65536
    assert summary["cam_words_per_chip"] == 65536
    assert summary["sram_words_per_chip"] == 4096
    assert BOARD_3X3.summary()["neurons"] == 9 * 1024
