import numpy as np
import pytest

from dynapsim.cli.cnn import KERNELS, CnnSpec, build_cnn, kernel
from dynapsim.compiler.placement import place
from dynapsim.errors import SpecError
from dynapsim.fabric.config import FabricConfig
from dynapsim.packets.words import SynType


@pytest.fixture(scope="module")
def cnn():
    return build_cnn()


def test_layer_shapes():
    assert CnnSpec().shapes() == {
        "input": (1, 32, 32),
        "conv": (4, 16, 16),
        "pool": (4, 8, 8),
        "output": (4, 64),
    }


@pytest.mark.parametrize("name", KERNELS)
def test_kernels_are_balanced(name):
    k = kernel(name)
    assert k.shape == (8, 8)
    assert set(np.unique(k)) == {-1, 1}
    assert (k == 1).sum() == 32


def test_kernel_orientation():
    vertical = kernel("vertical")
    assert np.all(vertical[:, :4] == 1) and np.all(vertical[:, 4:] == -1)
    horizontal = kernel("horizontal")
    assert np.all(horizontal[4:] == 1) and np.all(horizontal[:4] == -1)
    up = kernel("up_vertex")
    assert np.all(up[0] == 1) and np.all(up[-1] == -1)
    assert list(up[6]) == [-1, -1, -1, 1, 1, -1, -1, -1]
    assert np.array_equal(kernel("down_vertex"), up[::-1])


def test_unknown_kernel():
    with pytest.raises(SpecError):
        kernel("diagonal")


def test_neuron_counts(cnn):
    real = [p for p in cnn.net.populations if not p.virtual]
    assert sum(p.size for p in real) == 4 * 16 * 16 + 4 * 8 * 8 + 4 * 64
    assert cnn.inputs.virtual and cnn.inputs.size == 1024
    assert len(cnn.conv_tiles) == 4
    assert all(p.size == 256 for p in cnn.conv_tiles.values())


def test_each_pool_neuron_has_four_entries(cnn):
    fan_in = cnn.net.fan_in()
    assert all(fan_in[n] == 4 for n in cnn.pool.ids)


def test_conv_fan_in(cnn):
    fan_in = cnn.net.fan_in()
    assert fan_in[cnn.conv_neuron(0, 0, 0)] == 5 * 5
    assert fan_in[cnn.conv_neuron(3, 5, 5)] == 64
    conv = [n for tile in cnn.conv_tiles.values() for n in tile.ids]
    assert max(fan_in[n] for n in conv) == 64


@pytest.mark.parametrize("k", range(4))
def test_conv_synapses_follow_template(cnn, k):
    template = kernel(KERNELS[k])
    dst = cnn.conv_neuron(k, 5, 5)
    # Output (5, 5) covers input rows and columns 7..14.
    for a in range(8):
        for b in range(8):
            src = cnn.inputs.first + (7 + a) * 32 + (7 + b)
            syn = SynType.FastExc if template[a, b] > 0 else SynType.SubInh
            assert (src, dst, syn) in cnn.net.connections


def test_untrained_readout_is_empty(cnn):
    outputs = {n for p in cnn.outputs for n in p.ids}
    assert not any(dst in outputs for _, dst, _ in cnn.net.connections)


def test_readout_wiring():
    cnn = build_cnn(readout={0: [0, 1, 2], 2: [5]})
    edges = [
        (src, dst)
        for src, dst, syn in cnn.net.connections
        if dst >= cnn.outputs[0].first
    ]
    assert len(edges) == 4 * 64
    assert {dst for src, dst in edges if src == cnn.pool.first + 5} == set(
        cnn.outputs[2].ids
    )


def test_readout_outside_pool():
    with pytest.raises(SpecError):
        build_cnn(readout={0: [256]})
    with pytest.raises(SpecError):
        build_cnn(readout={4: [0]})


@pytest.mark.parametrize(
    "spec", [CnnSpec(input_size=31), CnnSpec(pool=3), CnnSpec(stride=0)]
)
def test_shape_mismatch(spec):
    with pytest.raises(SpecError):
        build_cnn(spec)


def test_placed_on_six_cores(cnn):
    p = place(cnn.net, FabricConfig(grid_w=2))
    assert p.cores_used == [(0, 0), (0, 1), (0, 2), (0, 3), (1, 0), (1, 1)]
    assert p.params[(1, 0)] == "pool" and p.params[(1, 1)] == "output"
    assert {p.params[(0, core)] for core in range(4)} == {"conv"}
    pool_tags = [
        p.tag_map[n][(1, 0)]
        for tile in cnn.conv_tiles.values()
        for n in tile.ids
    ]
    assert sorted(pool_tags) == list(range(1024))
