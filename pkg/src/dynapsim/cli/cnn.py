from dataclasses import dataclass
from typing import Dict, List, Mapping, Sequence, Tuple

import numpy as np

from ..compiler.netlist import NetworkSpec, Population
from ..errors import SpecError
from ..packets.words import SynType

KERNELS = ("vertical", "horizontal", "up_vertex", "down_vertex")


def kernel(name: str, size: int = 8) -> np.ndarray:
    """A +1/-1 template; u runs right and v up from the kernel centre.

    vertical:    +1 where u < 0
    horizontal:  +1 where v < 0
    up_vertex:   +1 where v >= 2|u| - r
    down_vertex: +1 where -v >= 2|u| - r
    with r = (size - 1) / 2. Every template has as many +1 as -1 entries
    when size is even.
    """
    r = (size - 1) / 2
    steps = np.arange(size) - r
    u, v = np.meshgrid(steps, -steps)
    match name:
        case "vertical":
            positive = u < 0
        case "horizontal":
            positive = v < 0
        case "up_vertex":
            positive = v >= 2 * np.abs(u) - r
        case "down_vertex":
            positive = -v >= 2 * np.abs(u) - r
        case _:
            raise SpecError(f"Unknown kernel '{name}'")
    return np.where(positive, 1, -1)


@dataclass(frozen=True)
class CnnSpec:
    input_size: int = 32
    kernels: Tuple[str, ...] = KERNELS
    kernel_size: int = 8
    stride: int = 2
    padding: int = 3
    pool: int = 2
    classes: int = 4
    output_size: int = 64

    @property
    def conv_size(self) -> int:
        span = self.input_size + 2 * self.padding - self.kernel_size
        return span // self.stride + 1

    @property
    def pool_size(self) -> int:
        return self.conv_size // self.pool

    def shapes(self) -> Dict[str, Tuple[int, ...]]:
        k = len(self.kernels)
        return {
            "input": (1, self.input_size, self.input_size),
            "conv": (k, self.conv_size, self.conv_size),
            "pool": (k, self.pool_size, self.pool_size),
            "output": (self.classes, self.output_size),
        }

    def check(self):
        sizes = (
            self.input_size,
            self.kernel_size,
            self.stride,
            self.pool,
            self.classes,
            self.output_size,
        )
        if min(sizes) < 1 or self.padding < 0 or not self.kernels:
            raise SpecError("CNN sizes must be positive")
        span = self.input_size + 2 * self.padding - self.kernel_size
        if span < 0 or span % self.stride:
            raise SpecError(
                f"a {self.kernel_size}-wide kernel at stride {self.stride}"
                f" does not tile a padded input of {span + self.kernel_size}"
            )
        if self.conv_size % self.pool:
            raise SpecError(
                f"conv output {self.conv_size} is not a multiple of the"
                f" {self.pool}x{self.pool} pooling field"
            )
        for name in self.kernels:
            kernel(name, self.kernel_size)

    def tile(self, capacity: int) -> int:
        """Side of the conv tiles whose maps for every kernel fill a core."""
        for side in range(self.conv_size, 0, -1):
            if self.conv_size % side == 0:
                if len(self.kernels) * side * side <= capacity:
                    return side
        raise SpecError(f"{len(self.kernels)} kernels do not fit {capacity}")


@dataclass
class CnnNetwork:
    """The netlist plus where each layer lives in it."""

    spec: CnnSpec
    net: NetworkSpec
    inputs: Population
    conv_tiles: Dict[Tuple[int, int], Population]
    pool: Population
    outputs: List[Population]
    tile: int

    def conv_neuron(self, k: int, i: int, j: int) -> int:
        t = self.tile
        tile = self.conv_tiles[(i // t, j // t)]
        return tile.first + k * t * t + (i % t) * t + (j % t)

    def pool_neuron(self, k: int, i: int, j: int) -> int:
        side = self.spec.pool_size
        return self.pool.first + k * side * side + i * side + j


def build_cnn(
    spec: CnnSpec = CnnSpec(),
    readout: Mapping[int, Sequence[int]] | None = None,
    capacity: int = 256,
) -> CnnNetwork:
    """Lays out the conv, pooling and readout layers as a netlist.

    Input pixels are a virtual population. Conv maps are cut into square
    tiles, one population per tile holding the tile for every kernel, so a
    pixel reaches few cores. `readout` maps a class to the pool neurons
    (indices within the pool layer) wired to its output population;
    without it the fully-connected layer has no synapses.
    """
    spec.check()
    net = NetworkSpec("cnn")
    side = spec.input_size
    inputs = net.add_population("input", side * side, virtual=True)
    tile = spec.tile(capacity)
    conv_tiles = {}
    for row in range(spec.conv_size // tile):
        for col in range(spec.conv_size // tile):
            conv_tiles[(row, col)] = net.add_population(
                f"conv_{row}_{col}",
                len(spec.kernels) * tile * tile,
                params="conv",
            )
    pool = net.add_population(
        "pool", len(spec.kernels) * spec.pool_size**2, params="pool"
    )
    outputs = [
        net.add_population(f"out{c}", spec.output_size, params="output")
        for c in range(spec.classes)
    ]
    cnn = CnnNetwork(spec, net, inputs, conv_tiles, pool, outputs, tile)

    for k, name in enumerate(spec.kernels):
        template = kernel(name, spec.kernel_size)
        for i in range(spec.conv_size):
            for j in range(spec.conv_size):
                dst = cnn.conv_neuron(k, i, j)
                for a in range(spec.kernel_size):
                    r = spec.stride * i - spec.padding + a
                    if not 0 <= r < side:
                        continue
                    for b in range(spec.kernel_size):
                        c = spec.stride * j - spec.padding + b
                        if not 0 <= c < side:
                            continue
                        syn = (
                            SynType.FastExc
                            if template[a, b] > 0
                            else SynType.SubInh
                        )
                        net.connect(inputs.first + r * side + c, dst, syn)

    for k in range(len(spec.kernels)):
        for i in range(spec.pool_size):
            for j in range(spec.pool_size):
                dst = cnn.pool_neuron(k, i, j)
                for a in range(spec.pool):
                    for b in range(spec.pool):
                        src = cnn.conv_neuron(
                            k, spec.pool * i + a, spec.pool * j + b
                        )
                        net.connect(src, dst, SynType.FastExc)

    for c, chosen in sorted((readout or {}).items()):
        if not 0 <= c < spec.classes:
            raise SpecError(f"readout for unknown class {c}")
        for n in chosen:
            if not 0 <= n < pool.size:
                raise SpecError(f"readout source {n} is outside the pool")
            for dst in outputs[c].ids:
                net.connect(pool.first + n, dst, SynType.FastExc)
    return cnn
