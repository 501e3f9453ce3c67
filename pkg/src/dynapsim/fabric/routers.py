from dataclasses import dataclass
from enum import Enum
from typing import Callable, List, Tuple

from ..errors import RoutingFault
from ..packets.words import Packet, RoutingWord

type Coord = Tuple[int, int]


class Port(Enum):
    Local = "L"
    N = "N"
    S = "S"
    E = "E"
    W = "W"

    @property
    def opposite(self) -> "Port":
        match self:
            case Port.N:
                return Port.S
            case Port.S:
                return Port.N
            case Port.E:
                return Port.W
            case Port.W:
                return Port.E
        return Port.Local


class Direction(Enum):
    Up = "up"
    Down = "down"


class R1Decision(Enum):
    BroadcastLocal = "broadcast_local"
    ToR2 = "to_r2"


@dataclass(frozen=True)
class ToCore:
    core: int


@dataclass(frozen=True)
class ToR3: ...


type R2Decision = ToCore | ToR3


class R1State:
    """SRAM fan-out table of one core: up to four routing words per neuron."""

    def __init__(self, neurons: int = 256, slots: int = 4):
        if not 1 <= slots <= 4:
            raise ValueError("R1 supports 1 to 4 routing slots per neuron")
        self.neurons, self.slots = neurons, slots
        self.table: List[List[RoutingWord | None]] = [
            [None] * slots for _ in range(neurons)
        ]

    def write(self, neuron: int, slot: int, word: RoutingWord | None):
        self.table[neuron][slot] = word

    def words(self, neuron: int) -> List[RoutingWord]:
        return [word for word in self.table[neuron] if word is not None]

    def programmed(self):
        for neuron, row in enumerate(self.table):
            for slot, word in enumerate(row):
                if word is not None:
                    yield neuron, slot, word


def r1_emit(
    state: R1State,
    neuron: int,
    next_seq: Callable[[], int],
    src: Tuple[int, int, int] | None = None,
) -> List[Packet]:
    """Runs the SRAM address loop for one spike.

    The fan-out header starts at k-1 for k programmed words and counts down
    once per read; the loop exits after the read that sees zero.
    """
    words = state.words(neuron)
    remaining = len(words) - 1
    packets = []
    for word in words:
        packets.append(Packet.from_word(word, remaining, next_seq(), src))
        remaining -= 1
    return packets


def r1_dispatch(p: Packet, local_core: int) -> R1Decision:
    if p.at_destination_chip and p.core_id == local_core:
        return R1Decision.BroadcastLocal
    return R1Decision.ToR2


def r2_route(
    p: Packet, direction: Direction, cores_per_chip: int = 4
) -> R2Decision:
    if direction == Direction.Up and not p.at_destination_chip:
        return ToR3()
    if p.core_id >= cores_per_chip:
        raise RoutingFault(
            f"core id {p.core_id} does not exist on a"
            f" {cores_per_chip}-core chip"
        )
    return ToCore(p.core_id)


def neighbour(at: Coord, port: Port) -> Coord:
    x, y = at
    match port:
        case Port.E:
            return x + 1, y
        case Port.W:
            return x - 1, y
        case Port.N:
            return x, y + 1
        case Port.S:
            return x, y - 1
    return at


def r3_route(
    p: Packet,
    arrival: Port,
    at: Coord | None = None,
    grid: Coord | None = None,
) -> Tuple[Port, Packet]:
    # X first, then Y. Packets already travelling north/south have dx == 0.
    if arrival not in (Port.N, Port.S) and p.dx:
        exit_port, p = (Port.W if p.sx else Port.E), p.hop_x()
    elif p.dy:
        exit_port, p = (Port.S if p.sy else Port.N), p.hop_y()
    else:
        return Port.Local, p
    if at is not None and grid is not None:
        x, y = neighbour(at, exit_port)
        if not (0 <= x < grid[0] and 0 <= y < grid[1]):
            raise RoutingFault(
                f"packet {p.seq} leaves the mesh through {exit_port.name} of"
                f" chip {at}"
            )
    return exit_port, p


def route_word(
    word: RoutingWord,
    at: Coord,
    source_core: int,
    grid: Coord,
    cores_per_chip: int = 4,
) -> Tuple[Coord, int, int]:
    """Routes one word without timing; returns (chip, core, R3 hops)."""
    p = Packet.from_word(word, 0, 0)
    if r1_dispatch(p, source_core) == R1Decision.BroadcastLocal:
        return at, source_core, 0
    hops, arrival = 0, Port.Local
    if isinstance(r2_route(p, Direction.Up, cores_per_chip), ToR3):
        while True:
            exit_port, p = r3_route(p, arrival, at, grid)
            if exit_port == Port.Local:
                break
            at, arrival = neighbour(at, exit_port), exit_port.opposite
            hops += 1
    match r2_route(p, Direction.Down, cores_per_chip):
        case ToCore(core=core):
            return at, core, hops
    raise RoutingFault("R2 returned no destination core")
