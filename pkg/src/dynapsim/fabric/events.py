from dataclasses import dataclass

from .routers import Direction, Port
from ..packets.image import SlotAddress
from ..packets.words import CamEntry, Packet, RoutingWord


@dataclass(frozen=True)
class Spike:
    chip: int
    core: int
    neuron: int


@dataclass(frozen=True)
class R1Dispatch:
    chip: int
    core: int
    packet: Packet


@dataclass(frozen=True)
class R2Arrive:
    chip: int
    packet: Packet
    direction: Direction


@dataclass(frozen=True)
class R3Arrive:
    chip: int
    packet: Packet
    port: Port


@dataclass(frozen=True)
class CoreBroadcast:
    chip: int
    core: int
    packet: Packet


@dataclass(frozen=True)
class ProgramSram:
    core: int
    neuron: int
    slot: int
    word: RoutingWord | None


@dataclass(frozen=True)
class ProgramCam:
    core: int
    neuron: int
    slot: int
    entry: CamEntry | None


type ExternalPayload = Packet | ProgramSram | ProgramCam


@dataclass(frozen=True)
class External:
    chip: int
    payload: ExternalPayload
    admitted: bool = False


type Event = Spike | R1Dispatch | R2Arrive | R3Arrive | CoreBroadcast | External


def programming_payload(address: SlotAddress, value) -> ExternalPayload:
    match value:
        case RoutingWord():
            return ProgramSram(
                address.core, address.neuron, address.slot, value
            )
        case CamEntry():
            return ProgramCam(
                address.core, address.neuron, address.slot, value
            )
    raise TypeError(f"cannot program {value!r}")
