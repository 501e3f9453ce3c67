import dataclasses
from dataclasses import dataclass
from enum import IntEnum
from typing import Dict, Tuple

from ..errors import EncodingError, RangeError


class SynType(IntEnum):
    FastExc = 0
    SlowExc = 1
    SubInh = 2
    ShuntInh = 3

    @property
    def is_excitatory(self) -> bool:
        return self in (SynType.FastExc, SynType.SlowExc)


# (field, low bit, width). Sign bits: 0 means +X (east) / +Y (north).
ROUTING_WORD_LAYOUT: Tuple[Tuple[str, int, int], ...] = (
    ("tag", 0, 10),
    ("core_id", 10, 4),
    ("dx", 14, 2),
    ("dy", 16, 2),
    ("sx", 18, 1),
    ("sy", 19, 1),
)
CAM_ENTRY_LAYOUT: Tuple[Tuple[str, int, int], ...] = (
    ("tag", 0, 10),
    ("syn_type", 10, 2),
)
ROUTING_WORD_BITS = 20
CAM_ENTRY_BITS = 12
FANOUT_HDR_BITS = 2
WIDTHS: Dict[str, int] = {
    **{name: width for name, _, width in ROUTING_WORD_LAYOUT},
    "fanout_hdr": FANOUT_HDR_BITS,
}


def check_width(field: str, value: int, width: int) -> int:
    if not 0 <= value < (1 << width):
        raise EncodingError(field, value, width)
    return value


@dataclass(frozen=True)
class RoutingWord:
    tag: int = 0
    core_id: int = 0
    dx: int = 0
    dy: int = 0
    sx: int = 0
    sy: int = 0

    def __post_init__(self):
        for name, _, width in ROUTING_WORD_LAYOUT:
            check_width(name, getattr(self, name), width)

    def __str__(self):
        x = f"{'-' if self.sx else '+'}{self.dx}"
        y = f"{'-' if self.sy else '+'}{self.dy}"
        return f"tag={self.tag} core={self.core_id} dx={x} dy={y}"


@dataclass(frozen=True)
class CamEntry:
    tag: int
    syn_type: SynType = SynType.FastExc

    def __post_init__(self):
        check_width("tag", self.tag, 10)
        if not isinstance(self.syn_type, SynType):
            syn = check_width("syn_type", int(self.syn_type), 2)
            object.__setattr__(self, "syn_type", SynType(syn))


@dataclass(frozen=True)
class Packet:
    """An address event in flight through R1/R2/R3."""

    tag: int
    fanout_hdr: int
    core_id: int
    dx: int
    dy: int
    sx: int
    sy: int
    seq: int
    src: Tuple[int, int, int] | None = None

    def __post_init__(self):
        for name, width in WIDTHS.items():
            check_width(name, getattr(self, name), width)

    @staticmethod
    def from_word(
        word: RoutingWord,
        fanout_hdr: int,
        seq: int,
        src: Tuple[int, int, int] | None = None,
    ) -> "Packet":
        return Packet(
            word.tag,
            fanout_hdr,
            word.core_id,
            word.dx,
            word.dy,
            word.sx,
            word.sy,
            seq,
            src,
        )

    @property
    def at_destination_chip(self) -> bool:
        return self.dx == 0 and self.dy == 0

    def hop_x(self) -> "Packet":
        return dataclasses.replace(self, dx=self.dx - 1)

    def hop_y(self) -> "Packet":
        return dataclasses.replace(self, dy=self.dy - 1)

    def word(self) -> RoutingWord:
        return RoutingWord(
            self.tag, self.core_id, self.dx, self.dy, self.sx, self.sy
        )


def _pack(value_of, layout) -> int:
    packed = 0
    for name, low, width in layout:
        packed |= check_width(name, int(value_of(name)), width) << low
    return packed


def _unpack(value: int, layout) -> Dict[str, int]:
    return {
        name: (value >> low) & ((1 << width) - 1) for name, low, width in layout
    }


def encode_routing_word(w: RoutingWord) -> int:
    return _pack(lambda name: getattr(w, name), ROUTING_WORD_LAYOUT)


def decode_routing_word(v: int) -> RoutingWord:
    if not 0 <= v < (1 << ROUTING_WORD_BITS):
        raise RangeError(
            f"Routing word 0x{v:X} exceeds {ROUTING_WORD_BITS} bits"
        )
    return RoutingWord(**_unpack(v, ROUTING_WORD_LAYOUT))


def encode_cam_entry(e: CamEntry) -> int:
    return _pack(lambda name: getattr(e, name), CAM_ENTRY_LAYOUT)


def decode_cam_entry(v: int) -> CamEntry:
    if not 0 <= v < (1 << CAM_ENTRY_BITS):
        raise RangeError(f"CAM entry 0x{v:X} exceeds {CAM_ENTRY_BITS} bits")
    fields = _unpack(v, CAM_ENTRY_LAYOUT)
    return CamEntry(fields["tag"], SynType(fields["syn_type"]))
