import io
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Protocol, runtime_checkable

import dynapsim.packets.tokens as tokens
from .lexer import Lexer
from .words import (
    CamEntry,
    RoutingWord,
    decode_cam_entry,
    decode_routing_word,
    encode_cam_entry,
    encode_routing_word,
)
from ..errors import ParseError, RangeError
from ..utils.buffer import ParserBuffer

"""
1. address   ::= DEC COLON DEC COLON DEC COLON DEC
2. entry     ::= address EQUALS HEX
3. statement ::= [COMMENT | entry [COMMENT]] EMPTY

A 5-digit HEX is an SRAM routing word, a 3-digit HEX is a CAM entry.
"""

SRAM_DIGITS, CAM_DIGITS = 5, 3


@dataclass(frozen=True, order=True)
class SlotAddress:
    chip: int
    core: int
    neuron: int
    slot: int

    def __str__(self):
        return f"{self.chip}:{self.core}:{self.neuron}:{self.slot}"


@runtime_checkable
class ImageLine(Protocol):
    def source(self) -> str: ...


@dataclass
class ErrorLine:
    comment: str | None = None
    line: int | None = None

    def source(self) -> str:
        message = self.comment or "Failed to parse line"
        where = f"line {self.line}: " if self.line is not None else ""
        return f";ERROR: {where}{message}"


@dataclass
class EmptyLine:
    def source(self) -> str:
        return ""


@dataclass
class CommentLine:
    comment: str

    def source(self) -> str:
        return f";{self.comment}"


@dataclass
class SramLine:
    address: SlotAddress
    word: RoutingWord
    comment: str | None = None

    def source(self) -> str:
        value = encode_routing_word(self.word)
        text = f"{self.address} = 0x{value:0{SRAM_DIGITS}X}"
        return f"{text:24};{self.comment}" if self.comment else text


@dataclass
class CamLine:
    address: SlotAddress
    entry: CamEntry
    comment: str | None = None

    def source(self) -> str:
        value = encode_cam_entry(self.entry)
        text = f"{self.address} = 0x{value:0{CAM_DIGITS}X}"
        return f"{text:24};{self.comment}" if self.comment else text


@dataclass
class MemoryImage:
    """Bit-exact contents of every SRAM routing slot and CAM slot."""

    sram: Dict[SlotAddress, RoutingWord] = field(default_factory=dict)
    cam: Dict[SlotAddress, CamEntry] = field(default_factory=dict)

    def write_sram(self, address: SlotAddress, word: RoutingWord | None):
        if word is None:
            self.sram.pop(address, None)
        else:
            self.sram[address] = word

    def write_cam(self, address: SlotAddress, entry: CamEntry | None):
        if entry is None:
            self.cam.pop(address, None)
        else:
            self.cam[address] = entry

    def lines(self) -> Iterator[ImageLine]:
        if self.sram:
            yield CommentLine(" SRAM routing words: chip:core:neuron:slot")
            for address in sorted(self.sram):
                yield SramLine(address, self.sram[address])
        if self.cam:
            yield CommentLine(" CAM entries: chip:core:neuron:slot")
            for address in sorted(self.cam):
                yield CamLine(address, self.cam[address])

    def __len__(self) -> int:
        return len(self.sram) + len(self.cam)


def image_listing(image: MemoryImage) -> List[str]:
    return [line.source() for line in image.lines()]


def image_text(image: MemoryImage) -> str:
    listing = image_listing(image)
    return "\n".join(listing) + "\n" if listing else ""


class ImageParser:
    def __init__(
        self,
        buffer: io.StringIO,
        sram_slots: int = 4,
        cam_slots: int = 64,
    ):
        self.lexer = Lexer(buffer)
        self._buffer = ParserBuffer(self.lexer)
        self.sram_slots, self.cam_slots = sram_slots, cam_slots

    def __iter__(self):
        return self

    def __next__(self) -> ImageLine:
        if self._buffer.peek() is None:
            raise StopIteration()
        line = self.lexer.line
        try:
            return self.statement()
        except (SyntaxError, RangeError, ValueError) as s:
            self._buffer.skip_to_next_line({tokens.Empty})
            message = s.msg if isinstance(s, SyntaxError) else str(s)
            return ErrorLine(comment=message or None, line=line)

    # address ::= DEC COLON DEC COLON DEC COLON DEC
    def address(self) -> SlotAddress | None:
        if not (first := self._buffer.may_match(tokens.Decimal)):
            return None
        parts = [first.value]
        for _ in range(3):
            self._buffer.must_match(tokens.Colon, "':'")
            parts.append(self._buffer.must_match(tokens.Decimal).value)
        if any(p < 0 for p in parts):
            raise SyntaxError("Negative address component")
        return SlotAddress(*parts)

    # entry ::= address EQUALS HEX
    def entry(self) -> SramLine | CamLine | None:
        if not (address := self.address()):
            return None
        self._buffer.must_match(tokens.Equals, "'='")
        value = self._buffer.must_match(tokens.Hexadecimal, "hex value")
        if value.digits == SRAM_DIGITS:
            if address.slot >= self.sram_slots:
                raise SyntaxError(f"SRAM slot {address.slot} out of range")
            return SramLine(address, decode_routing_word(value.value))
        elif value.digits == CAM_DIGITS:
            if address.slot >= self.cam_slots:
                raise SyntaxError(f"CAM slot {address.slot} out of range")
            return CamLine(address, decode_cam_entry(value.value))
        raise SyntaxError(
            f"Malformed width: {value.digits} hex digits (expected"
            f" {SRAM_DIGITS} for SRAM or {CAM_DIGITS} for CAM)"
        )

    # statement ::= [COMMENT | entry [COMMENT]] EMPTY
    def statement(self) -> ImageLine:
        return_line: SramLine | CamLine | CommentLine | None
        if self._buffer.may_match(tokens.Empty):
            return EmptyLine()
        elif comment_token := self._buffer.may_match(tokens.Comment):
            return_line = CommentLine(comment_token.value)
        elif return_line := self.entry():
            if comment := self._buffer.may_match(tokens.Comment):
                return_line.comment = comment.value
        else:
            raise SyntaxError("Failed to parse line")
        self._buffer.must_match(tokens.Empty, "end of line")
        return return_line


def parse_image(text: str, sram_slots=4, cam_slots=64) -> List[ImageLine]:
    # Ensure input is terminated with a single \n.
    parser = ImageParser(
        io.StringIO(text.rstrip() + "\n"), sram_slots, cam_slots
    )
    return [item for item in parser]


def load_image(text: str, sram_slots=4, cam_slots=64) -> MemoryImage:
    lines = parse_image(text, sram_slots, cam_slots)
    errors = [line.source() for line in lines if isinstance(line, ErrorLine)]
    if errors:
        raise ParseError("Malformed memory image", errors)
    image = MemoryImage()
    for line in lines:
        match line:
            case SramLine(address=address, word=word):
                image.write_sram(address, word)
            case CamLine(address=address, entry=entry):
                image.write_cam(address, entry)
    return image


