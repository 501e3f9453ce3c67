import pytest

from dynapsim.errors import ParseError
from dynapsim.packets.image import (
    CamLine,
    CommentLine,
    EmptyLine,
    ErrorLine,
    MemoryImage,
    SlotAddress,
    SramLine,
    image_text,
    load_image,
    parse_image,
)
from dynapsim.packets.words import CamEntry, RoutingWord, SynType


def test_parse_sram_line():
    lines = parse_image("0:1:2:3 = 0x003FF\n")
    assert type(lines[0]) is SramLine
    assert lines[0].address == SlotAddress(0, 1, 2, 3)
    assert lines[0].word == RoutingWord(tag=1023)


def test_parse_cam_line_with_comment():
    lines = parse_image("1:0:255:63 = 0xC05 ;shunting\n")
    assert type(lines[0]) is CamLine
    assert lines[0].entry == CamEntry(5, SynType.ShuntInh)
    assert lines[0].comment == "shunting"


def test_parse_comment_and_empty():
    lines = parse_image("; header\n\n0:0:0:0 = 0x00000\n")
    assert type(lines[0]) is CommentLine
    assert type(lines[1]) is EmptyLine
    assert type(lines[2]) is SramLine


@pytest.mark.parametrize(
    "text", ["0:0:0:0 = 0x0001", "0:0:0:0 = 0x000001", "0:0:0:0 = 0x1"]
)
def test_parse_rejects_malformed_width(text):
    lines = parse_image(text)
    assert type(lines[0]) is ErrorLine
    assert "width" in lines[0].source()


def test_parse_rejects_slot_out_of_range():
    assert type(parse_image("0:0:0:4 = 0x00000")[0]) is ErrorLine
    assert type(parse_image("0:0:0:64 = 0x000")[0]) is ErrorLine
    assert type(parse_image("0:0:0:63 = 0x000")[0]) is CamLine


def test_parse_rejects_missing_pieces():
    assert type(parse_image("0:0:0 = 0x00000")[0]) is ErrorLine
    assert type(parse_image("0:0:0:0 0x00000")[0]) is ErrorLine
    assert type(parse_image("0:0:0:0 = 12")[0]) is ErrorLine


def test_error_lines_report_line_number():
    lines = parse_image("0:0:0:0 = 0x00001\n0:0:0:1 = 0x0001\n")
    assert type(lines[0]) is SramLine
    assert type(lines[1]) is ErrorLine
    assert lines[1].line == 2
    assert lines[1].source().startswith(";ERROR: line 2:")


def test_load_image_raises_with_all_errors():
    with pytest.raises(ParseError) as exc:
        load_image("0:0:0:0 = 0x1\n0:0:0:1 = 0x00001\n0:0:0:9 = 0x00001\n")
    assert len(exc.value.errors) == 2


def test_load_image_last_writer_wins():
    image = load_image("0:0:0:0 = 0x00001\n0:0:0:0 = 0x00002\n")
    assert image.sram[SlotAddress(0, 0, 0, 0)] == RoutingWord(tag=2)
    assert len(image) == 1


def test_image_text_reloads():
    image = MemoryImage()
    image.write_sram(SlotAddress(0, 0, 7, 1), RoutingWord(5, 3, 1, 2, 1, 0))
    image.write_sram(SlotAddress(0, 0, 3, 0), RoutingWord(tag=1))
    image.write_cam(SlotAddress(1, 2, 0, 10), CamEntry(5, SynType.SubInh))
    text = image_text(image)
    assert text.splitlines()[1] == "0:0:3:0 = 0x00001"
    assert load_image(text) == image


def test_write_none_clears():
    image = MemoryImage()
    address = SlotAddress(0, 0, 0, 0)
    image.write_cam(address, CamEntry(1))
    image.write_cam(address, None)
    assert len(image) == 0
    assert image_text(image) == ""
