import struct

import numpy as np
import pytest

from dynapsim.cli.aer import BINARY_V1, AerEvent, ingest_aer, write_aer
from dynapsim.errors import ParseError


def test_empty_file(tmp_path):
    path = tmp_path / "empty"
    path.write_bytes(b"")
    assert ingest_aer(path, "csv") == []
    assert ingest_aer(path, "binary-v1") == []


def test_csv_record(tmp_path):
    path = tmp_path / "one.csv"
    path.write_text("100,3,4,1\n")
    assert ingest_aer(path) == [AerEvent(100, 3, 4, 1)]


def test_csv_comments_and_zero_polarity(tmp_path):
    path = tmp_path / "off.csv"
    path.write_text("# t,x,y,p\n\n5, 0, 1, 0\n")
    assert ingest_aer(path) == [AerEvent(5, 0, 1, -1)]


def test_sort_keeps_file_order_of_simultaneous_events(tmp_path):
    path = tmp_path / "order.csv"
    path.write_text("20,1,1,1\n10,2,2,1\n10,1,1,-1\n")
    assert ingest_aer(path) == [
        AerEvent(10, 2, 2, 1),
        AerEvent(10, 1, 1, -1),
        AerEvent(20, 1, 1, 1),
    ]


@pytest.mark.parametrize("format", ["csv", "binary-v1"])
def test_round_trip_of_10k_events(tmp_path, format):
    rng = np.random.default_rng(11)
    n = 10_000
    times = np.sort(rng.integers(0, 2**32, n))
    xs = rng.integers(0, 2**16, n)
    ys = rng.integers(0, 2**16, n)
    polarity = rng.choice([-1, 1], n)
    events = [
        AerEvent(int(t), int(x), int(y), int(p))
        for t, x, y, p in zip(times, xs, ys, polarity)
    ]
    path = tmp_path / f"events.{format}"
    write_aer(path, events, format)
    assert ingest_aer(path, format) == events


def test_binary_record_layout(tmp_path):
    assert BINARY_V1.itemsize == 9
    path = tmp_path / "one.bin"
    write_aer(path, [AerEvent(0x01020304, 5, 6, -1)], "binary-v1")
    assert path.read_bytes() == struct.pack("<IHHb", 0x01020304, 5, 6, -1)


def test_truncated_binary_names_byte_offset(tmp_path):
    path = tmp_path / "short.bin"
    write_aer(path, [AerEvent(1, 1, 1, 1), AerEvent(2, 2, 2, 1)], "binary-v1")
    path.write_bytes(path.read_bytes() + b"\x00\x01\x02\x03")
    with pytest.raises(ParseError, match="byte 18"):
        ingest_aer(path, "binary-v1")


def test_binary_bad_polarity_names_byte_offset(tmp_path):
    records = np.array([(1, 1, 1, 1), (2, 2, 2, 0)], dtype=BINARY_V1)
    path = tmp_path / "bad.bin"
    path.write_bytes(records.tobytes())
    with pytest.raises(ParseError, match="byte 9"):
        ingest_aer(path, "binary-v1")


def test_malformed_csv_names_byte_and_line(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("1,1,1,1\nfoo\n")
    with pytest.raises(ParseError, match=r"byte 8 \(line 2\)"):
        ingest_aer(path)


def test_negative_timestamp(tmp_path):
    path = tmp_path / "neg.csv"
    path.write_text("-5,1,1,1\n")
    with pytest.raises(ParseError, match="negative timestamp"):
        ingest_aer(path)


def test_coordinates_checked_against_sensor(tmp_path):
    path = tmp_path / "wide.csv"
    path.write_text("1,40,1,1\n")
    assert len(ingest_aer(path)) == 1
    with pytest.raises(ParseError, match="x=40"):
        ingest_aer(path, width=32, height=32)
