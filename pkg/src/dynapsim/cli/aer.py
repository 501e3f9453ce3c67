import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, List, Literal

import numpy as np

from ..errors import ParseError

logger = logging.getLogger(__name__)

type AerFormat = Literal["csv", "binary-v1"]

# Little-endian packed records: u32 timestamp (us), u16 x, u16 y, i8 polarity.
BINARY_V1 = np.dtype(
    [("t", "<u4"), ("x", "<u2"), ("y", "<u2"), ("p", "i1")], align=False
)


@dataclass(frozen=True, order=True)
class AerEvent:
    t_us: int
    x: int
    y: int
    polarity: int


def _check(event: AerEvent, width, height, offset: int, line=None):
    where = f"byte {offset}" + (f" (line {line})" if line else "")
    if event.polarity not in (-1, 1):
        raise ParseError(f"{where}: polarity {event.polarity} is not +1 or -1")
    if event.t_us < 0:
        raise ParseError(f"{where}: negative timestamp {event.t_us}")
    if width is not None and not 0 <= event.x < width:
        raise ParseError(f"{where}: x={event.x} outside sensor width {width}")
    if height is not None and not 0 <= event.y < height:
        raise ParseError(f"{where}: y={event.y} outside sensor height {height}")


def _read_csv(data: bytes, width, height) -> List[AerEvent]:
    events = []
    offset = 0
    for number, raw in enumerate(data.splitlines(keepends=True), start=1):
        text = raw.decode("ascii", errors="replace").strip()
        if text and not text.startswith("#"):
            fields = [f.strip() for f in text.split(",")]
            try:
                if len(fields) != 4:
                    raise ValueError(f"expected 4 fields, got {len(fields)}")
                t, x, y, p = (int(f) for f in fields)
            except ValueError as e:
                raise ParseError(
                    f"byte {offset} (line {number}): malformed record: {e}"
                ) from e
            # Sensors that log polarity as 0/1 mean 0 = off.
            event = AerEvent(t, x, y, -1 if p == 0 else p)
            _check(event, width, height, offset, number)
            events.append(event)
        offset += len(raw)
    return events


def _read_binary(data: bytes, width, height) -> List[AerEvent]:
    whole, tail = divmod(len(data), BINARY_V1.itemsize)
    if tail:
        raise ParseError(
            f"byte {whole * BINARY_V1.itemsize}: truncated record"
            f" ({tail} of {BINARY_V1.itemsize} bytes)"
        )
    records = np.frombuffer(data, dtype=BINARY_V1, count=whole)
    events = []
    for i, r in enumerate(records):
        event = AerEvent(int(r["t"]), int(r["x"]), int(r["y"]), int(r["p"]))
        _check(event, width, height, i * BINARY_V1.itemsize)
        events.append(event)
    return events


def ingest_aer(
    path: str | Path,
    format: AerFormat = "csv",
    width: int | None = None,
    height: int | None = None,
) -> List[AerEvent]:
    """Reads an event file; returns its events sorted by timestamp."""
    data = Path(path).read_bytes()
    match format:
        case "csv":
            events = _read_csv(data, width, height)
        case "binary-v1":
            events = _read_binary(data, width, height)
        case _:
            raise ParseError(f"Unknown AER format '{format}'")
    # Stable, so simultaneous events keep file order.
    events.sort(key=lambda e: e.t_us)
    logger.debug("read %d events from %s", len(events), path)
    return events


def write_aer(
    path: str | Path, events: Iterable[AerEvent], format: AerFormat = "csv"
):
    events = list(events)
    match format:
        case "csv":
            text = "".join(
                f"{e.t_us},{e.x},{e.y},{e.polarity}\n" for e in events
            )
            Path(path).write_text(text)
        case "binary-v1":
            records = np.array(
                [(e.t_us, e.x, e.y, e.polarity) for e in events],
                dtype=BINARY_V1,
            )
            Path(path).write_bytes(records.tobytes())
        case _:
            raise ParseError(f"Unknown AER format '{format}'")
