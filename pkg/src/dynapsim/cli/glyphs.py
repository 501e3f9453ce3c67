"""Synthetic card-suit event streams.

Each suit is drawn as a 31x31 darkness map inside a 32x32 sensor; every
pixel then fires a Poisson train whose rate runs from 0 Hz (white) to the
maximum rate (black).
"""

from typing import List

import numpy as np

from .aer import AerEvent

SUITS = ("spade", "heart", "diamond", "club")
GLYPH_SIZE = 31
SENSOR_SIZE = 32
# Sub-samples per pixel side when anti-aliasing edges.
OVERSAMPLE = 4


def _disc(u, v, cu: float, cv: float, r: float) -> np.ndarray:
    return (u - cu) ** 2 + (v - cv) ** 2 <= r * r


def _stem(u, v) -> np.ndarray:
    # Flares from 0.08 at the lobes to 0.35 at the base.
    half = 0.08 + 0.27 * np.clip((-0.45 - v) / 0.5, 0.0, 1.0)
    return (np.abs(u) <= half) & (v >= -0.95) & (v <= -0.3)


def _inside(suit: str, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Shape membership on [-1, 1]^2 with v pointing up."""
    match suit:
        case "diamond":
            return np.abs(u) / 0.7 + np.abs(v) / 0.95 <= 1.0
        case "heart":
            lobes = _disc(u, v, -0.42, 0.38, 0.42) | _disc(
                u, v, 0.42, 0.38, 0.42
            )
            point = (v <= 0.4) & (np.abs(u) <= 0.84 * (v + 0.92) / 1.32)
            return lobes | point
        case "spade":
            lobes = _disc(u, v, -0.4, -0.05, 0.38) | _disc(
                u, v, 0.4, -0.05, 0.38
            )
            point = (v >= -0.1) & (np.abs(u) <= 0.78 * (0.95 - v) / 1.05)
            return lobes | point | _stem(u, v)
        case "club":
            leaves = (
                _disc(u, v, 0.0, 0.5, 0.33)
                | _disc(u, v, -0.43, -0.05, 0.33)
                | _disc(u, v, 0.43, -0.05, 0.33)
                | _disc(u, v, 0.0, 0.1, 0.22)
            )
            return leaves | _stem(u, v)
    raise ValueError(f"unknown suit '{suit}'")


def glyph(suit: str, size: int = GLYPH_SIZE) -> np.ndarray:
    """Darkness in [0, 1] of a size x size rendering, row 0 at the top."""
    n = size * OVERSAMPLE
    centres = (np.arange(n) + 0.5) / n * 2.0 - 1.0
    u, v = np.meshgrid(centres, -centres)
    hits = _inside(suit, u, v).astype(float)
    return hits.reshape(size, OVERSAMPLE, size, OVERSAMPLE).mean(axis=(1, 3))


def sensor_frame(suit: str, sensor: int = SENSOR_SIZE) -> np.ndarray:
    frame = np.zeros((sensor, sensor))
    frame[:GLYPH_SIZE, :GLYPH_SIZE] = glyph(suit)
    return frame


def glyph_events(
    suit: str,
    duration_ms: float,
    rng: np.random.Generator,
    max_rate_hz: float = 400.0,
    sensor: int = SENSOR_SIZE,
) -> List[AerEvent]:
    """One presentation of a suit as ON events starting at t = 0."""
    rates = sensor_frame(suit, sensor) * max_rate_hz
    counts = rng.poisson(rates * duration_ms * 1e-3)
    events = []
    for y, x in zip(*np.nonzero(counts)):
        times = rng.uniform(0.0, duration_ms * 1e3, int(counts[y, x]))
        events.extend(AerEvent(int(t), int(x), int(y), 1) for t in times)
    events.sort()
    return events
