import logging
from typing import Dict, List, Literal, Mapping, Sequence, Tuple

import numpy as np

from ..compiler.netlist import Population
from ..errors import SpecError

logger = logging.getLogger(__name__)

AMBIGUOUS = "ambiguous"

type Label = int | Literal["ambiguous"]
# (time in ms, class index)
type ClassSpikes = Sequence[Tuple[float, int]]


def spike_counts(
    raster: Sequence[Tuple[float, int]], population: Population
) -> np.ndarray:
    """Spikes per neuron of `population`, indexed from its first neuron."""
    counts = np.zeros(population.size, dtype=np.int64)
    for _, neuron in raster:
        if neuron in population.ids:
            counts[neuron - population.first] += 1
    return counts


def class_spikes(
    raster: Sequence[Tuple[float, int]], outputs: Sequence[Population]
) -> List[Tuple[float, int]]:
    spikes = []
    for t, neuron in raster:
        for c, population in enumerate(outputs):
            if neuron in population.ids:
                spikes.append((t, c))
    return spikes


def train_readout(
    pool_counts: Mapping[int, Sequence[np.ndarray] | np.ndarray],
    size: int = 64,
) -> Dict[int, List[int]]:
    """Wires each class to its `size` most active pooling neurons.

    Counts from a class's training presentations are summed, ranked by
    count and then by neuron index. Silent neurons are never chosen.
    """
    wiring = {}
    for c in sorted(pool_counts):
        presentations = np.atleast_2d(np.asarray(pool_counts[c]))
        if presentations.size == 0:
            raise SpecError(f"class {c} has no training presentation")
        counts = presentations.sum(axis=0)
        order = np.lexsort((np.arange(len(counts)), -counts))
        active = order[counts[order] > 0]
        if len(active) < size:
            logger.warning(
                "class %d has only %d active pooling neurons; wiring all of"
                " them instead of %d",
                c,
                len(active),
                size,
            )
        wiring[c] = sorted(int(n) for n in active[:size])
    return wiring


def window_counts(
    spikes: ClassSpikes,
    onset_ms: float,
    classes: int,
    delay_ms: float = 24.0,
    window_ms: float = 20.0,
) -> np.ndarray:
    counts = np.zeros(classes, dtype=np.int64)
    start = onset_ms + delay_ms
    for t, c in spikes:
        if start <= t < start + window_ms:
            counts[c] += 1
    return counts


def label_of(counts: np.ndarray) -> Label:
    top = counts.max(initial=0)
    winners = np.flatnonzero(counts == top)
    if top == 0 or len(winners) != 1:
        return AMBIGUOUS
    return int(winners[0])


def classify(
    spikes: ClassSpikes,
    onsets_ms: Sequence[float],
    classes: int,
    delay_ms: float = 24.0,
    window_ms: float = 20.0,
) -> List[Label]:
    """One label per stimulus: the population firing most in its window."""
    return [
        label_of(window_counts(spikes, onset, classes, delay_ms, window_ms))
        for onset in onsets_ms
    ]


def decision_latency(
    spikes: ClassSpikes,
    onset_ms: float,
    truth: int,
    classes: int,
    horizon_ms: float | None = None,
) -> float | None:
    """Time from onset until cumulative counts first single out `truth`."""
    counts = np.zeros(classes, dtype=np.int64)
    pending = sorted(
        (t, c)
        for t, c in spikes
        if t >= onset_ms and (horizon_ms is None or t < onset_ms + horizon_ms)
    )
    i = 0
    while i < len(pending):
        t = pending[i][0]
        while i < len(pending) and pending[i][0] == t:
            counts[pending[i][1]] += 1
            i += 1
        if label_of(counts) == truth:
            return t - onset_ms
    return None
