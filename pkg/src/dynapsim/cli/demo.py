import logging
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

import numpy as np

from .aer import AerEvent
from .cnn import CnnNetwork, CnnSpec, build_cnn
from .glyphs import SUITS, glyph_events
from .readout import (
    AMBIGUOUS,
    Label,
    class_spikes,
    classify,
    decision_latency,
    spike_counts,
    train_readout,
    window_counts,
)
from .session import Session, aer_sources
from ..compiler.emit import emit_images
from ..compiler.layout import Placement
from ..compiler.placement import place
from ..config import CnnDemoConfig
from ..core.params import CoreParams
from ..errors import ConfigError, SpecError
from ..packets.image import MemoryImage

logger = logging.getLogger(__name__)

TRAIN, TEST = 0, 1


@dataclass(frozen=True)
class Presentation:
    index: int
    suit: int
    label: Label
    counts: Tuple[int, ...]
    # None when the outputs never single out the true class.
    latency_ms: float | None

    @property
    def correct(self) -> bool:
        return self.label == self.suit


def _accuracy(presentations: Sequence[Presentation]) -> float:
    if not presentations:
        return 0.0
    return sum(p.correct for p in presentations) / len(presentations)


def _label_name(label: Label) -> str:
    return AMBIGUOUS if label == AMBIGUOUS else SUITS[int(label)]


@dataclass
class DemoReport:
    readout: Dict[int, List[int]]
    training: List[Presentation]
    presentations: List[Presentation]
    stream: List[AerEvent] = field(default_factory=list)
    counters: Dict[str, int] = field(default_factory=dict)

    @property
    def accuracy(self) -> float:
        return _accuracy(self.presentations)

    @property
    def train_accuracy(self) -> float:
        return _accuracy(self.training)

    def confusion(self) -> Dict[Tuple[str, str], int]:
        table: Dict[Tuple[str, str], int] = {}
        for p in self.presentations:
            key = (SUITS[p.suit], _label_name(p.label))
            table[key] = table.get(key, 0) + 1
        return dict(sorted(table.items()))

    def latency_histogram(self, bin_ms: float = 5.0) -> Dict[float, int]:
        bins: Dict[float, int] = {}
        for p in self.presentations:
            if p.latency_ms is not None:
                low = (p.latency_ms // bin_ms) * bin_ms
                bins[low] = bins.get(low, 0) + 1
        return dict(sorted(bins.items()))

    def classification_tsv(self) -> str:
        counts = "\t".join(f"count_{suit}" for suit in SUITS)
        lines = [f"presentation\tsuit\tlabel\tcorrect\t{counts}\tlatency_ms"]
        for p in self.presentations:
            latency = "-" if p.latency_ms is None else f"{p.latency_ms:.3f}"
            row = [str(p.index), SUITS[p.suit], _label_name(p.label)]
            row.append("yes" if p.correct else "no")
            row += [str(n) for n in p.counts] + [latency]
            lines.append("\t".join(row))
        return "\n".join(lines) + "\n"

    def latency_tsv(self, bin_ms: float = 5.0) -> str:
        lines = ["latency_ms\tcount"]
        for low, count in self.latency_histogram(bin_ms).items():
            lines.append(f"{low:.1f}\t{count}")
        undecided = sum(p.latency_ms is None for p in self.presentations)
        lines.append(f"none\t{undecided}")
        return "\n".join(lines) + "\n"

    def summary(self) -> Dict:
        latencies = [
            p.latency_ms for p in self.presentations if p.latency_ms is not None
        ]
        return {
            "accuracy": self.accuracy,
            "train_accuracy": self.train_accuracy,
            "presentations": len(self.presentations),
            "ambiguous": sum(p.label == AMBIGUOUS for p in self.presentations),
            "confusion": [
                {"suit": suit, "label": label, "count": count}
                for (suit, label), count in self.confusion().items()
            ],
            "latency_ms": {
                "decided": len(latencies),
                "median": float(np.median(latencies)) if latencies else None,
                "max": max(latencies) if latencies else None,
                "all_under_30": len(latencies) == len(self.presentations)
                and all(latency < 30.0 for latency in latencies),
            },
            "readout_sizes": {
                SUITS[c]: len(chosen) for c, chosen in self.readout.items()
            },
            "counters": self.counters,
        }


class _Runner:
    """Presents event streams to one placed CNN, a fresh session each."""

    def __init__(self, cnn: CnnNetwork, config: CnnDemoConfig, totals):
        self.cnn = cnn
        self.config = config
        self.layers = config.layer_params()
        self.placement: Placement = place(cnn.net, config.fabric, config.seed)
        self.image: MemoryImage = emit_images(self.placement)
        self.totals: Dict[str, int] = totals

    def _params(self, name: str | None) -> CoreParams:
        if name not in self.layers:
            raise ConfigError(f"no layer parameters named '{name}'")
        return self.layers[name]

    def present(self, events: Sequence[AerEvent]) -> Session:
        side = self.cnn.spec.input_size
        session = Session(
            self.placement,
            self._params,
            seed=self.config.seed,
            dt_ms=self.config.dt_ms,
            jitter_ns=self.config.jitter_ns,
            image=self.image,
        )
        session.stimulate(aer_sources(events, self.cnn.inputs, side, side))
        stats = session.run(self.config.presentation_ms)
        for name, value in stats.counters().items():
            self.totals[name] = self.totals.get(name, 0) + value
        return session

    def evaluate(
        self, index: int, suit: int, events: Sequence[AerEvent]
    ) -> Presentation:
        c = self.config
        classes = self.cnn.spec.classes
        session = self.present(events)
        spikes = class_spikes(session.raster, self.cnn.outputs)
        counts = window_counts(spikes, 0.0, classes, c.delay_ms, c.window_ms)
        label = classify(spikes, [0.0], classes, c.delay_ms, c.window_ms)[0]
        latency = decision_latency(
            spikes, 0.0, suit, classes, horizon_ms=c.presentation_ms
        )
        logger.debug(
            "presentation %d: %s -> %s in %s ms",
            index,
            SUITS[suit],
            _label_name(label),
            latency,
        )
        return Presentation(
            index, suit, label, tuple(int(n) for n in counts), latency
        )


def _stream(
    config: CnnDemoConfig, phase: int, index: int, suit: int
) -> List[AerEvent]:
    rng = np.random.default_rng([config.seed, phase, index])
    return glyph_events(
        SUITS[suit], config.presentation_ms, rng, config.max_rate_hz
    )


def run_demo(config: CnnDemoConfig, spec: CnnSpec = CnnSpec()) -> DemoReport:
    """Trains the readout on synthetic suits, then classifies a test sweep.

    Every presentation starts from rest in a fresh session; the test sweep
    cycles through the suits in order.
    """
    if spec.classes != len(SUITS):
        raise SpecError(f"the demo has {len(SUITS)} suits, not {spec.classes}")
    capacity = config.fabric.neurons_per_core
    totals: Dict[str, int] = {}

    untrained = _Runner(build_cnn(spec, capacity=capacity), config, totals)
    training = [
        (suit, _stream(config, TRAIN, suit * config.train_per_class + r, suit))
        for suit in range(spec.classes)
        for r in range(config.train_per_class)
    ]
    pool_counts: Dict[int, List[np.ndarray]] = {
        suit: [] for suit in range(spec.classes)
    }
    for suit, events in training:
        session = untrained.present(events)
        counts = spike_counts(session.raster, untrained.cnn.pool)
        pool_counts[suit].append(counts)
    readout = train_readout(pool_counts, config.readout_size)

    wired = _Runner(build_cnn(spec, readout, capacity), config, totals)
    trained = [
        wired.evaluate(i, suit, events)
        for i, (suit, events) in enumerate(training)
    ]
    tested, stream = [], []
    offset_us = int(round(config.presentation_ms * 1e3))
    for index in range(config.test_presentations):
        suit = index % spec.classes
        events = _stream(config, TEST, index, suit)
        tested.append(wired.evaluate(index, suit, events))
        stream.extend(
            AerEvent(e.t_us + index * offset_us, e.x, e.y, e.polarity)
            for e in events
        )
    report = DemoReport(readout, trained, tested, stream, dict(totals))
    logger.info(
        "demo: %.1f%% test accuracy, %.1f%% training accuracy",
        100 * report.accuracy,
        100 * report.train_accuracy,
    )
    return report
