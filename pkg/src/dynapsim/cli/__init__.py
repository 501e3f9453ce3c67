from .aer import BINARY_V1, AerEvent, ingest_aer, write_aer
from .cnn import KERNELS, CnnNetwork, CnnSpec, build_cnn, kernel
from .demo import DemoReport, Presentation, run_demo
from .glyphs import SUITS, glyph, glyph_events
from .readout import (
    AMBIGUOUS,
    classify,
    decision_latency,
    spike_counts,
    train_readout,
)
from .session import Session, aer_sources, poisson_events
