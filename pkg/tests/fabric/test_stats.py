import pytest

from dynapsim.fabric.config import ENERGY_PRESETS
from dynapsim.fabric.stats import SimStats


def stats() -> SimStats:
    return SimStats(ENERGY_PRESETS["1.8V"])


def test_latencies_are_binned_as_they_arrive():
    s = stats()
    for latency in [3.0, 9.9, 10.0, 47.5, 12.0]:
        s.record_latency(latency)
    assert s.latency_histogram() == {0.0: 2, 10.0: 2, 40.0: 1}
    assert s.latency_mean_ns == pytest.approx(82.4 / 5)
    assert s.latency_max_ns == 47.5
    assert "latency_sum_ns" not in s.counters()
    assert s.to_tsv().endswith("latency_ns\tcount\n0.0\t2\n10.0\t2\n40.0\t1\n")


def test_histogram_memory_is_bounded_by_the_bins():
    s = stats()
    for n in range(100_000):
        s.record_latency(float(n % 50))
    assert s.latency_histogram() == {
        0.0: 20_000,
        10.0: 20_000,
        20.0: 20_000,
        30.0: 20_000,
        40.0: 20_000,
    }


def test_snapshot_does_not_share_bins():
    s = stats()
    s.record_latency(5.0)
    frozen = s.snapshot()
    s.record_latency(5.0)
    assert frozen.latency_histogram() == {0.0: 1}
    assert s.latency_histogram() == {0.0: 2}


def test_no_deliveries_has_no_mean():
    assert stats().latency_mean_ns is None
