import json

import pytest

from dynapsim.__main__ import run
from dynapsim.errors import ExitCode

NETLIST = """network tiny seed 3
population inp 4 virtual
population hidden 8
population out 2   ; readout
connect inp hidden all_to_all fast_exc
connect hidden out random 0.5 fast_exc
"""

CONFIG = {
    "duration_ms": 20.0,
    "stimuli": [{"population": "inp", "rate_hz": 200.0}],
    "params": {
        "default": {
            "fast_exc": {"tau": 2.0, "weight": 800.0, "pulse_us": 1000.0}
        }
    },
}


@pytest.fixture
def files(tmp_path):
    netlist = tmp_path / "tiny.net"
    netlist.write_text(NETLIST)
    config = tmp_path / "sim.json"
    config.write_text(json.dumps(CONFIG))
    return str(netlist), str(config)


def read_summary(out) -> dict:
    return json.loads((out / "summary.json").read_text())


def test_analyze_memory_prototype_grid(tmp_path):
    assert run(["analyze-memory", "--out", str(tmp_path)]) == ExitCode.OK
    header, row = (tmp_path / "memory.tsv").read_text().splitlines()[:2]
    columns = dict(zip(header.split("\t"), row.split("\t")))
    assert columns["N"] == "1048576" and columns["F"] == "8192"
    assert columns["flat"] == "163840"
    summary = read_summary(tmp_path)
    assert summary["r3_throughput_mev"] == pytest.approx(400.0)
    assert set(summary["fanin_capacity"]) == {"20", "100"}
    scaling = (tmp_path / "scaling.tsv").read_text().splitlines()
    assert scaling[0] == "size\tbits_per_neuron\tbits_total"
    assert len(scaling) == 4


def test_simulate_is_byte_identical(files, tmp_path):
    netlist, config = files
    outputs = []
    for name in ("a", "b"):
        out = tmp_path / name
        argv = ["simulate", netlist, "--config", config, "--out", str(out)]
        assert run(argv + ["--seed", "5"]) == ExitCode.OK
        outputs.append(out)
    names = sorted(p.name for p in outputs[0].iterdir())
    assert names == ["raster.tsv", "stats.tsv", "summary.json"]
    for name in names:
        a = (outputs[0] / name).read_bytes()
        assert a == (outputs[1] / name).read_bytes()
    summary = read_summary(outputs[0])
    assert summary["seed"] == 5
    assert summary["counters"]["events_injected"] > 0


def test_simulate_trace(files, tmp_path):
    netlist, config = files
    argv = ["simulate", netlist, "--config", config, "--out", str(tmp_path)]
    assert run(argv + ["--trace", "--throttle-io"]) == ExitCode.OK
    trace = (tmp_path / "trace.tsv").read_text().splitlines()
    assert trace[0] == "t_ns\tseq\tevent\tlocation"
    assert any("input.stimulus" in line for line in trace)


def test_compile_artifacts(files, tmp_path):
    netlist, _ = files
    assert run(["compile", netlist, "--out", str(tmp_path)]) == ExitCode.OK
    summary = read_summary(tmp_path)
    assert summary["valid"] is True
    assert summary["neurons"] == 10 and summary["virtual"] == 4
    assert summary["memory_bits"]["provisioned"] == 848
    placement = (tmp_path / "placement.tsv").read_text().splitlines()
    assert len(placement) == 11
    assert (tmp_path / "image.mem").read_text().strip()
    validation = (tmp_path / "validation.tsv").read_text().splitlines()
    assert validation == ["kind\tsrc\tdst\tsyn\tcount"]


def test_trace_of_an_input_pixel(files, tmp_path):
    netlist, _ = files
    argv = ["trace", netlist, "inp[0]", "--out", str(tmp_path)]
    assert run(argv) == ExitCode.OK
    summary = read_summary(tmp_path)
    assert summary["neuron"] == "inp[0]"
    assert summary["delivered"] == 1 and summary["cam_matches"] == 8
    deliveries = (tmp_path / "deliveries.tsv").read_text().splitlines()
    assert len(deliveries) == 2


def test_trace_unknown_neuron(files, tmp_path):
    netlist, _ = files
    argv = ["trace", netlist, "hidden[8]", "--out", str(tmp_path)]
    assert run(argv) == ExitCode.CONFIG


@pytest.mark.parametrize(
    "argv",
    [["bogus"], ["simulate"], ["simulate", "no-such.net"], ["--nope"]],
)
def test_usage_errors(argv, tmp_path):
    assert run(argv + ["--out", str(tmp_path)]) == ExitCode.USAGE


def test_no_subcommand_prints_help(capsys):
    assert run([]) == ExitCode.OK
    assert "analyze-memory" in capsys.readouterr().out


def test_invalid_config(files, tmp_path, capsys):
    netlist, _ = files
    config = tmp_path / "bad.json"
    config.write_text(json.dumps({"dt_ms": -1}))
    argv = ["simulate", netlist, "--config", str(config)]
    assert run(argv + ["--out", str(tmp_path)]) == ExitCode.CONFIG
    assert "dt_ms" in capsys.readouterr().err


def test_malformed_netlist(tmp_path, capsys):
    netlist = tmp_path / "bad.net"
    netlist.write_text("population a 4\npopulation b\n")
    argv = ["compile", str(netlist), "--out", str(tmp_path)]
    assert run(argv) == ExitCode.PARSE
    assert "line 2" in capsys.readouterr().err


def test_network_too_large(tmp_path):
    netlist = tmp_path / "big.net"
    netlist.write_text("population a 2000\n")
    argv = ["compile", str(netlist), "--out", str(tmp_path)]
    assert run(argv) == ExitCode.COMPILE
