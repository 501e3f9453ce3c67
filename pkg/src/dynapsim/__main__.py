import argparse
import itertools
import json
import logging
import os
import re
import sys
from pathlib import Path
from typing import Dict, List, Sequence

import numpy as np

from .cli.aer import ingest_aer, write_aer
from .cli.demo import run_demo
from .cli.session import Session, aer_sources, poisson_events, raster_tsv
from .compiler.emit import emit_images
from .compiler.netlist import NetworkSpec, load_netlist
from .compiler.placement import place
from .compiler.validate import validate
from .config import CnnDemoConfig, GridConfig, SimConfig, load_config
from .errors import ConfigError, DynapError, ExitCode, SpecError
from .fabric.engine import Engine
from .memopt import (
    NetParams,
    analysis_table,
    fanin_capacity,
    mem_two_stage,
    r3_throughput,
    scaling_table,
)
from .packets.image import image_text

logger = logging.getLogger(__name__)

NEURON_REF = re.compile(r"(\w+)\[(\d+)\]")


def configure_logging():
    level = os.environ.get("DYNAPSIM_LOG", "WARNING").upper()
    if level not in ("DEBUG", "INFO", "WARNING", "ERROR"):
        level = "WARNING"
    logging.basicConfig(
        level=level,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )


def write_artifact(out: Path, name: str, text: str):
    out.mkdir(parents=True, exist_ok=True)
    (out / name).write_text(text)


def write_summary(out: Path, summary: Dict):
    text = json.dumps(summary, indent=2, sort_keys=True) + "\n"
    write_artifact(out, "summary.json", text)


def netlist_from_args(args) -> NetworkSpec:
    return load_netlist(Path(args.netlist).read_text())


def with_overrides[T: (SimConfig, CnnDemoConfig)](config: T, args) -> T:
    """Applies --seed and --throttle-io on top of the file values."""
    update: Dict = {}
    if args.seed is not None:
        update["seed"] = args.seed
    if getattr(args, "throttle_io", False):
        update["fabric"] = config.fabric.model_copy(
            update={"throttle_io": True}
        )
    return config.model_copy(update=update)


def sim_config_from_args(args) -> SimConfig:
    return with_overrides(load_config(args.config, SimConfig), args)


def exec_analyze_memory(args):
    grid = load_config(args.config, GridConfig)
    points = [
        NetParams(N=n, F=f, C=c, alpha=alpha, M=m)
        for n, f, c, alpha, m in itertools.product(
            grid.N, grid.F, grid.C, grid.alpha, grid.M or [None]
        )
    ]
    out = Path(args.out)
    table = analysis_table(points, grid.hardware_bits)
    write_artifact(out, "memory.tsv", table)
    rows = scaling_table(grid.scaling_sizes, grid.extra_bits)
    write_artifact(
        out,
        "scaling.tsv",
        "size\tbits_per_neuron\tbits_total\n"
        + "".join(
            f"{r.size}\t{r.bits_per_neuron:.4f}\t{r.bits_total:.6g}\n"
            for r in rows
        ),
    )
    reports = [mem_two_stage(p) for p in points]
    violations: List[str] = [str(v) for r in reports for v in r.violations]
    write_summary(
        out,
        {
            "rows": len(points),
            "infeasible": sum(not r.feasible for r in reports),
            "violations": violations,
            "fanin_capacity": {
                f"{rate:g}": fanin_capacity(rate) for rate in grid.rates_hz
            },
            "r3_throughput_mev": r3_throughput() / 1e6,
        },
    )


def exec_compile(args):
    config = sim_config_from_args(args)
    spec = netlist_from_args(args)
    placement = place(spec, config.fabric)
    image = emit_images(placement)
    report = validate(placement, spec)
    out = Path(args.out)
    write_artifact(out, "image.mem", image_text(image))
    write_artifact(out, "placement.tsv", placement.report())
    write_artifact(out, "validation.tsv", report.to_tsv())
    memory = report.memory
    write_summary(
        out,
        {
            "network": spec.name,
            "neurons": len(placement.sites),
            "virtual": len(placement.virtual),
            "cores": [list(key) for key in placement.cores_used],
            "connections": len(spec.connections),
            "valid": report.ok,
            "faults": report.faults,
            "memory_bits": None
            if memory is None
            else {
                "provisioned": memory.provisioned,
                "used_mean": memory.used_mean,
                "used_max": memory.used_max,
                "predicted": memory.predicted,
            },
        },
    )
    if not report.ok:
        print(report.to_tsv(), file=sys.stderr, end="")
        print("Compiled network does not realize its netlist", file=sys.stderr)
        return ExitCode.COMPILE


def stimulus_events(config: SimConfig, spec: NetworkSpec, base: Path | None):
    rng = np.random.default_rng(config.seed)
    events = []
    try:
        for source in config.stimuli:
            population = spec.population(source.population)
            if not population.virtual:
                raise ConfigError(
                    f"stimuli: population '{population.name}' is not virtual"
                )
            stop = min(source.stop_ms or config.duration_ms, config.duration_ms)
            events += poisson_events(
                population, source.rate_hz, source.start_ms, stop, rng
            )
        if (aer := config.aer) is not None:
            population = spec.population(aer.population)
            path = Path(aer.path)
            if base is not None and not path.is_absolute():
                path = base / path
            recorded = ingest_aer(path, aer.format, aer.width, aer.height)
            events += aer_sources(
                recorded, population, aer.width, aer.height, aer.polarity
            )
    except SpecError as e:
        raise ConfigError(str(e)) from e
    events.sort()
    return events


def exec_simulate(args):
    config = sim_config_from_args(args)
    spec = netlist_from_args(args)
    placement = place(spec, config.fabric)
    session = Session(
        placement,
        config.core_params,
        seed=config.seed,
        dt_ms=config.dt_ms,
        jitter_ns=config.jitter_ns,
        trace=args.trace,
    )
    base = Path(args.config).parent if args.config else None
    session.stimulate(stimulus_events(config, spec, base))
    stats = session.run(config.duration_ms)
    out = Path(args.out)
    write_artifact(out, "stats.tsv", stats.to_tsv())
    write_artifact(out, "raster.tsv", raster_tsv(session.raster, spec.label))
    if session.engine.trace is not None:
        write_artifact(
            out,
            "trace.tsv",
            "t_ns\tseq\tevent\tlocation\n"
            + "".join(line + "\n" for line in session.engine.trace),
        )
    write_summary(
        out,
        {
            "network": spec.name,
            "seed": config.seed,
            "duration_ms": config.duration_ms,
            "cores": [list(key) for key in placement.cores_used],
            "spikes": len(session.raster),
            "counters": stats.counters(),
            "energy_pj": round(stats.energy_pj, 3),
            "in_flight": stats.in_flight,
        },
    )


def exec_demo_cnn(args):
    config = with_overrides(load_config(args.config, CnnDemoConfig), args)
    report = run_demo(config)
    out = Path(args.out)
    write_artifact(out, "classification.tsv", report.classification_tsv())
    latency = report.latency_tsv(config.latency_bin_ms)
    write_artifact(out, "latency.tsv", latency)
    write_artifact(
        out,
        "readout.tsv",
        "class\tpool_neurons\n"
        + "".join(
            f"{c}\t{','.join(str(n) for n in chosen)}\n"
            for c, chosen in report.readout.items()
        ),
    )
    write_aer(out / "stream.csv", report.stream)
    write_summary(out, report.summary())
    print(
        f"accuracy {100 * report.accuracy:.1f}% over"
        f" {len(report.presentations)} presentations"
    )


def neuron_from_ref(spec: NetworkSpec, ref: str) -> int:
    if ref.isdecimal():
        neuron = int(ref)
        spec.population_of(neuron)
        return neuron
    if (match := NEURON_REF.fullmatch(ref)) is None:
        raise ConfigError(f"'{ref}' is neither a neuron id nor name[index]")
    population = spec.population(match.group(1))
    index = int(match.group(2))
    if index >= population.size:
        raise ConfigError(f"{population.name} has {population.size} neurons")
    return population.first + index


def exec_trace(args):
    config = sim_config_from_args(args)
    spec = netlist_from_args(args)
    placement = place(spec, config.fabric)
    neuron = neuron_from_ref(spec, args.neuron)
    engine = Engine(
        config.fabric,
        config.seed,
        config.jitter_ns,
        trace=True,
        record_deliveries=True,
    )
    engine.load_image(emit_images(placement))
    if neuron in placement.sites:
        site = placement.sites[neuron]
        engine.spike(0.0, site.chip, site.core, site.index)
    else:
        engine.inject_external(
            (0.0, s.chip, s.packet()) for s in placement.stimulus(neuron)
        )
    stats = engine.run()
    deliveries = engine.deliveries or []
    out = Path(args.out)
    write_artifact(
        out,
        "trace.tsv",
        "t_ns\tseq\tevent\tlocation\n"
        + "".join(line + "\n" for line in engine.trace or []),
    )
    write_artifact(
        out,
        "deliveries.tsv",
        "t_ns\tchip\tcore\ttag\tmatches\tlatency_ns\thops\n"
        + "".join(
            f"{d.t_ns:.3f}\t{d.chip}\t{d.core}\t{d.packet.tag}\t{d.matches}"
            f"\t{d.latency_ns:.3f}\t{d.hops}\n"
            for d in deliveries
        ),
    )
    write_summary(
        out,
        {
            "neuron": spec.label(neuron),
            "packets": stats.packets_emitted,
            "delivered": stats.packets_delivered,
            "faulted": stats.packets_faulted,
            "cam_matches": stats.cam_matches,
            "energy_pj": round(stats.energy_pj, 3),
        },
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dynapsim")
    subparsers = parser.add_subparsers()

    def add_common(sub, config_help: str):
        sub.add_argument("--config", help=config_help)
        sub.add_argument("--out", default="out", help="Artifact directory")

    analyze = subparsers.add_parser(
        "analyze-memory",
        help="Tabulate two-stage routing memory over a design grid",
    )
    analyze.set_defaults(func=exec_analyze_memory)
    add_common(analyze, "GridConfig JSON")

    for name, func, description in (
        ("compile", exec_compile, "Place a netlist and emit its memories"),
        ("simulate", exec_simulate, "Run a netlist on the fabric"),
        ("trace", exec_trace, "Follow one spike through the fabric"),
    ):
        sub = subparsers.add_parser(name, help=description)
        sub.set_defaults(func=func)
        sub.add_argument("netlist")
        if name == "trace":
            sub.add_argument("neuron", help="Neuron id or population[index]")
        add_common(sub, "SimConfig JSON")
        sub.add_argument("--seed", type=int)
        sub.add_argument("--throttle-io", action="store_true")
        if name == "simulate":
            sub.add_argument("--trace", action="store_true")

    demo = subparsers.add_parser(
        "demo-cnn", help="Train and test the card-suit CNN on the fabric"
    )
    demo.set_defaults(func=exec_demo_cnn)
    add_common(demo, "CnnDemoConfig JSON")
    demo.add_argument("--seed", type=int)
    demo.add_argument("--throttle-io", action="store_true")

    # Print help by default if no subcommand is provided
    parser.set_defaults(func=lambda _: parser.print_help())
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return ExitCode.USAGE if e.code else ExitCode.OK
    try:
        return int(args.func(args) or ExitCode.OK)
    except DynapError as e:
        print(e, file=sys.stderr)
        return int(e.exit_code)
    except FileNotFoundError as e:
        print(f"No such file: {e.filename}", file=sys.stderr)
        return ExitCode.USAGE
    except OSError as e:
        print(e, file=sys.stderr)
        return ExitCode.IO


def main():
    configure_logging()
    sys.exit(run())


if __name__ == "__main__":
    main()
