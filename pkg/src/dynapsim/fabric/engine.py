import dataclasses
import itertools
import logging
from dataclasses import dataclass
from typing import Dict, Iterable, List, Protocol, Tuple

import numpy as np

from .config import FabricConfig
from .events import (
    CoreBroadcast,
    Event,
    External,
    ExternalPayload,
    ProgramCam,
    ProgramSram,
    R1Dispatch,
    R2Arrive,
    R3Arrive,
    Spike,
)
from .queue import EventQueue
from .routers import (
    Direction,
    Port,
    R1Decision,
    R1State,
    ToCore,
    ToR3,
    neighbour,
    r1_dispatch,
    r1_emit,
    r2_route,
    r3_route,
)
from .stats import SimStats
from ..core.memory import CoreMemory, Match, cam_match
from ..errors import RoutingFault, SimulationError
from ..packets.image import MemoryImage, SlotAddress
from ..packets.words import Packet

logger = logging.getLogger(__name__)

type CoreKey = Tuple[int, int]


class CoreSink(Protocol):
    """Receiver of core broadcasts; owns the CAM the broadcast searches."""

    memory: CoreMemory

    def broadcast(
        self, tag: int, t_ns: float, stats: SimStats
    ) -> List[Match]: ...


class PassiveCore:
    """A core with CAM matching and no neural dynamics."""

    def __init__(self, memory: CoreMemory):
        self.memory = memory

    def broadcast(self, tag: int, t_ns: float, stats: SimStats) -> List[Match]:
        return cam_match(self.memory, tag, stats)


@dataclass(frozen=True)
class Delivery:
    t_ns: float
    chip: int
    core: int
    packet: Packet
    matches: int
    latency_ns: float
    hops: int


class Engine:
    """Single-threaded discrete-event model of the R1/R2/R3 fabric.

    Times are in ns. Events pop in (time, seq) order, so a rerun with the
    same config, seed and inputs produces the same trace.
    """

    def __init__(
        self,
        config: FabricConfig,
        seed: int = 0,
        jitter_ns: float = 0.0,
        trace: bool = False,
        record_deliveries: bool = False,
        cores: Dict[CoreKey, CoreSink] | None = None,
    ):
        self.config = config
        self.latency = config.latency
        self.stats = SimStats(config.energy_table())
        self.queue: EventQueue[Event] = EventQueue()
        self.rng = np.random.default_rng(seed)
        self.jitter_ns = jitter_ns
        self.trace: List[str] | None = [] if trace else None
        self.deliveries: List[Delivery] | None = (
            [] if record_deliveries else None
        )
        self._seq = itertools.count()
        self._born: Dict[int, float] = {}
        self._hops: Dict[int, int] = {}
        self._input_free = 0.0
        self._output_free: Dict[int, float] = {}
        self._busy: Dict[Tuple, float] = {}
        keys = [
            (chip, core)
            for chip in range(config.chip_count)
            for core in range(config.cores_per_chip)
        ]
        self.r1: Dict[CoreKey, R1State] = {
            key: R1State(config.neurons_per_core, config.sram_slots)
            for key in keys
        }
        if cores is None:
            cores = {
                key: PassiveCore(
                    CoreMemory(config.neurons_per_core, config.cam_slots)
                )
                for key in keys
            }
        self.cores: Dict[CoreKey, CoreSink] = cores

    @property
    def now(self) -> float:
        return self.queue.now

    def next_seq(self) -> int:
        return next(self._seq)

    # Memory programming outside simulated time.
    def load_image(self, image: MemoryImage):
        for address, word in image.sram.items():
            self._core_r1(address).write(address.neuron, address.slot, word)
        for address, entry in image.cam.items():
            self._core_cam(address).write(address.neuron, address.slot, entry)

    def memory_image(self) -> MemoryImage:
        image = MemoryImage()
        for (chip, core), state in self.r1.items():
            for neuron, slot, word in state.programmed():
                image.write_sram(SlotAddress(chip, core, neuron, slot), word)
        for (chip, core), sink in self.cores.items():
            for neuron, slot, entry in sink.memory.entries():
                image.write_cam(SlotAddress(chip, core, neuron, slot), entry)
        return image

    def _core_r1(self, address: SlotAddress) -> R1State:
        if (key := (address.chip, address.core)) not in self.r1:
            raise SimulationError(f"no core at {address}")
        return self.r1[key]

    def _core_cam(self, address: SlotAddress) -> CoreMemory:
        if (key := (address.chip, address.core)) not in self.cores:
            raise SimulationError(f"no core at {address}")
        return self.cores[key].memory

    # Inputs.
    def spike(self, t_ns: float, chip: int, core: int, neuron: int):
        self.queue.push(t_ns, self.next_seq(), Spike(chip, core, neuron))

    def inject_external(
        self, events: Iterable[Tuple[float, int, ExternalPayload]]
    ):
        for t_ns, chip, payload in events:
            if isinstance(payload, Packet):
                payload = dataclasses.replace(payload, seq=self.next_seq())
                seq = payload.seq
            else:
                seq = self.next_seq()
            self.queue.push(t_ns, seq, External(chip, payload))

    # Event loop.
    def step(self) -> Event | None:
        if not len(self.queue):
            return None
        t, seq, event = self.queue.pop()
        match event:
            case Spike():
                self._on_spike(t, event)
            case R1Dispatch():
                self._on_r1(t, event)
            case R2Arrive():
                self._on_r2(t, event)
            case R3Arrive():
                self._on_r3(t, event)
            case CoreBroadcast():
                self._on_broadcast(t, event)
            case External():
                self._on_external(t, seq, event)
        return event

    def run_until(self, t_end: float) -> SimStats:
        if t_end < self.now:
            raise SimulationError(
                f"run_until({t_end}) is before the current time {self.now}"
            )
        while (t := self.queue.peek_time()) is not None and t <= t_end:
            self.step()
        self.queue.advance(t_end)
        return self.stats.snapshot()

    def run(self) -> SimStats:
        while self.step() is not None:
            pass
        return self.stats.snapshot()

    # Helpers.
    def _delay(self, base: float) -> float:
        if self.jitter_ns > 0:
            return base + float(self.rng.uniform(0.0, self.jitter_ns))
        return base

    def _serialize(self, resource: Tuple, t: float, service: float) -> float:
        if not self.config.congestion:
            return t
        start = max(t, self._busy.get(resource, 0.0))
        self._busy[resource] = start + service
        return start

    def _slots(self, program: ProgramSram | ProgramCam) -> int:
        if isinstance(program, ProgramSram):
            return self.config.sram_slots
        return self.config.cam_slots

    def _log(self, t: float, seq: int, event: str, location: str):
        if self.trace is not None:
            self.trace.append(f"{t:.3f}\t{seq}\t{event}\t{location}")

    def _fault(self, t: float, p: Packet, where: str, fault: RoutingFault):
        self.stats.packets_faulted += 1
        self._born.pop(p.seq, None)
        self._hops.pop(p.seq, None)
        logger.warning("routing fault at %s: %s", where, fault)
        self._log(t, p.seq, "fault", where)

    def _schedule_broadcast(self, t: float, chip: int, core: int, p: Packet):
        start = self._serialize(
            ("broadcast", chip, core), t, self.latency.broadcast
        )
        t_done = self._delay(start + self.latency.broadcast)
        self.queue.push(t_done, p.seq, CoreBroadcast(chip, core, p))

    # Handlers.
    def _on_spike(self, t: float, e: Spike):
        self.stats.events_injected += 1
        self.stats.spikes += 1
        state = self.r1[(e.chip, e.core)]
        src = (e.chip, e.core, e.neuron)
        packets = r1_emit(state, e.neuron, self.next_seq, src)
        where = f"chip{e.chip}.core{e.core}.n{e.neuron}"
        if not packets:
            self.stats.dropped_at_source += 1
            logger.debug("spike from %s has no routing words", where)
            self._log(t, -1, "drop_at_source", where)
            return
        self.stats.encoded_spikes += 1
        self.stats.packets_emitted += len(packets)
        # The loop reads one SRAM word per pass before the packet leaves R1.
        start = self._serialize(
            ("r1", e.chip, e.core), t, self.latency.r1_loop_read * len(packets)
        )
        for i, p in enumerate(packets):
            self._born[p.seq] = t
            t_read = self._delay(start + self.latency.r1_loop_read * (i + 1))
            self._log(t_read, p.seq, "r1.read", where)
            self.queue.push(t_read, p.seq, R1Dispatch(e.chip, e.core, p))

    def _on_r1(self, t: float, e: R1Dispatch):
        where = f"chip{e.chip}.core{e.core}"
        match r1_dispatch(e.packet, e.core):
            case R1Decision.BroadcastLocal:
                self._log(t, e.packet.seq, "r1.broadcast_local", where)
                self._schedule_broadcast(t, e.chip, e.core, e.packet)
            case R1Decision.ToR2:
                self.stats.cross_core += 1
                self._log(t, e.packet.seq, "r1.to_r2", where)
                self.queue.push(
                    t, e.packet.seq, R2Arrive(e.chip, e.packet, Direction.Up)
                )

    def _on_r2(self, t: float, e: R2Arrive):
        where = f"chip{e.chip}.r2.{e.direction.value}"
        p = e.packet
        try:
            decision = r2_route(p, e.direction, self.config.cores_per_chip)
        except RoutingFault as fault:
            self._fault(t, p, where, fault)
            return
        t_out = self._delay(t + self.latency.r2_hop)
        match decision:
            case ToR3():
                self._log(t, p.seq, "r2.to_r3", where)
                self.queue.push(t_out, p.seq, R3Arrive(e.chip, p, Port.Local))
            case ToCore(core=core):
                self._log(t, p.seq, f"r2.to_core{core}", where)
                self._schedule_broadcast(t_out, e.chip, core, p)

    def _on_r3(self, t: float, e: R3Arrive):
        where = f"chip{e.chip}.r3.{e.port.value}"
        at = self.config.chip_xy(e.chip)
        try:
            exit_port, p = r3_route(e.packet, e.port, at, self.config.grid)
        except RoutingFault as fault:
            self._fault(t, e.packet, where, fault)
            return
        t_out = t + self.latency.r3_hop
        if exit_port == Port.Local:
            self._log(t, p.seq, "r3.to_r2", where)
            self.queue.push(
                self._delay(t_out), p.seq, R2Arrive(e.chip, p, Direction.Down)
            )
            return
        self.stats.r3_hops += 1
        self._hops[p.seq] = self._hops.get(p.seq, 0) + 1
        if e.port == Port.Local:
            self.stats.cross_chip += 1
        t_out = self._serialize(
            ("r3", e.chip, exit_port), t_out, self.latency.r3_hop
        )
        if self.config.throttle_io:
            t_out = max(t_out, self._output_free.get(e.chip, 0.0))
            gap = 1e3 / self.config.output_rate_mev
            self._output_free[e.chip] = t_out + gap
        self._log(t, p.seq, f"r3.exit_{exit_port.value}", where)
        x, y = neighbour(at, exit_port)
        arrival = R3Arrive(self.config.chip_index(x, y), p, exit_port.opposite)
        self.queue.push(
            self._delay(t_out + self.latency.chip_traverse), p.seq, arrival
        )

    def _on_broadcast(self, t: float, e: CoreBroadcast):
        matches = self.cores[(e.chip, e.core)].broadcast(
            e.packet.tag, t, self.stats
        )
        self.stats.packets_delivered += 1
        latency = t - self._born.pop(e.packet.seq, t)
        hops = self._hops.pop(e.packet.seq, 0)
        self.stats.record_latency(latency)
        self._log(
            t,
            e.packet.seq,
            f"broadcast.tag{e.packet.tag}.matches{len(matches)}",
            f"chip{e.chip}.core{e.core}",
        )
        if self.deliveries is not None:
            self.deliveries.append(
                Delivery(
                    t, e.chip, e.core, e.packet, len(matches), latency, hops
                )
            )

    def _on_external(self, t: float, seq: int, e: External):
        if self.config.throttle_io and not e.admitted:
            start = max(t, self._input_free)
            self._input_free = start + 1e3 / self.config.input_rate_mev
            if start > t:
                admitted = dataclasses.replace(e, admitted=True)
                self.queue.push(start, seq, admitted)
                return
        self.stats.events_injected += 1
        chip = e.chip
        match e.payload:
            case Packet() as p:
                self.stats.packets_emitted += 1
                self._born[p.seq] = t
                if not self.config.has_chip(chip):
                    if not self.config.forward_misaddressed:
                        self.stats.packets_dropped += 1
                        self._born.pop(p.seq)
                        logger.warning(
                            "dropped stimulus for missing chip %d", chip
                        )
                        self._log(t, p.seq, "input.drop", f"chip{chip}")
                        return
                    chip = self.config.entry_chip
                self._log(t, p.seq, "input.stimulus", f"chip{chip}")
                if p.at_destination_chip:
                    self.queue.push(t, p.seq, R2Arrive(chip, p, Direction.Down))
                else:
                    self.queue.push(t, p.seq, R3Arrive(chip, p, Port.Local))
            case ProgramSram() | ProgramCam() as program:
                address = SlotAddress(
                    chip, program.core, program.neuron, program.slot
                )
                in_range = (
                    (chip, program.core) in self.r1
                    and 0 <= program.neuron < self.config.neurons_per_core
                    and 0 <= program.slot < self._slots(program)
                )
                if not in_range:
                    self.stats.programming_dropped += 1
                    logger.warning("dropped programming event for %s", address)
                    self._log(t, seq, "input.program_drop", str(address))
                    return
                self.stats.programming_writes += 1
                self._log(t, seq, "input.program", str(address))
                match program:
                    case ProgramSram(word=word):
                        self._core_r1(address).write(
                            program.neuron, program.slot, word
                        )
                    case ProgramCam(entry=entry):
                        self._core_cam(address).write(
                            program.neuron, program.slot, entry
                        )
