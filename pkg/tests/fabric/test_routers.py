import itertools
import random

import pytest

from dynapsim.errors import RoutingFault
from dynapsim.fabric.routers import (
    Direction,
    Port,
    R1Decision,
    R1State,
    ToCore,
    ToR3,
    r1_dispatch,
    r1_emit,
    r2_route,
    r3_route,
    route_word,
)
from dynapsim.packets.words import Packet, RoutingWord


def packet(**fields) -> Packet:
    return Packet.from_word(RoutingWord(**fields), 0, 0)


def test_r1_emit_single_word():
    state = R1State()
    state.write(3, 0, RoutingWord(tag=5))
    (p,) = r1_emit(state, 3, itertools.count().__next__, (0, 0, 3))
    assert p.fanout_hdr == 0
    assert p.tag == 5 and p.src == (0, 0, 3)


def test_r1_emit_four_words_in_slot_order():
    state = R1State()
    for slot in (2, 0, 3, 1):
        state.write(0, slot, RoutingWord(tag=10 + slot, core_id=slot))
    packets = r1_emit(state, 0, itertools.count().__next__)
    assert [p.tag for p in packets] == [10, 11, 12, 13]
    assert [p.fanout_hdr for p in packets] == [3, 2, 1, 0]
    assert [p.seq for p in packets] == [0, 1, 2, 3]


def test_r1_emit_no_words():
    assert r1_emit(R1State(), 0, itertools.count().__next__) == []


def test_r1_emit_random_images():
    rng = random.Random(1)
    seq = itertools.count().__next__
    state = R1State(neurons=1)
    for _ in range(10_000):
        valid = 0
        for slot in range(4):
            if rng.random() < 0.5:
                state.write(0, slot, RoutingWord(tag=rng.randrange(1024)))
                valid += 1
            else:
                state.write(0, slot, None)
        packets = r1_emit(state, 0, seq)
        assert len(packets) == valid
        assert [p.fanout_hdr for p in packets] == list(range(valid))[::-1]


def test_r1_state_slot_limit():
    with pytest.raises(ValueError):
        R1State(slots=5)


def test_r1_dispatch():
    assert r1_dispatch(packet(core_id=1), 1) == R1Decision.BroadcastLocal
    assert r1_dispatch(packet(core_id=2), 1) == R1Decision.ToR2
    assert r1_dispatch(packet(core_id=1, dx=2), 1) == R1Decision.ToR2
    assert r1_dispatch(packet(core_id=1, dy=1), 1) == R1Decision.ToR2


def test_r2_route():
    assert r2_route(packet(core_id=2), Direction.Up) == ToCore(2)
    assert r2_route(packet(dx=1), Direction.Up) == ToR3()
    assert r2_route(packet(core_id=3), Direction.Down) == ToCore(3)
    with pytest.raises(RoutingFault):
        r2_route(packet(core_id=4), Direction.Up)
    with pytest.raises(RoutingFault):
        r2_route(packet(core_id=9), Direction.Down, cores_per_chip=8)


def test_r3_route_local():
    exit_port, p = r3_route(packet(), Port.Local)
    assert exit_port == Port.Local
    assert r3_route(packet(), Port.S)[0] == Port.Local


def test_r3_route_x_before_y():
    exit_port, p = r3_route(packet(dx=2, dy=1), Port.Local)
    assert exit_port == Port.E
    assert (p.dx, p.dy) == (1, 1)
    exit_port, p = r3_route(packet(dx=1, dy=1, sx=1), Port.E)
    assert exit_port == Port.W
    exit_port, p = r3_route(p, Port.E)
    assert exit_port == Port.N
    assert (p.dx, p.dy) == (0, 0)


def test_r3_route_vertical_arrival_ignores_dx():
    exit_port, p = r3_route(packet(dx=2, dy=1, sy=1), Port.N)
    assert exit_port == Port.S
    assert p.dx == 2
    exit_port, p = r3_route(packet(dx=2), Port.S)
    assert exit_port == Port.Local


def test_r3_route_boundary():
    with pytest.raises(RoutingFault):
        r3_route(packet(dx=1, sx=1), Port.Local, at=(0, 0), grid=(2, 2))
    with pytest.raises(RoutingFault):
        r3_route(packet(dy=1), Port.Local, at=(1, 1), grid=(2, 2))
    assert r3_route(packet(dy=1), Port.Local, (1, 0), (2, 2))[0] == Port.N


def test_port_opposite():
    assert Port.E.opposite == Port.W
    assert Port.N.opposite == Port.S
    assert Port.Local.opposite == Port.Local


@pytest.mark.parametrize("start", [(0, 0), (1, 2), (3, 3)])
def test_route_word_path_walk(start):
    grid = (4, 4)
    for dx, dy, sx, sy in itertools.product(range(4), range(4), (0, 1), (0, 1)):
        word = RoutingWord(tag=1, core_id=2, dx=dx, dy=dy, sx=sx, sy=sy)
        target = (
            start[0] + (-dx if sx else dx),
            start[1] + (-dy if sy else dy),
        )
        inside = 0 <= target[0] < 4 and 0 <= target[1] < 4
        if inside:
            assert route_word(word, start, 0, grid) == (target, 2, dx + dy)
        else:
            with pytest.raises(RoutingFault):
                route_word(word, start, 0, grid)


def test_route_word_local_broadcast():
    word = RoutingWord(core_id=1)
    assert route_word(word, (2, 2), 1, (4, 4)) == ((2, 2), 1, 0)
