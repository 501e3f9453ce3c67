import heapq
import itertools
from typing import List, Tuple

from ..errors import SimulationError


class EventQueue[T]:
    """Pending events ordered by (time, seq); insertion order breaks ties.

    Pops are non-decreasing in time, so two runs that push the same events
    pop them in the same order.
    """

    def __init__(self):
        self._heap: List[Tuple[float, int, int, T]] = []
        self._inserted = itertools.count()
        self.now: float = 0.0

    def __len__(self) -> int:
        return len(self._heap)

    def push(self, time: float, seq: int, event: T):
        if time < self.now:
            raise SimulationError(
                f"event at {time} ns is in the past (now={self.now} ns)"
            )
        heapq.heappush(self._heap, (time, seq, next(self._inserted), event))

    def peek_time(self) -> float | None:
        return self._heap[0][0] if self._heap else None

    def pop(self) -> Tuple[float, int, T]:
        if not self._heap:
            raise SimulationError("pop from an empty event queue")
        time, seq, _, event = heapq.heappop(self._heap)
        self.now = time
        return time, seq, event

    def advance(self, time: float):
        if time < self.now:
            raise SimulationError(f"cannot move clock back to {time} ns")
        self.now = time
