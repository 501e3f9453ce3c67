import heapq
import itertools
from typing import List, Sequence, Tuple

import numpy as np

from .params import CoreParams
from ..errors import ConfigError, SimulationError
from ..packets.words import SynType

N_TYPES = len(SynType)

# (time, sequence, neurons, synapse types, +1 rise or -1 fall)
type Edge = Tuple[float, int, np.ndarray, np.ndarray, int]


class SynapseState:
    """Four first-order DPI accumulators per neuron, times in ms.

    The input of each accumulator is the sum of active rectangular pulses.
    Both edges of a pulse wait on one heap until the step that contains
    them. An edge of height h at time te contributes
    h*(1 - exp(-(t1 - te)/tau)) at step end t1, kept as the pair
    (sum h, sum h*exp((te - t0)/tau)).
    """

    def __init__(
        self,
        neurons: int,
        tau: Sequence[float],
        weight: Sequence[float],
        pulse: Sequence[float],
        t0: float = 0.0,
    ):
        self.tau = np.asarray(tau, dtype=float)
        self.weight = np.asarray(weight, dtype=float)
        self.pulse = np.asarray(pulse, dtype=float)
        for name, values in (("tau", self.tau), ("pulse", self.pulse)):
            if values.shape != (N_TYPES,) or np.any(values <= 0):
                raise ConfigError(f"{name} must be {N_TYPES} positive values")
        if self.weight.shape != (N_TYPES,) or np.any(self.weight < 0):
            raise ConfigError(f"weight must be {N_TYPES} non-negative values")
        self.t = t0
        self.I = np.zeros((neurons, N_TYPES))
        self.u = np.zeros((neurons, N_TYPES))
        self._rise = np.zeros((neurons, N_TYPES))
        self._weighted = np.zeros((neurons, N_TYPES))
        self._pending: List[Edge] = []
        self._count = itertools.count()

    @staticmethod
    def from_params(neurons: int, params: CoreParams, t0=0.0) -> "SynapseState":
        tau, weight, pulse = params.synapse_table()
        return SynapseState(neurons, tau, weight, pulse, t0)

    @property
    def neurons(self) -> int:
        return self.I.shape[0]

    def _schedule(
        self, te: float, neurons: np.ndarray, syn: np.ndarray, sign: int
    ):
        entry = (te, next(self._count), neurons, syn, sign)
        heapq.heappush(self._pending, entry)

    def _edges(self, neurons: np.ndarray, syn: np.ndarray, h, t: float):
        scale = np.exp((t - self.t) / self.tau[syn])
        np.add.at(self._rise, (neurons, syn), h)
        np.add.at(self._weighted, (neurons, syn), h * scale)


def apply_pulse(
    s: SynapseState, neuron: int, syn: SynType, t: float
) -> SynapseState:
    return apply_pulses(s, np.array([neuron]), np.array([int(syn)]), t)


def apply_pulses(
    s: SynapseState, neurons: np.ndarray, syn: np.ndarray, t: float
) -> SynapseState:
    """Starts one pulse of height weight[syn] per (neuron, syn) pair at t."""
    if len(neurons) == 0:
        return s
    # Pulses in the past start at the beginning of the current step.
    t = max(t, s.t)
    s._schedule(t, neurons, syn, 1)
    for kind in np.unique(syn):
        mask = syn == kind
        end = t + float(s.pulse[kind])
        s._schedule(end, neurons[mask], syn[mask], -1)
    return s


def dpi_step(s: SynapseState, dt: float) -> np.ndarray:
    """Advances every accumulator by dt and returns the currents I."""
    if not dt > 0:
        raise SimulationError(f"dt must be positive, got {dt}")
    t1 = s.t + dt
    while s._pending and s._pending[0][0] <= t1:
        te, _, neurons, syn, sign = heapq.heappop(s._pending)
        s._edges(neurons, syn, sign * s.weight[syn], te)
    decay = np.exp(-dt / s.tau)
    s.I = s.I * decay + s.u * (1 - decay) + s._rise - s._weighted * decay
    s.u += s._rise
    # Pulse edges cancel exactly in real arithmetic; clear rounding residue.
    np.maximum(s.u, 0.0, out=s.u)
    np.maximum(s.I, 0.0, out=s.I)
    s._rise.fill(0.0)
    s._weighted.fill(0.0)
    s.t = t1
    return s.I
