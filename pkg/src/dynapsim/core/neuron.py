from dataclasses import dataclass

import numpy as np

from .params import NeuronParams
from ..errors import NumericalFault, SimulationError

# Parameters that scale with transistor mismatch.
MISMATCHED = ("C_mem", "g_L", "tau_w", "delta_T")


@dataclass
class NeuronState:
    """AdEx state and per-neuron parameters of one core (mV, pA, ms)."""

    V: np.ndarray
    w: np.ndarray
    refractory_until: np.ndarray
    C_mem: np.ndarray
    g_L: np.ndarray
    E_L: np.ndarray
    V_T: np.ndarray
    delta_T: np.ndarray
    a: np.ndarray
    b: np.ndarray
    tau_w: np.ndarray
    V_reset: np.ndarray
    V_cut: np.ndarray
    t_ref: np.ndarray

    @staticmethod
    def from_params(
        params: NeuronParams, n: int, rng: np.random.Generator | None = None
    ) -> "NeuronState":
        values = {}
        for name in (
            "C_mem g_L E_L V_T delta_T a b tau_w V_reset V_cut t_ref".split()
        ):
            values[name] = np.full(n, float(getattr(params, name)))
        if params.mismatch > 0:
            rng = rng or np.random.default_rng(0)
            for name in MISMATCHED:
                values[name] *= rng.lognormal(0.0, params.mismatch, n)
        return NeuronState(
            V=values["E_L"].copy(),
            w=np.zeros(n),
            refractory_until=np.full(n, -np.inf),
            **values,
        )

    @property
    def size(self) -> int:
        return self.V.shape[0]

    @property
    def threshold(self) -> np.ndarray:
        return np.where(self.delta_T > 0, self.V_cut, self.V_T)


def neuron_step(
    n: NeuronState,
    I_syn_fast,
    I_syn_slow,
    I_inh_sub,
    g_shunt,
    dt: float,
    t: float = 0.0,
) -> np.ndarray:
    """Advances every neuron from t to t + dt; returns the spike mask.

    Inputs are held over the step. The membrane equation is linear in V
    apart from the exponential term, which is frozen at its start-of-step
    value, so both V and w use exact exponential updates.
    """
    if not dt > 0:
        raise SimulationError(f"dt must be positive, got {dt}")
    # Tolerance keeps float drift in t from adding a step of refractoriness.
    active = t >= n.refractory_until - 1e-9
    g_total = n.g_L + g_shunt
    exponential = np.zeros_like(n.V)
    adex = n.delta_T > 0
    exponential[adex] = (
        n.g_L[adex]
        * n.delta_T[adex]
        * np.exp((n.V[adex] - n.V_T[adex]) / n.delta_T[adex])
    )
    drive = I_syn_fast + I_syn_slow - I_inh_sub - n.w + exponential
    V_inf = n.E_L + drive / g_total
    V = V_inf + (n.V - V_inf) * np.exp(-dt * g_total / n.C_mem)
    w_inf = n.a * (n.V - n.E_L)
    n.w = w_inf + (n.w - w_inf) * np.exp(-dt / n.tau_w)
    n.V = np.where(active, V, n.V_reset)
    if not (np.all(np.isfinite(n.V)) and np.all(np.isfinite(n.w))):
        bad = np.flatnonzero(~(np.isfinite(n.V) & np.isfinite(n.w)))
        raise NumericalFault(
            f"non-finite neuron state at t={t} ms"
            f" for neurons {bad[:8].tolist()}"
        )
    spiked = active & (n.V >= n.threshold)
    n.V[spiked] = n.V_reset[spiked]
    n.w[spiked] += n.b[spiked]
    n.refractory_until[spiked] = t + dt + n.t_ref[spiked]
    return spiked
