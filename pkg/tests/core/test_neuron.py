import math

import numpy as np
import pytest

from dynapsim.core.neuron import NeuronState, neuron_step
from dynapsim.core.params import NeuronParams
from dynapsim.errors import NumericalFault

LIF = NeuronParams(delta_T=0.0, t_ref=2.0)


def simulate(params, n, dt, steps, I_fast=0.0, I_sub=0.0, g_shunt=0.0):
    neurons = NeuronState.from_params(params, n)
    zeros = np.zeros(n)
    spikes = []
    for k in range(steps):
        fired = neuron_step(
            neurons, I_fast + zeros, zeros, I_sub + zeros, g_shunt + zeros,
            dt, k * dt,
        )
        spikes.extend(((k + 1) * dt, i) for i in np.flatnonzero(fired))
    return neurons, spikes


def counts(spikes, n):
    result = np.zeros(n, dtype=int)
    for _, i in spikes:
        result[i] += 1
    return result


def test_rest_is_a_fixed_point():
    neurons, spikes = simulate(NeuronParams(), 1, 0.1, 10000)
    assert spikes == []
    V = neurons.V.copy()
    zero = np.zeros(1)
    neuron_step(neurons, zero, zero, zero, zero, 0.1, 1000.0)
    assert neurons.V[0] == pytest.approx(V[0], abs=1e-9)
    assert abs(neurons.V[0] - (-70.0)) < 1e-3


def test_lif_interspike_interval():
    # tau_m = 20 ms, V_inf = -40 mV, so the ramp takes 20 ln 3 ms.
    _, spikes = simulate(LIF, 1, 0.1, 3000, I_fast=300.0)
    times = np.array([t for t, _ in spikes])
    intervals = np.diff(times)
    expected = 20.0 * math.log(3.0) + 2.0
    assert len(intervals) > 5
    assert np.allclose(intervals, expected, rtol=0.01)
    assert times[0] == pytest.approx(20.0 * math.log(3.0), rel=0.01)


def test_firing_rate_rises_with_input():
    currents = np.linspace(0.0, 1000.0, 21)
    neurons = NeuronState.from_params(NeuronParams(), currents.size)
    zero = np.zeros(currents.size)
    total = np.zeros(currents.size, dtype=int)
    for k in range(5000):
        total += neuron_step(neurons, currents, zero, zero, zero, 0.1, k * 0.1)
    assert total[0] == 0
    assert total[-1] > 0
    assert np.all(np.diff(total) >= 0)


@pytest.mark.parametrize("kind", ["sub", "shunt"])
def test_inhibition_lowers_firing(kind):
    levels = np.linspace(0.0, 300.0 if kind == "sub" else 20.0, 11)
    n = levels.size
    neurons = NeuronState.from_params(NeuronParams(), n)
    zero = np.zeros(n)
    drive = np.full(n, 600.0)
    sub = levels if kind == "sub" else zero
    shunt = levels if kind == "shunt" else zero
    total = np.zeros(n, dtype=int)
    for k in range(5000):
        total += neuron_step(neurons, drive, zero, sub, shunt, 0.1, k * 0.1)
    assert total[0] > total[-1]
    assert np.all(np.diff(total) <= 0)


def test_refractory_period_is_never_violated():
    params = NeuronParams(t_ref=2.0)
    n = 1000
    rng = np.random.default_rng(5)
    current = rng.uniform(1000.0, 20000.0, n)
    neurons = NeuronState.from_params(params, n)
    zero = np.zeros(n)
    last = np.full(n, -np.inf)
    spikes = 0
    k = 0
    while spikes < 100_000:
        fired = neuron_step(neurons, current, zero, zero, zero, 0.1, k * 0.1)
        k += 1
        t = k * 0.1
        assert np.all(t - last[fired] >= 2.0)
        last[fired] = t
        spikes += int(fired.sum())


def test_adaptation_lengthens_intervals():
    params = NeuronParams(a=2.0, b=60.0, tau_w=100.0)
    _, spikes = simulate(params, 1, 0.1, 5000, I_fast=800.0)
    intervals = np.diff([t for t, _ in spikes])
    assert intervals[-1] > intervals[0]


def test_mismatch_spreads_parameters_reproducibly():
    params = NeuronParams(mismatch=0.1)
    a = NeuronState.from_params(params, 50, np.random.default_rng(3))
    b = NeuronState.from_params(params, 50, np.random.default_rng(3))
    assert np.array_equal(a.C_mem, b.C_mem)
    assert a.C_mem.std() > 0
    assert np.all(a.E_L == -70.0)
    assert NeuronState.from_params(NeuronParams(), 5).C_mem.std() == 0


def test_non_finite_state_faults():
    neurons = NeuronState.from_params(NeuronParams(), 3)
    neurons.w[1] = np.nan
    zero = np.zeros(3)
    with pytest.raises(NumericalFault):
        neuron_step(neurons, zero, zero, zero, zero, 0.1)
