from .memory import CoreMemory, Match, cam_match
from .neuron import NeuronState, neuron_step
from .node import CoreNode, core_broadcast
from .params import CoreParams, NeuronParams, SynapseParams
from .synapse import SynapseState, apply_pulse, apply_pulses, dpi_step
