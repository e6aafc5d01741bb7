"""Spike-coding network simulator with quantized recurrent plasticity.

Two models of the same learning rule: an ideal real-valued network whose
recurrent weights move in fixed quanta whenever a spike's arrival would leave
the membrane further from rest than a one-step correction, and a behavioral
model of a mixed-signal synapse datapath (pulse extender, decision latch,
saturating 7-bit counter, current DAC, first-order filters) implementing the
same rule in the current domain.
"""

from .core import (
    DecoderMatrix,
    NetworkParams,
    NetworkState,
    RecurrentMatrix,
    SpikeEvent,
    TrainResult,
    decode,
    initial_state,
    learn_on_spike,
    membrane,
    optimal_recurrent,
    params_for_decoder,
    quantize_weights,
    random_decoder,
    step,
    train,
    update_direction,
)
from .errors import ConfigurationError, SimulationDiverged
from .hwmodel import (
    CODE_MAX,
    CODE_MIN,
    HwParams,
    NeuronHw,
    RuleDecision,
    SynapseCell,
    TraceLog,
    TraceSummary,
    dac_convert,
    dpi_step,
    evaluate_rule_current,
    extend_pulse,
    neuron_step,
    on_falling_edge,
    on_rising_edge,
    run_single_synapse,
    run_two_synapse,
    summarize_trace,
    trace_to_csv,
)
from .metrics import MetricsRow, frobenius_distance, mean_rate, metrics_to_csv, rmse
from .signals import (
    Signal,
    SpikeTrain,
    gaussian_smooth,
    regular_spike_train,
    signal_to_csv,
    smoothed_noise,
)

__version__ = "0.1.0"

__all__ = [
    "CODE_MAX",
    "CODE_MIN",
    "ConfigurationError",
    "DecoderMatrix",
    "HwParams",
    "MetricsRow",
    "NetworkParams",
    "NetworkState",
    "NeuronHw",
    "RecurrentMatrix",
    "RuleDecision",
    "Signal",
    "SimulationDiverged",
    "SpikeEvent",
    "SpikeTrain",
    "SynapseCell",
    "TraceLog",
    "TraceSummary",
    "TrainResult",
    "dac_convert",
    "decode",
    "dpi_step",
    "evaluate_rule_current",
    "extend_pulse",
    "frobenius_distance",
    "gaussian_smooth",
    "initial_state",
    "learn_on_spike",
    "mean_rate",
    "membrane",
    "metrics_to_csv",
    "neuron_step",
    "on_falling_edge",
    "on_rising_edge",
    "optimal_recurrent",
    "params_for_decoder",
    "quantize_weights",
    "random_decoder",
    "regular_spike_train",
    "rmse",
    "run_single_synapse",
    "run_two_synapse",
    "signal_to_csv",
    "smoothed_noise",
    "step",
    "summarize_trace",
    "trace_to_csv",
    "train",
    "update_direction",
]
