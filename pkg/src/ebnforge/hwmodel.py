"""Behavioral model of a mixed-signal plastic synapse and its learning datapath.

One synapse cell holds a signed 7-bit weight code, a retriggerable pulse
extender, a 2-bit decision latch, and a pair of first-order (DPI-style)
current filters fed by a sign-routed current-steering DAC. On each input
pulse's rising edge the cell compares the neuron's membrane current against a
resting level (current-mode version of the discrete rule) and latches the
verdict; on the falling edge a saturating counter commits the +-1 weight step.
The neuron itself is a first-order current integrator clamped at zero.

All filter and membrane updates are exact exponential steps, so the traces
are insensitive to dt for piecewise-constant drives.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import IntEnum

import numpy as np

from .errors import ConfigurationError

CODE_MIN = -64
CODE_MAX = 63


class RuleDecision(IntEnum):
    """Outcome of one rule evaluation; numeric values match the weight step."""

    DECREMENT = -1
    HOLD = 0
    INCREMENT = 1


@dataclass(frozen=True)
class HwParams:
    """Circuit-scale constants.

    i_rest is the membrane set point, i_reset the post-reset level the neuron
    relaxes to, i_sl the stop-learning margin around the rule's decision
    boundaries, i_unit the DAC current per code step. gain couples the summed
    DPI outputs into the neuron. i_leak_target is the unstimulated membrane
    equilibrium; None means i_reset. Traces report the tolerance band
    i_rest +- 2*i_sl.
    """

    i_rest: float = 5e-8
    i_reset: float = 5e-9
    i_sl: float = 5e-9
    i_unit: float = 1.25e-10
    pulse_width: float = 1e-3
    tau_dpi: float = 1e-2
    tau_mem: float = 2e-2
    gain: float = 300.0
    dt: float = 1e-5
    i_leak_target: float | None = None

    def __post_init__(self):
        for name in ("i_rest", "i_reset", "i_sl", "i_unit"):
            if getattr(self, name) < 0:
                raise ConfigurationError(f"{name} must be >= 0")
        if self.i_reset >= self.i_rest:
            raise ConfigurationError("i_reset must be below i_rest")
        for name in ("pulse_width", "tau_dpi", "tau_mem", "dt"):
            if getattr(self, name) <= 0:
                raise ConfigurationError(f"{name} must be positive")
        if self.gain <= 0:
            raise ConfigurationError("gain must be positive")
        if self.i_leak_target is not None and self.i_leak_target < 0:
            raise ConfigurationError("i_leak_target must be >= 0")

    @property
    def leak_target(self) -> float:
        return self.i_reset if self.i_leak_target is None else self.i_leak_target

    @property
    def band(self) -> tuple:
        """Tolerance band reported in traces, i_rest +- 2*i_sl."""
        return (self.i_rest - 2.0 * self.i_sl, self.i_rest + 2.0 * self.i_sl)


@dataclass(frozen=True)
class SynapseCell:
    """Weight register, decision latch, pulse extender, and DPI filter state.

    latch_stop high means the last rule evaluation was Hold; otherwise
    latch_inc selects the direction committed on the next falling edge.
    pulse_end is None when no pulse is active.
    """

    weight_code: int = 0
    latch_inc: bool = False
    latch_stop: bool = True
    pulse_end: float | None = None
    i_dpi_exc: float = 0.0
    i_dpi_inh: float = 0.0

    def __post_init__(self):
        if not CODE_MIN <= self.weight_code <= CODE_MAX:
            raise ConfigurationError(
                f"weight_code {self.weight_code} outside [{CODE_MIN}, {CODE_MAX}]"
            )
        if self.i_dpi_exc < 0 or self.i_dpi_inh < 0:
            raise ConfigurationError("DPI currents cannot be negative")

    @property
    def latched_decision(self) -> RuleDecision:
        if self.latch_stop:
            return RuleDecision.HOLD
        return RuleDecision.INCREMENT if self.latch_inc else RuleDecision.DECREMENT


@dataclass(frozen=True)
class NeuronHw:
    """Membrane current of the integrate-and-hold neuron (never negative)."""

    i_mem: float

    def __post_init__(self):
        if self.i_mem < 0:
            raise ConfigurationError("i_mem cannot be negative")


@dataclass
class TraceLog:
    """Per-step record of one synapse-learning run.

    weight_code and decision track the plastic cell; the DPI columns hold the
    total excitatory/inhibitory currents reaching the neuron. band_lo/band_hi
    is the i_rest +- 2*i_sl tolerance band used for plotting and verdicts.
    """

    t: np.ndarray
    i_mem: np.ndarray
    weight_code: np.ndarray
    decision: np.ndarray
    i_dpi_exc: np.ndarray
    i_dpi_inh: np.ndarray
    band_lo: float
    band_hi: float

    @property
    def n_samples(self) -> int:
        return len(self.t)


@dataclass
class TraceSummary:
    """Convergence verdict for a trace; tail means the final 20% of samples."""

    final_code: int
    settled: bool
    settle_time: float | None
    pinned: bool
    overshoot: bool
    max_i_mem: float
    n_commits: int
    tail_updates: int
    tail_in_band: bool
    decrement_time: float


def dac_convert(weight_code: int, i_unit: float):
    """Sign-routed DAC: code >= 0 drives the excitatory branch, < 0 the inhibitory."""
    if not CODE_MIN <= weight_code <= CODE_MAX:
        raise ConfigurationError(
            f"weight_code {weight_code} outside [{CODE_MIN}, {CODE_MAX}]"
        )
    if weight_code >= 0:
        return (weight_code * i_unit, 0.0)
    return (0.0, -weight_code * i_unit)


def evaluate_rule_current(
    i_before: float, i_rest: float, i_omega_signed: float, i_sl: float
) -> RuleDecision:
    """Current-mode rule: strict sign checks on the two summed comparator inputs.

    Increment when i_before - i_rest + i_omega/2 + i_sl < 0, decrement when
    i_rest - i_before - i_omega/2 + i_sl < 0, hold otherwise. The two sums add
    to 2*i_sl, so for i_sl > 0 at most one can be negative.
    """
    if i_sl < 0:
        raise ConfigurationError("i_sl must be >= 0")
    half = 0.5 * i_omega_signed
    if i_before - i_rest + half + i_sl < 0.0:
        return RuleDecision.INCREMENT
    if i_rest - i_before - half + i_sl < 0.0:
        return RuleDecision.DECREMENT
    return RuleDecision.HOLD


def on_rising_edge(cell: SynapseCell, neuron: NeuronHw, params: HwParams, t: float) -> SynapseCell:
    """Latch the rule decision from the membrane snapshot and (re)start the pulse.

    The membrane is read before this pulse injects any synaptic current, so
    the committed step is insensitive to anything that happens mid-pulse.
    Retriggering while a pulse is active extends it and re-latches.
    """
    decision = evaluate_rule_current(
        neuron.i_mem, params.i_rest, cell.weight_code * params.i_unit, params.i_sl
    )
    return replace(
        cell,
        latch_inc=decision is RuleDecision.INCREMENT,
        latch_stop=decision is RuleDecision.HOLD,
        pulse_end=t + params.pulse_width,
    )


def extend_pulse(cell: SynapseCell, params: HwParams, t: float) -> SynapseCell:
    """Restart the pulse extender without touching the latch (non-plastic path)."""
    return replace(cell, pulse_end=t + params.pulse_width)


def on_falling_edge(cell: SynapseCell) -> SynapseCell:
    """Commit the latched step into the saturating counter and clear the pulse.

    The latch itself is left untouched; only a rising edge rewrites it.
    """
    code = cell.weight_code
    if not cell.latch_stop:
        code = code + 1 if cell.latch_inc else code - 1
        code = min(max(code, CODE_MIN), CODE_MAX)
    return replace(cell, weight_code=code, pulse_end=None)


def dpi_step(cell: SynapseCell, params: HwParams, t: float) -> SynapseCell:
    """Advance both filters one dt with the exact exponential update.

    While the pulse covers the step [t, t+dt) the DAC output for the current
    code drives the sign-matched branch; otherwise both branches decay to 0.
    """
    i_exc_in = 0.0
    i_inh_in = 0.0
    if cell.pulse_end is not None and t + 0.5 * params.dt < cell.pulse_end:
        i_exc_in, i_inh_in = dac_convert(cell.weight_code, params.i_unit)
    decay = math.exp(-params.dt / params.tau_dpi)
    return replace(
        cell,
        i_dpi_exc=i_exc_in + (cell.i_dpi_exc - i_exc_in) * decay,
        i_dpi_inh=i_inh_in + (cell.i_dpi_inh - i_inh_in) * decay,
    )


def neuron_step(
    neuron: NeuronHw, i_exc_total: float, i_inh_total: float, params: HwParams
) -> NeuronHw:
    """One exact exponential membrane step toward leak_target + gain*(exc - inh), clamped at 0."""
    target = params.leak_target + params.gain * (i_exc_total - i_inh_total)
    decay = math.exp(-params.dt / params.tau_mem)
    i_new = target + (neuron.i_mem - target) * decay
    return NeuronHw(i_mem=i_new if i_new > 0.0 else 0.0)


def _run_datapath(params, spike_train, initial_code, fixed_code=None) -> TraceLog:
    """Shared event loop. fixed_code adds a second, non-plastic cell on the same train.

    Per step at t = i*dt: expire pulses (falling edge commits), process this
    step's rising edges (latch from the membrane as it stands, before any of
    this step's injection), record the row, then advance DPI filters and the
    neuron using the start-of-step DPI outputs.
    """
    dt = params.dt
    n_steps = int(round(spike_train.duration / dt))
    if n_steps < 1:
        raise ConfigurationError("spike train shorter than one time step")
    spike_steps = np.rint(np.asarray(spike_train.times) / dt).astype(np.int64)
    n_spikes = len(spike_steps)

    cell = SynapseCell(weight_code=initial_code)
    fixed = SynapseCell(weight_code=fixed_code) if fixed_code is not None else None
    neuron = NeuronHw(i_mem=params.i_reset)

    t_arr = np.empty(n_steps)
    i_mem_arr = np.empty(n_steps)
    code_arr = np.empty(n_steps, dtype=np.int64)
    dec_arr = np.empty(n_steps, dtype=np.int64)
    exc_arr = np.empty(n_steps)
    inh_arr = np.empty(n_steps)

    half_dt = 0.5 * dt
    sp = 0
    for i in range(n_steps):
        t = i * dt
        if cell.pulse_end is not None and t + half_dt >= cell.pulse_end:
            cell = on_falling_edge(cell)
        if fixed is not None and fixed.pulse_end is not None and t + half_dt >= fixed.pulse_end:
            fixed = on_falling_edge(fixed)
        while sp < n_spikes and spike_steps[sp] == i:
            cell = on_rising_edge(cell, neuron, params, t)
            if fixed is not None:
                fixed = extend_pulse(fixed, params, t)
            sp += 1
        exc_total = cell.i_dpi_exc
        inh_total = cell.i_dpi_inh
        if fixed is not None:
            exc_total += fixed.i_dpi_exc
            inh_total += fixed.i_dpi_inh
        t_arr[i] = t
        i_mem_arr[i] = neuron.i_mem
        code_arr[i] = cell.weight_code
        dec_arr[i] = int(cell.latched_decision)
        exc_arr[i] = exc_total
        inh_arr[i] = inh_total
        cell = dpi_step(cell, params, t)
        if fixed is not None:
            fixed = dpi_step(fixed, params, t)
        neuron = neuron_step(neuron, exc_total, inh_total, params)

    band_lo, band_hi = params.band
    return TraceLog(
        t=t_arr,
        i_mem=i_mem_arr,
        weight_code=code_arr,
        decision=dec_arr,
        i_dpi_exc=exc_arr,
        i_dpi_inh=inh_arr,
        band_lo=band_lo,
        band_hi=band_hi,
    )


def run_single_synapse(params: HwParams, spike_train, initial_code: int = 0) -> TraceLog:
    """Train one plastic synapse against a fixed spike train.

    The neuron starts at i_reset; the weight grows until the membrane crosses
    into the dead band, typically with one overshoot-and-correct oscillation
    before the code freezes.
    """
    return _run_datapath(params, spike_train, initial_code)


def run_two_synapse(
    params: HwParams, spike_train, initial_code: int = 0, fixed_code: int = 40
) -> TraceLog:
    """Plastic synapse plus a fixed-weight cell driven by the same spike train.

    With a strong positive fixed weight the plastic code must go negative to
    pull the membrane back into the band. fixed_code = 0 reduces exactly to
    the single-synapse run.
    """
    return _run_datapath(params, spike_train, initial_code, fixed_code=fixed_code)


def summarize_trace(trace: TraceLog, params: HwParams) -> TraceSummary:
    """Convergence verdict over the final 20% of the trace.

    settled: the tail stays inside the band with zero weight commits. pinned:
    the code sits at a saturation bound for the whole tail while the membrane
    stays outside the band (the non-convergence failure mode). settle_time is
    the earliest time from which the code never changes and the membrane
    stays in band through the end; None when not settled. decrement_time
    counts time spent with a Decrement latched.
    """
    n = trace.n_samples
    start = int(round(0.8 * n))
    code = trace.weight_code
    change_idx = np.flatnonzero(np.diff(code)) + 1
    tail_updates = int(np.count_nonzero(change_idx >= start))
    in_band = (trace.i_mem >= trace.band_lo) & (trace.i_mem <= trace.band_hi)
    tail_in_band = bool(np.all(in_band[start:]))
    settled = tail_in_band and tail_updates == 0

    settle_time = None
    if settled:
        last_change = int(change_idx[-1]) if change_idx.size else 0
        oob = np.flatnonzero(~in_band)
        first_quiet = max(last_change, int(oob[-1]) + 1 if oob.size else 0)
        settle_time = float(trace.t[first_quiet])

    pinned = bool(
        (np.all(code[start:] == CODE_MAX) or np.all(code[start:] == CODE_MIN))
        and not np.any(in_band[start:])
    )
    return TraceSummary(
        final_code=int(code[-1]),
        settled=settled,
        settle_time=settle_time,
        pinned=pinned,
        overshoot=bool(np.any(trace.i_mem > params.i_rest)),
        max_i_mem=float(trace.i_mem.max()),
        n_commits=int(change_idx.size),
        tail_updates=tail_updates,
        tail_in_band=tail_in_band,
        decrement_time=float(params.dt * np.count_nonzero(trace.decision == -1)),
    )


def trace_to_csv(trace: TraceLog, path) -> None:
    """Write the run trace with header t,i_mem,weight_code,decision,..., one row per dt."""
    band_lo = repr(float(trace.band_lo))
    band_hi = repr(float(trace.band_hi))
    with open(path, "w") as fh:
        fh.write("t,i_mem,weight_code,decision,i_dpi_exc,i_dpi_inh,band_lo,band_hi\n")
        for i in range(trace.n_samples):
            fh.write(
                f"{float(trace.t[i])!r},{float(trace.i_mem[i])!r},"
                f"{int(trace.weight_code[i])},{int(trace.decision[i])},"
                f"{float(trace.i_dpi_exc[i])!r},{float(trace.i_dpi_inh[i])!r},"
                f"{band_lo},{band_hi}\n"
            )
