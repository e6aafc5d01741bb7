"""Ideal spike-coding network model with discrete recurrent plasticity.

The network reads out a membrane vector algebraically from the input and the
filtered spike trains (V = F x + Omega r, with F the decoder transpose), emits
at most one spike per step (largest threshold margin wins), and adjusts each
recurrent weight by a fixed quantum whenever doing so shrinks the squared
deviation of the membrane from rest. Weights are stored as integer codes times
the quantum, mirroring a saturating hardware counter.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import ConfigurationError, SimulationDiverged
from .metrics import MetricsRow, frobenius_distance, mean_rate, rmse


@dataclass
class NetworkParams:
    """Simulation constants for one network.

    lam is the decay rate of the filtered spike trains (1/s); omega_step is
    the plasticity quantum in voltage units; thresholds holds one spike
    threshold per neuron.
    """

    n_neurons: int
    n_inputs: int
    thresholds: np.ndarray
    omega_step: float
    dt: float = 1e-4
    lam: float = 50.0
    v_rest: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.n_neurons < 1 or self.n_inputs < 1:
            raise ConfigurationError("need at least one neuron and one input channel")
        if self.dt <= 0 or self.lam <= 0 or self.omega_step <= 0:
            raise ConfigurationError("dt, lam and omega_step must be positive")
        self.thresholds = np.asarray(self.thresholds, dtype=float)
        if self.thresholds.shape != (self.n_neurons,):
            raise ConfigurationError(
                f"thresholds must have exactly {self.n_neurons} entries"
            )
        if not np.all(np.isfinite(self.thresholds)):
            raise ConfigurationError("thresholds must be finite")
        if not np.isfinite(self.v_rest):
            raise ConfigurationError("v_rest must be finite")

    @property
    def decay(self) -> float:
        """Exact per-step decay factor of the filtered spike trains."""
        return math.exp(-self.lam * self.dt)


@dataclass
class DecoderMatrix:
    """Linear readout D (n_inputs x n_neurons); reconstruction is D r.

    The feedforward weights are D transpose and are derived here once, never
    stored independently.
    """

    entries: np.ndarray

    def __post_init__(self):
        self.entries = np.asarray(self.entries, dtype=float)
        if self.entries.ndim != 2:
            raise ConfigurationError("decoder must be a 2-D matrix")
        if not np.all(np.isfinite(self.entries)):
            raise ConfigurationError("decoder entries must be finite")
        norms = np.sqrt(np.sum(self.entries**2, axis=0))
        if np.any(norms <= 0):
            raise ConfigurationError("every decoder column needs a positive norm")
        self.feedforward = np.ascontiguousarray(self.entries.T)

    @property
    def n_inputs(self) -> int:
        return self.entries.shape[0]

    @property
    def n_neurons(self) -> int:
        return self.entries.shape[1]

    def column_norms_sq(self) -> np.ndarray:
        return np.sum(self.entries**2, axis=0)


@dataclass
class RecurrentMatrix:
    """Recurrent weights as integer codes; physical weight = code * omega_step exactly."""

    codes: np.ndarray
    omega_step: float
    code_min: int = -64
    code_max: int = 63

    def __post_init__(self):
        codes = np.asarray(self.codes)
        if not np.issubdtype(codes.dtype, np.integer):
            rounded = np.rint(codes)
            if not np.array_equal(rounded, codes):
                raise ConfigurationError("recurrent codes must be integers")
            codes = rounded
        self.codes = codes.astype(np.int64)
        if self.codes.ndim != 2 or self.codes.shape[0] != self.codes.shape[1]:
            raise ConfigurationError("recurrent code matrix must be square")
        if self.omega_step <= 0:
            raise ConfigurationError("omega_step must be positive")
        if self.code_min >= self.code_max:
            raise ConfigurationError("code_min must be below code_max")
        if self.codes.min() < self.code_min or self.codes.max() > self.code_max:
            raise ConfigurationError(
                f"codes outside [{self.code_min}, {self.code_max}]"
            )
        self.physical = self.codes * self.omega_step

    @property
    def n_neurons(self) -> int:
        return self.codes.shape[0]

    def with_codes(self, codes: np.ndarray) -> "RecurrentMatrix":
        return RecurrentMatrix(codes, self.omega_step, self.code_min, self.code_max)


@dataclass
class NetworkState:
    """Filtered spike trains r, membrane cache v, and the clock.

    v is always the algebraic read-out of the current (input, r) pair; it is
    never integrated on its own.
    """

    r: np.ndarray
    v: np.ndarray
    t: float


@dataclass
class SpikeEvent:
    """One emitted spike plus the pre-spike membrane snapshot used for learning."""

    neuron: int
    t: float
    v_before: Optional[np.ndarray] = field(default=None, repr=False)


@dataclass
class TrainResult:
    omega: RecurrentMatrix
    metrics: list
    reconstructions: dict


def initial_state(params: NetworkParams) -> NetworkState:
    return NetworkState(
        r=np.zeros(params.n_neurons),
        v=np.full(params.n_neurons, params.v_rest),
        t=0.0,
    )


def random_decoder(n_inputs: int, n_neurons: int, rng, normalize_columns: bool = True) -> DecoderMatrix:
    """Gaussian decoder; columns scaled to unit norm by default."""
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    entries = rng.normal(size=(n_inputs, n_neurons))
    if normalize_columns:
        entries = entries / np.sqrt(np.sum(entries**2, axis=0))
    return DecoderMatrix(entries)


def params_for_decoder(
    d: DecoderMatrix,
    dt: float = 1e-4,
    lam: float = 50.0,
    v_rest: float = 0.0,
    seed: int = 0,
    omega_step: float | None = None,
    thresholds: np.ndarray | None = None,
) -> NetworkParams:
    """Fill in the decoder-dependent defaults.

    Threshold for neuron n defaults to half its squared column norm; the
    plasticity quantum defaults to a tenth of the largest squared column norm.
    """
    norms_sq = d.column_norms_sq()
    if thresholds is None:
        thresholds = 0.5 * norms_sq
    if omega_step is None:
        omega_step = 0.1 * float(norms_sq.max())
    return NetworkParams(
        n_neurons=d.n_neurons,
        n_inputs=d.n_inputs,
        thresholds=thresholds,
        omega_step=omega_step,
        dt=dt,
        lam=lam,
        v_rest=v_rest,
        seed=seed,
    )


def optimal_recurrent(d: DecoderMatrix) -> np.ndarray:
    """Recurrent weights that make every spike a greedy reconstruction-error step: -D^T D."""
    m = d.entries.T @ d.entries
    return -0.5 * (m + m.T)


def quantize_weights(
    target: np.ndarray, omega_step: float, code_min: int = -64, code_max: int = 63
) -> RecurrentMatrix:
    """Nearest-code quantization of a real weight matrix."""
    codes = np.clip(np.rint(np.asarray(target, dtype=float) / omega_step), code_min, code_max)
    return RecurrentMatrix(codes.astype(np.int64), omega_step, code_min, code_max)


def membrane(
    d: DecoderMatrix,
    omega: RecurrentMatrix,
    x_t: np.ndarray,
    r_t: np.ndarray,
    v_rest: float = 0.0,
) -> np.ndarray:
    """Algebraic membrane read-out: D^T x + Omega r + v_rest."""
    x_t = np.asarray(x_t, dtype=float)
    r_t = np.asarray(r_t, dtype=float)
    if x_t.shape != (d.n_inputs,):
        raise ConfigurationError(f"input vector must have shape ({d.n_inputs},)")
    if r_t.shape != (d.n_neurons,):
        raise ConfigurationError(f"rate vector must have shape ({d.n_neurons},)")
    if omega.codes.shape != (d.n_neurons, d.n_neurons):
        raise ConfigurationError("recurrent matrix does not match the decoder size")
    return d.feedforward @ x_t + omega.physical @ r_t + v_rest


def decode(d: DecoderMatrix, r: np.ndarray) -> np.ndarray:
    """Reconstruct the input estimate D r."""
    r = np.asarray(r, dtype=float)
    if r.shape != (d.n_neurons,):
        raise ConfigurationError(f"rate vector must have shape ({d.n_neurons},)")
    return d.entries @ r


def update_direction(v_before, omega_value, omega_step: float, v_rest: float = 0.0):
    """Discrete rule decision: +1 grow, -1 shrink, 0 hold.

    Grow when 2*v_before + omega < -omega_step/2 + 2*v_rest, shrink when it
    exceeds +omega_step/2 + 2*v_rest, hold inside the dead band. Works
    elementwise on arrays.
    """
    lhs = 2.0 * np.asarray(v_before) + np.asarray(omega_value)
    lo = -omega_step / 2.0 + 2.0 * v_rest
    hi = omega_step / 2.0 + 2.0 * v_rest
    return (lhs < lo).astype(np.int64) - (lhs > hi).astype(np.int64)


def learn_on_spike(
    omega: RecurrentMatrix,
    n: int,
    k: int,
    v_before_n: float,
    params: NetworkParams,
) -> RecurrentMatrix:
    """Apply the discrete rule to entry (n, k) after neuron k spiked.

    v_before_n is neuron n's membrane value before the spike's effect lands.
    Codes saturate at the configured bounds instead of wrapping.
    """
    direction = int(update_direction(v_before_n, omega.physical[n, k], omega.omega_step, params.v_rest))
    if direction == 0:
        return omega
    new_codes = omega.codes.copy()
    new_codes[n, k] = min(max(new_codes[n, k] + direction, omega.code_min), omega.code_max)
    return omega.with_codes(new_codes)


def _learn_column(
    omega: RecurrentMatrix, k: int, v_before: np.ndarray, params: NetworkParams
) -> RecurrentMatrix:
    """Vectorized equivalent of learn_on_spike over all postsynaptic entries of column k."""
    directions = update_direction(v_before, omega.physical[:, k], omega.omega_step, params.v_rest)
    if not directions.any():
        return omega
    new_codes = omega.codes.copy()
    new_codes[:, k] = np.clip(new_codes[:, k] + directions, omega.code_min, omega.code_max)
    return omega.with_codes(new_codes)


def step(
    state: NetworkState,
    params: NetworkParams,
    d: DecoderMatrix,
    omega: RecurrentMatrix,
    x_t: np.ndarray,
):
    """Advance one dt: exact r decay, membrane read-out, at most one spike.

    The neuron with the largest positive threshold margin spikes (lowest index
    on ties) and its r entry grows by 1 after the decay. Returns the new state
    and the SpikeEvent (or None); the event carries the pre-spike membrane
    vector.
    """
    r = state.r * params.decay
    v = membrane(d, omega, x_t, r, params.v_rest)
    if not np.all(np.isfinite(v)):
        step_index = int(round(state.t / params.dt))
        raise SimulationDiverged(
            f"non-finite membrane value at t={state.t!r} (step {step_index})",
            step=step_index,
            time=state.t,
        )
    t_new = state.t + params.dt
    margins = v - params.thresholds
    winner = int(np.argmax(margins))
    event = None
    if margins[winner] > 0.0:
        r[winner] += 1.0
        event = SpikeEvent(neuron=winner, t=t_new, v_before=v)
        v = membrane(d, omega, x_t, r, params.v_rest)
    return NetworkState(r=r, v=v, t=t_new), event


def train(
    params: NetworkParams,
    d: DecoderMatrix,
    omega_init: RecurrentMatrix,
    signal,
    n_iterations: int,
    record_iterations=(),
) -> TrainResult:
    """Run the full signal n_iterations times, learning on every spike.

    Each iteration restarts from a fresh state (r = 0). On a spike from
    neuron k, every entry of column k is updated from the simultaneous
    pre-spike membrane snapshot. Returns the final weights, per-iteration
    metrics (reconstruction RMSE, population rate, Frobenius distance to the
    optimal weights), and the reconstructions of any requested iterations.
    """
    samples = signal.samples
    if samples.shape[0] != params.n_inputs:
        raise ConfigurationError(
            f"signal has {samples.shape[0]} channels, expected {params.n_inputs}"
        )
    if omega_init.codes.shape != (params.n_neurons, params.n_neurons):
        raise ConfigurationError("initial recurrent matrix does not match n_neurons")
    if omega_init.omega_step != params.omega_step:
        raise ConfigurationError("params.omega_step and the recurrent matrix quantum disagree")
    if n_iterations < 0:
        raise ConfigurationError("n_iterations must be >= 0")

    target = optimal_recurrent(d)
    n_steps = samples.shape[1]
    duration = n_steps * params.dt
    record_iterations = set(record_iterations)

    omega = omega_init
    rows: list[MetricsRow] = []
    reconstructions: dict[int, np.ndarray] = {}
    recon = np.empty((params.n_inputs, n_steps))

    for iteration in range(1, n_iterations + 1):
        state = initial_state(params)
        events = []
        for i in range(n_steps):
            x_t = samples[:, i]
            try:
                state, event = step(state, params, d, omega, x_t)
            except SimulationDiverged as err:
                err.iteration = iteration
                raise
            if event is not None:
                events.append(event)
                omega = _learn_column(omega, event.neuron, event.v_before, params)
            recon[:, i] = d.entries @ state.r
        rows.append(
            MetricsRow(
                iteration=iteration,
                rmse=rmse(samples, recon),
                mean_rate=mean_rate(events, params.n_neurons, duration),
                frob_dist=frobenius_distance(omega, target),
                spike_count=len(events),
            )
        )
        if iteration in record_iterations:
            reconstructions[iteration] = recon.copy()

    return TrainResult(omega=omega, metrics=rows, reconstructions=reconstructions)
