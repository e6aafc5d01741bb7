"""Run-level evaluation: reconstruction error, population activity, distance to target weights."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError


@dataclass
class MetricsRow:
    """One training iteration's summary numbers."""

    iteration: int
    rmse: float
    mean_rate: float
    frob_dist: float
    spike_count: int


def rmse(signal, reconstruction) -> float:
    """Root of the mean squared elementwise difference over all channels and steps."""
    a = np.asarray(signal, dtype=float)
    b = np.asarray(reconstruction, dtype=float)
    if a.shape != b.shape:
        raise ConfigurationError(f"rmse: shape mismatch {a.shape} vs {b.shape}")
    return float(np.sqrt(np.mean((a - b) ** 2)))


def frobenius_distance(omega, target) -> float:
    """Frobenius norm of (physical recurrent weights - target matrix).

    `omega` may be a RecurrentMatrix (its code * step physical values are used)
    or a plain real matrix.
    """
    phys = omega.physical if hasattr(omega, "physical") else np.asarray(omega, dtype=float)
    t = np.asarray(target, dtype=float)
    if phys.shape != t.shape:
        raise ConfigurationError(f"frobenius_distance: shape mismatch {phys.shape} vs {t.shape}")
    return float(np.sqrt(np.sum((phys - t) ** 2)))


def mean_rate(spike_events, n_neurons: int, duration: float) -> float:
    """Population mean firing rate in Hz: total spikes / (neurons * seconds)."""
    if duration <= 0:
        raise ConfigurationError("mean_rate: duration must be positive")
    if n_neurons < 1:
        raise ConfigurationError("mean_rate: need at least one neuron")
    return len(spike_events) / (n_neurons * duration)


def metrics_to_csv(rows, path) -> None:
    """Write iteration metrics with header iter,rmse,mean_rate,frob_dist,spike_count."""
    with open(path, "w") as fh:
        fh.write("iter,rmse,mean_rate,frob_dist,spike_count\n")
        for row in rows:
            fh.write(
                f"{row.iteration},{float(row.rmse)!r},{float(row.mean_rate)!r},"
                f"{float(row.frob_dist)!r},{row.spike_count}\n"
            )
