"""Deterministic stimulus generation.

Two stimulus classes: analog signals made by smoothing white noise with a
truncated Gaussian kernel, and fixed-rate spike trains. All randomness comes
from numpy's default_rng (PCG64 seeded through SeedSequence); the generator
algorithm is part of the reproducibility contract and must not be swapped
silently.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError


@dataclass
class Signal:
    """Multi-channel sampled signal, shape (n_channels, n_steps)."""

    samples: np.ndarray
    dt: float

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=float)
        if self.samples.ndim != 2:
            raise ConfigurationError("Signal samples must be 2-D (channels x steps)")
        if self.samples.shape[1] < 1:
            raise ConfigurationError("Signal needs at least one step")
        if self.dt <= 0:
            raise ConfigurationError("Signal dt must be positive")
        if not np.all(np.isfinite(self.samples)):
            raise ConfigurationError("Signal samples must be finite")

    @property
    def n_channels(self) -> int:
        return self.samples.shape[0]

    @property
    def n_steps(self) -> int:
        return self.samples.shape[1]

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.n_steps) * self.dt


@dataclass
class SpikeTrain:
    """Strictly increasing spike times in [0, duration)."""

    times: np.ndarray
    duration: float

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        if self.duration <= 0:
            raise ConfigurationError("SpikeTrain duration must be positive")
        if self.times.size:
            if self.times[0] < 0 or self.times[-1] >= self.duration:
                raise ConfigurationError("spike times must lie in [0, duration)")
            if np.any(np.diff(self.times) <= 0):
                raise ConfigurationError("spike times must be strictly increasing")


def gaussian_kernel(sigma_samples: float) -> np.ndarray:
    """Unit-sum Gaussian kernel truncated at +/- 4 sigma (radius = ceil(4*sigma))."""
    if sigma_samples <= 0:
        raise ConfigurationError("kernel sigma must be positive")
    radius = int(np.ceil(4.0 * sigma_samples))
    offsets = np.arange(-radius, radius + 1, dtype=float)
    kernel = np.exp(-0.5 * (offsets / sigma_samples) ** 2)
    return kernel / kernel.sum()


def gaussian_smooth(samples: np.ndarray, sigma_samples: float) -> np.ndarray:
    """Convolve each row with the truncated unit-sum kernel, reflect-padded at the ends."""
    samples = np.atleast_2d(np.asarray(samples, dtype=float))
    kernel = gaussian_kernel(sigma_samples)
    radius = kernel.size // 2
    n = samples.shape[1]
    if radius >= n:
        raise ConfigurationError(
            f"smoothing kernel (radius {radius}) is wider than the signal ({n} steps)"
        )
    out = np.empty_like(samples)
    for i, row in enumerate(samples):
        padded = np.pad(row, radius, mode="reflect")
        out[i] = np.convolve(padded, kernel, mode="valid")
    return out


def smoothed_noise(
    n_channels: int,
    n_steps: int,
    dt: float,
    noise_sigma: float,
    kernel_sigma_seconds: float,
    seed,
) -> Signal:
    """Gaussian white noise per channel, smoothed with a unit-sum Gaussian kernel.

    `seed` may be an int or a numpy SeedSequence. kernel_sigma is given in
    seconds and converted to samples via dt.
    """
    if n_channels < 1 or n_steps < 1:
        raise ConfigurationError("need at least one channel and one step")
    if dt <= 0:
        raise ConfigurationError("dt must be positive")
    if noise_sigma < 0:
        raise ConfigurationError("noise_sigma must be >= 0")
    if kernel_sigma_seconds <= 0:
        raise ConfigurationError("kernel_sigma must be positive")
    rng = np.random.default_rng(seed)
    white = rng.normal(0.0, noise_sigma, size=(n_channels, n_steps))
    return Signal(gaussian_smooth(white, kernel_sigma_seconds / dt), dt)


def regular_spike_train(rate_hz: float, duration: float, phase: float = 0.0) -> SpikeTrain:
    """Spikes at phase + i/rate_hz for every i with time < duration."""
    if rate_hz <= 0:
        raise ConfigurationError("rate_hz must be positive")
    if duration <= 0:
        raise ConfigurationError("duration must be positive")
    if phase < 0:
        raise ConfigurationError("phase must be >= 0")
    n_upper = int(np.floor((duration - phase) * rate_hz)) + 2
    candidates = phase + np.arange(max(n_upper, 0), dtype=float) / rate_hz
    return SpikeTrain(candidates[candidates < duration], duration)


def signal_to_csv(signal: Signal, path) -> None:
    """Write one column per channel with header t,ch0,ch1,..."""
    header = "t," + ",".join(f"ch{c}" for c in range(signal.n_channels))
    with open(path, "w") as fh:
        fh.write(header + "\n")
        times = signal.times
        for i in range(signal.n_steps):
            row = ",".join(repr(float(v)) for v in signal.samples[:, i])
            fh.write(f"{float(times[i])!r},{row}\n")
