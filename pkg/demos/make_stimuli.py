"""Stimulus generators used by the experiments.

Shows smoothed white noise at three kernel widths (same seed, so the traces
are the same noise at different smoothness) and the regular spike train that
drives the synapse runs.
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from ebnforge.signals import regular_spike_train, smoothed_noise

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

dt = 1e-4
n_steps = 4000

fig, axes = plt.subplots(3, 1, figsize=(9, 6), sharex=True, constrained_layout=True)
for ax, kernel_sigma in zip(axes, (1e-3, 5e-3, 2e-2)):
    sig = smoothed_noise(1, n_steps, dt, 30.0, kernel_sigma, seed=1)
    ax.plot(sig.times, sig.samples[0], lw=0.7)
    ax.set_ylabel("amplitude")
    ax.set_title(f"kernel_sigma = {kernel_sigma:g} s", fontsize=9)
    ax.grid(alpha=0.3)
    print(f"kernel_sigma {kernel_sigma:g}: std {sig.samples[0].std():.2f}")
axes[-1].set_xlabel("time (s)")
fig.savefig(OUT / "smoothed_noise.png", dpi=150)

train = regular_spike_train(100.0, 0.2)
fig, ax = plt.subplots(figsize=(9, 1.6), constrained_layout=True)
ax.eventplot(train.times, lineoffsets=0, linelengths=0.8)
ax.set(xlabel="time (s)", yticks=[], title="100 Hz drive")
fig.savefig(OUT / "spike_train.png", dpi=150)

print(f"wrote plots to {OUT}")
