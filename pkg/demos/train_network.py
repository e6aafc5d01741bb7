"""Train the recurrent weights of a 20-neuron spike-coding network.

Runs the default network experiment, then plots the per-iteration metrics and
compares the reconstruction before and after training. Everything here goes
through the same code path as `ebn-forge network`.
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from ebnforge import (
    RecurrentMatrix,
    optimal_recurrent,
    params_for_decoder,
    random_decoder,
    train,
)
from ebnforge.config import defaults
from ebnforge.metrics import frobenius_distance
from ebnforge.signals import smoothed_noise

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

values = defaults("network")
seed = values["seed"]
dec_ss, sig_ss, init_ss = np.random.SeedSequence(seed).spawn(3)

d = random_decoder(values["n_inputs"], values["n_neurons"], np.random.default_rng(dec_ss))
params = params_for_decoder(
    d, dt=values["dt"], lam=values["lam"], v_rest=values["v_rest"],
    seed=seed, omega_step=values["omega_step"],
)
n_steps = int(round(values["duration"] / values["dt"]))
signal = smoothed_noise(
    values["n_inputs"], n_steps, values["dt"],
    values["noise_sigma"], values["kernel_sigma"], seed=sig_ss,
)
span = values["initial_code_range"]
codes = np.random.default_rng(init_ss).integers(
    -span, span + 1, size=(values["n_neurons"], values["n_neurons"])
)
omega0 = RecurrentMatrix(codes, params.omega_step)

target = optimal_recurrent(d)
print(f"initial distance to -D^T D: {frobenius_distance(omega0, target):.3f}")

n_iter = values["n_iterations"]
result = train(params, d, omega0, signal, n_iter, record_iterations=(1, n_iter))
for row in result.metrics[:: max(1, n_iter // 10)]:
    print(
        f"iter {row.iteration:3d}  rmse {row.rmse:7.3f}  "
        f"rate {row.mean_rate:7.2f} Hz  frob {row.frob_dist:7.3f}"
    )
print(f"final distance to -D^T D: {result.metrics[-1].frob_dist:.3f}")

# metric curves
iters = [row.iteration for row in result.metrics]
fig, axes = plt.subplots(1, 3, figsize=(12, 3.2), constrained_layout=True)
axes[0].plot(iters, [row.rmse for row in result.metrics])
axes[0].set(xlabel="iteration", ylabel="reconstruction RMSE")
axes[1].plot(iters, [row.mean_rate for row in result.metrics])
axes[1].set(xlabel="iteration", ylabel="mean rate (Hz)")
axes[2].plot(iters, [row.frob_dist for row in result.metrics])
axes[2].set(xlabel="iteration", ylabel="|Omega - (-D^T D)|_F")
for ax in axes:
    ax.grid(alpha=0.3)
fig.savefig(OUT / "network_metrics.png", dpi=150)

# reconstruction before vs after training, first channel
t = signal.times
fig, axes = plt.subplots(2, 1, figsize=(9, 5), sharex=True, constrained_layout=True)
for ax, it, label in ((axes[0], 1, "iteration 1"), (axes[1], n_iter, f"iteration {n_iter}")):
    ax.plot(t, signal.samples[0], color="k", lw=0.8, label="signal")
    ax.plot(t, result.reconstructions[it][0], color="C1", lw=0.8, label="reconstruction")
    ax.set(ylabel="channel 0", title=label)
    ax.legend(loc="upper right")
axes[1].set_xlabel("time (s)")
fig.savefig(OUT / "network_reconstruction.png", dpi=150)

# learned weights against the optimum
fig, axes = plt.subplots(1, 3, figsize=(11, 3.4), constrained_layout=True)
scale = np.abs(target).max()
for ax, (mat, title) in zip(
    axes,
    (
        (omega0.physical, "initial"),
        (result.omega.physical, "learned"),
        (target, "optimal"),
    ),
):
    im = ax.imshow(mat, vmin=-scale, vmax=scale, cmap="RdBu_r")
    ax.set_title(title)
fig.colorbar(im, ax=axes, shrink=0.8)
fig.savefig(OUT / "network_weights.png", dpi=150)

print(f"wrote plots to {OUT}")
