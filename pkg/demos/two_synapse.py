"""Plastic synapse balancing a fixed excitatory companion.

Both synapses see the same spike train. The non-plastic cell injects a strong
excitatory current (code 40), so the plastic weight has to go negative to pull
the membrane back into the tolerance band; the decrement phase is much longer
than in the single-synapse run.
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from ebnforge import HwParams, run_single_synapse, run_two_synapse, summarize_trace
from ebnforge.signals import regular_spike_train

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

params = HwParams()
drive = regular_spike_train(100.0, 2.0)

single = summarize_trace(run_single_synapse(params, drive), params)
trace = run_two_synapse(params, drive, fixed_code=40)
s = summarize_trace(trace, params)

print(f"final plastic code {s.final_code}, settled: {s.settled}")
print(f"decrement time {s.decrement_time:.2f} s (single-synapse run: {single.decrement_time:.2f} s)")

fig, axes = plt.subplots(3, 1, figsize=(9, 7), sharex=True, constrained_layout=True)

ax = axes[0]
ax.plot(trace.t, trace.i_mem * 1e9, lw=0.7, color="C0")
ax.axhspan(trace.band_lo * 1e9, trace.band_hi * 1e9, color="C2", alpha=0.25, label="band")
ax.axhline(params.i_rest * 1e9, color="k", lw=0.6, ls="--", label="i_rest")
ax.set_ylabel("i_mem (nA)")
ax.legend(loc="upper right")

ax = axes[1]
ax.step(trace.t, trace.weight_code, where="post", color="C3", lw=0.9)
ax.axhline(0, color="k", lw=0.5)
ax.set_ylabel("plastic weight code")

ax = axes[2]
ax.plot(trace.t, trace.i_dpi_exc * 1e9, lw=0.6, label="exc total (incl. fixed)")
ax.plot(trace.t, trace.i_dpi_inh * 1e9, lw=0.6, label="inh total")
ax.set(xlabel="time (s)", ylabel="DPI current (nA)")
ax.legend(loc="upper right")

for ax in axes:
    ax.grid(alpha=0.3)
fig.savefig(OUT / "two_synapse.png", dpi=150)
print(f"wrote plots to {OUT}")
