"""Single plastic synapse driven at a constant rate.

The weight code ramps up from zero, the membrane current overshoots the rest
level once, and the rule then walks the code back until the membrane sits
inside the tolerance band and every evaluation holds.
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from ebnforge import HwParams, run_single_synapse, summarize_trace
from ebnforge.signals import regular_spike_train

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

params = HwParams()
drive = regular_spike_train(100.0, 2.0)
trace = run_single_synapse(params, drive)
s = summarize_trace(trace, params)

print(f"final weight code {s.final_code}, settled: {s.settled}")
print(f"settle time {s.settle_time:.3f} s, commits {s.n_commits}")
print(f"max i_mem {s.max_i_mem:.3e} A (rest {params.i_rest:.1e} A)")

fig, axes = plt.subplots(3, 1, figsize=(9, 7), sharex=True, constrained_layout=True)

ax = axes[0]
ax.plot(trace.t, trace.i_mem * 1e9, lw=0.7, color="C0")
ax.axhspan(trace.band_lo * 1e9, trace.band_hi * 1e9, color="C2", alpha=0.25, label="band")
ax.axhline(params.i_rest * 1e9, color="k", lw=0.6, ls="--", label="i_rest")
ax.set_ylabel("i_mem (nA)")
ax.legend(loc="lower right")

ax = axes[1]
ax.step(trace.t, trace.weight_code, where="post", color="C3", lw=0.9)
ax.set_ylabel("weight code")

ax = axes[2]
ax.plot(trace.t, trace.i_dpi_exc * 1e9, lw=0.6, label="exc")
ax.plot(trace.t, trace.i_dpi_inh * 1e9, lw=0.6, label="inh")
ax.set(xlabel="time (s)", ylabel="DPI current (nA)")
ax.legend(loc="upper right")

for ax in axes:
    ax.grid(alpha=0.3)
fig.savefig(OUT / "single_synapse.png", dpi=150)
print(f"wrote plots to {OUT}")
