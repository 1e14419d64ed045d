"""
Convergence profile
===================

The ascent improves the Vora-Value monotonically; the color error is not
optimized directly, yet it falls quickly in the first ~100 iterations as
the value climbs. This script records both quantities per iteration for
one camera and plots them on twin axes.

Run:  python demos/05_convergence_profile.py
"""
from pathlib import Path

import numpy as np

from camfilter import (AscentConfig, FilterEvaluator, default_initial_filter,
                       gradient_ascent_unconstrained)
from camfilter.dataio import load_cie1931_cmf
from camfilter.synth import synthetic_camera, synthetic_scene

out = Path(__file__).parent / "output"
out.mkdir(exist_ok=True)

observer = load_cie1931_cmf()
camera = synthetic_camera("demo_cam")
scene = synthetic_scene(n_illuminants=24, n_reflectances=300, seed=13)

_, trace = gradient_ascent_unconstrained(
    camera, observer, default_initial_filter(camera.grid),
    AscentConfig(max_iters=400))

evaluator = FilterEvaluator(camera, observer, scene)
iters, values, errors = [], [], []
picks = list(range(0, min(len(trace.records), 201))) + \
    list(range(210, len(trace.records), 10))
for idx in picks:
    record = trace.records[idx]
    f = record.filter_values / max(1.0, np.max(record.filter_values))
    nu, stats = evaluator.evaluate(f)
    iters.append(record.iteration)
    values.append(nu)
    errors.append(stats.mean)

with open(out / "convergence.csv", "w", encoding="utf-8") as fh:
    fh.write("iter,vora_value,mean_delta_e\n")
    for i, nu, de in zip(iters, values, errors):
        fh.write(f"{i},{nu:.9f},{de:.6f}\n")

print(f"iteration   0: vora {values[0]:.4f}, mean dE {errors[0]:.3f}")
mid = min(100, len(values) - 1)
print(f"iteration {iters[mid]:3d}: vora {values[mid]:.4f}, mean dE {errors[mid]:.3f}")
print(f"iteration {iters[-1]:3d}: vora {values[-1]:.4f}, mean dE {errors[-1]:.3f}")

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    print("matplotlib not installed; skipping the plot")
else:
    fig, ax_err = plt.subplots(figsize=(7, 4))
    ax_err.plot(iters, errors, "b-", label="mean color error")
    ax_err.set_xlabel("iteration")
    ax_err.set_ylabel("mean CIELAB error", color="b")
    ax_val = ax_err.twinx()
    ax_val.plot(iters, values, "r-", label="Vora-Value")
    ax_val.set_ylabel("Vora-Value", color="r")
    fig.tight_layout()
    fig.savefig(out / "convergence.png", dpi=150)
    print(f"wrote {out / 'convergence.png'}")
