"""
Designing a prefilter
=====================

Gradient ascent on the filtered Vora-Value finds the transmittance curve
that pulls the camera's subspace toward the observer's. Three designs are
compared:

* unconstrained (any per-wavelength transmittance),
* smooth, bounded to 20..100% transmission (8-term cosine basis), and
* smooth, bounded to 30..100%.

Outputs land in demos/output/: the three filter curves as CSV, a PNG
overlay, and the unconstrained convergence trace.

Run:  python demos/02_design_a_filter.py
"""
from pathlib import Path

import numpy as np

from camfilter import (AscentConfig, BoxBounds, cosine_basis,
                       default_initial_filter, gradient_ascent_unconstrained,
                       projected_gradient_ascent, vora_value)
from camfilter.dataio import load_cie1931_cmf, write_filter_csv
from camfilter.synth import synthetic_camera

out = Path(__file__).parent / "output"
out.mkdir(exist_ok=True)

observer = load_cie1931_cmf()
camera = synthetic_camera("demo_cam")
print(f"native vora value: {vora_value(camera, observer):.4f}")

# Unconstrained ascent from the neutral all-ones filter.
filt_free, trace_free = gradient_ascent_unconstrained(
    camera, observer, default_initial_filter(camera.grid), AscentConfig())
print(f"unconstrained:    vora {trace_free.final.vora_value:.4f} "
      f"after {trace_free.final.iteration} iterations ({trace_free.status})")
write_filter_csv(filt_free, out / "filter_unconstrained.csv")
trace_free.write_csv(out / "trace_unconstrained.csv")

# Constrained designs: smooth (cosine basis) and transmittance-bounded.
basis = cosine_basis(camera.grid.n, 8)
designs = {}
for f_min in (0.2, 0.3):
    c0 = np.zeros(8)
    c0[0] = 1.0
    filt, trace = projected_gradient_ascent(
        camera, observer, basis, c0, BoxBounds(f_min, 1.0), AscentConfig())
    designs[f_min] = filt
    print(f"bounds [{f_min}, 1.0]: vora {trace.final.vora_value:.4f} "
          f"after {trace.final.iteration} iterations ({trace.status})")
    write_filter_csv(filt, out / f"filter_min{int(f_min * 100)}.csv")

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    print("matplotlib not installed; skipping the plot")
else:
    wl = camera.grid.wavelengths()
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.plot(wl, filt_free.f, "r-", label="no constraint (peak-normalized)")
    ax.plot(wl, designs[0.2].f, "b-", label="8-cosine basis, min 20%")
    ax.plot(wl, designs[0.3].f, "g:", label="8-cosine basis, min 30%")
    ax.set_xlabel("wavelength (nm)")
    ax.set_ylabel("transmittance")
    ax.set_ylim(0, 1.05)
    ax.legend()
    ax.set_title("Vora-Value optimized filters")
    fig.tight_layout()
    fig.savefig(out / "filter_curves.png", dpi=150)
    print(f"wrote {out / 'filter_curves.png'}")
