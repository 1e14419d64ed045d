"""
Sweeping a camera database
==========================

The gap between the Luther-condition baseline and the Vora-Value design
varies a lot from camera to camera. This sweep optimizes an unconstrained
filter of each kind for every camera in a database and plots the three
scores per camera, sorted by native value.

Uses the bundled 28-camera synthetic set; point CAMFILTER_DATA_DIR at a
directory with cameras/*.csv to sweep measured sensitivities instead
(see README). Writes demos/output/sweep.csv and sweep.png.

Run:  python demos/04_camera_sweep.py
"""
import os
from pathlib import Path

import numpy as np

from camfilter import (AscentConfig, default_initial_filter, filtered_vora_value,
                       gradient_ascent_unconstrained, luther_filter, vora_value)
from camfilter.dataio import load_camera_database, load_cie1931_cmf
from camfilter.synth import synthetic_camera_set

out = Path(__file__).parent / "output"
out.mkdir(exist_ok=True)

data_dir = Path(os.environ.get("CAMFILTER_DATA_DIR", "data")) / "cameras"
if data_dir.is_dir() and any(data_dir.glob("*.csv")):
    cameras = load_camera_database(data_dir)
    print(f"swept database: {data_dir} ({len(cameras)} cameras)")
else:
    cameras = synthetic_camera_set(count=28)
    print(f"measured database not found; using {len(cameras)} synthetic cameras")

observer = load_cie1931_cmf()
rows = []
for camera in cameras:
    native = vora_value(camera, observer)
    _, trace = gradient_ascent_unconstrained(
        camera, observer, default_initial_filter(camera.grid), AscentConfig())
    sol = luther_filter(camera, observer)
    rows.append((camera.label, native, filtered_vora_value(sol.f, camera, observer),
                 trace.final.vora_value))
    print(f"  {camera.label:<16} native {native:.4f}  "
          f"luther {rows[-1][2]:.4f}  vora {rows[-1][3]:.4f}")

rows.sort(key=lambda r: r[1])
with open(out / "sweep.csv", "w", encoding="utf-8") as fh:
    fh.write("camera,vora_native,vora_luther,vora_vora\n")
    for label, native, lut, vor in rows:
        fh.write(f"{label},{native:.6f},{lut:.6f},{vor:.6f}\n")

native = np.array([r[1] for r in rows])
lut = np.array([r[2] for r in rows])
vor = np.array([r[3] for r in rows])
print(f"\nmeans: native {native.mean():.4f}, luther {lut.mean():.4f}, "
      f"vora {vor.mean():.4f}")

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    print("matplotlib not installed; skipping the plot")
else:
    idx = np.arange(len(rows))
    fig, ax = plt.subplots(figsize=(8, 4))
    ax.plot(idx, native, "ko-", ms=3, label="native")
    ax.plot(idx, lut, "gs-", ms=3, label="luther filter")
    ax.plot(idx, vor, "r^-", ms=3, label="vora filter")
    ax.set_xlabel("camera (sorted by native value)")
    ax.set_ylabel("Vora-Value")
    ax.legend()
    fig.tight_layout()
    fig.savefig(out / "sweep.png", dpi=150)
    print(f"wrote {out / 'sweep.png'}")
