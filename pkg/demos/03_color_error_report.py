"""
Color-measurement benchmark
===========================

How much does a designed filter help in practice? Render camera RGB and
observer XYZ for every illuminant x reflectance pair of a scene, fit one
global 3x3 correction, convert to CIELAB against each illuminant's own
white, and summarize the per-sample errors.

The table compares the bare camera against the Luther-condition filter
(least-squares fit to the observer curves) and the Vora-Value filter, both
unconstrained and under smooth/bounded constraints.

Run:  python demos/03_color_error_report.py
"""
import numpy as np

from camfilter import (AscentConfig, BoxBounds, FilterEvaluator, cosine_basis,
                       default_initial_filter, gradient_ascent_unconstrained,
                       luther_filter, projected_gradient_ascent)
from camfilter.dataio import load_cie1931_cmf
from camfilter.synth import synthetic_camera, synthetic_scene

observer = load_cie1931_cmf()
camera = synthetic_camera("demo_cam")
scene = synthetic_scene(n_illuminants=102, n_reflectances=1995)
print(f"scene: {len(scene.illuminants)} illuminants x "
      f"{len(scene.reflectances)} reflectances = "
      f"{len(scene.illuminants) * len(scene.reflectances)} samples")

evaluator = FilterEvaluator(camera, observer, scene)
basis = cosine_basis(camera.grid.n, 8)
bounds = BoxBounds(0.2, 1.0)

rows = [("baseline", default_initial_filter(camera.grid))]

sol = luther_filter(camera, observer)
rows.append(("luther (free)", sol.f))
filt, _ = gradient_ascent_unconstrained(
    camera, observer, default_initial_filter(camera.grid), AscentConfig())
rows.append(("vora (free)", filt))

sol_c = luther_filter(camera, observer, constraints=(basis, bounds))
rows.append(("luther (20-100%)", sol_c.f))
c0 = np.zeros(8)
c0[0] = 1.0
filt_c, _ = projected_gradient_ascent(camera, observer, basis, c0, bounds,
                                      AscentConfig())
rows.append(("vora (20-100%)", filt_c))

print(f"\n{'method':<18} {'vora':>7} {'mean':>7} {'median':>7} "
      f"{'95%':>7} {'99%':>7} {'max':>8}")
for name, filt in rows:
    nu, stats = evaluator.evaluate(filt)
    mean, median, p95, p99, dmax = stats.as_row()
    print(f"{name:<18} {nu:7.4f} {mean:7.3f} {median:7.3f} "
          f"{p95:7.3f} {p99:7.3f} {dmax:8.3f}")
