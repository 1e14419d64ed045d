"""
Subspace similarity basics
==========================

A camera's three spectral sensitivity curves span a 3-dimensional subspace
of the 31-dimensional space of sampled spectra, and so do the observer's
color matching functions. The Vora-Value scores how well those two
subspaces agree, on a 0..1 scale, independently of which basis either
side is expressed in.

Run:  python demos/01_subspace_similarity.py
"""
import numpy as np

from camfilter import SensorSet, full_rank_check, projector, vora_value
from camfilter.dataio import load_cie1931_cmf
from camfilter.synth import synthetic_camera

observer = load_cie1931_cmf()
print(f"observer: {observer.label}, grid {observer.grid}, "
      f"full rank: {full_rank_check(observer)}")

# A subspace compared with itself scores 1.
print(f"\nvora(X, X)           = {vora_value(observer, observer):.6f}")

# A camera-shaped sensor set lands somewhere below 1.
camera = synthetic_camera("demo_cam")
nu = vora_value(camera, observer)
print(f"vora(camera, X)      = {nu:.6f}")

# Sensitivities orthogonal to the observer subspace score 0.
rng = np.random.default_rng(0)
p = projector(observer).P
complement = (np.eye(31) - p) @ rng.normal(size=(31, 3))
worst = SensorSet(observer.grid, complement, "orthogonal")
print(f"vora(orthogonal, X)  = {vora_value(worst, observer):.6f}")

# The score only sees the subspace: any invertible recombination of the
# observer channels (e.g. switching from XYZ to cone-like primaries)
# leaves it untouched.
print("\nrecombining the observer channels:")
for trial in range(3):
    m = rng.normal(size=(3, 3)) + 2 * np.eye(3)
    recombined = observer.recombined(m, f"recombined_{trial}")
    print(f"  trial {trial}: vora = {vora_value(camera, recombined):.12f}")
print(f"  original: vora = {nu:.12f}")

# Projector sanity: symmetric, idempotent, trace equals the subspace rank.
pp = projector(camera)
print(f"\nprojector trace      = {pp.trace:.6f} (rank 3)")
print(f"max |P - P^T|        = {np.max(np.abs(pp.P - pp.P.T)):.2e}")
print(f"max |P P - P|        = {np.max(np.abs(pp.P @ pp.P - pp.P)):.2e}")
