"""Deterministic synthetic cameras and scenes.

Stand-ins for the measured datasets (camera sensitivity database,
illuminant/reflectance collections) used when those files are not
available locally: smooth Gaussian-mixture camera channels, blackbody /
LED / fluorescent-style illuminants, and bounded smooth reflectances.
Everything is seeded, so repeated calls reproduce identical data.
"""

from __future__ import annotations

import numpy as np

from .colorimetry import Scene
from .spectral import DEFAULT_GRID, SensorSet, SpectralGrid, Spectrum, cosine_basis

_C2_NM_K = 1.4388e7  # second radiation constant in nm*K


def _gauss(wl, center, width):
    return np.exp(-0.5 * ((wl - center) / width) ** 2)


def synthetic_camera(label: str = "synthcam",
                     red=(600.0, 34.0), green=(535.0, 46.0), blue=(455.0, 30.0),
                     red_blue_leak: float = 0.06,
                     grid: SpectralGrid = DEFAULT_GRID) -> SensorSet:
    """Three smooth overlapping channels shaped like typical CMOS curves."""
    wl = grid.wavelengths()
    r = _gauss(wl, *red) + red_blue_leak * _gauss(wl, 445.0, 18.0)
    g = _gauss(wl, *green)
    b = _gauss(wl, *blue) + 0.02 * _gauss(wl, 545.0, 30.0)
    matrix = np.stack([r / r.max(), g / g.max(), b / b.max()], axis=1)
    return SensorSet(grid, matrix, label)


def synthetic_camera_set(count: int = 28, seed: int = 11,
                         grid: SpectralGrid = DEFAULT_GRID) -> list:
    """A database-sized family of distinct plausible cameras."""
    rng = np.random.default_rng(seed)
    cameras = []
    for i in range(count):
        cameras.append(synthetic_camera(
            label=f"synthcam_{i:02d}",
            red=(rng.uniform(585.0, 615.0), rng.uniform(28.0, 44.0)),
            green=(rng.uniform(520.0, 550.0), rng.uniform(38.0, 56.0)),
            blue=(rng.uniform(445.0, 472.0), rng.uniform(24.0, 38.0)),
            red_blue_leak=rng.uniform(0.0, 0.12),
            grid=grid,
        ))
    return cameras


def planckian_illuminant(temperature_k: float,
                         grid: SpectralGrid = DEFAULT_GRID) -> Spectrum:
    """Blackbody relative spectral power, normalized to unit peak."""
    wl = grid.wavelengths()
    power = wl ** -5.0 / np.expm1(_C2_NM_K / (wl * temperature_k))
    return Spectrum(grid, power / power.max())


def synthetic_scene(n_illuminants: int = 102, n_reflectances: int = 1995,
                    seed: int = 7, grid: SpectralGrid = DEFAULT_GRID) -> Scene:
    """A measurement-campaign-sized scene of varied lights and surfaces.

    Roughly 40% blackbody radiators across a wide temperature range, 30%
    LED-style Gaussian mixtures, 30% fluorescent-style spiky sources;
    reflectances are smooth bounded curves spanning neutral to saturated.
    """
    rng = np.random.default_rng(seed)
    wl = grid.wavelengths()

    illuminants = []
    n_planck = max(1, int(0.4 * n_illuminants))
    temperatures = np.geomspace(2200.0, 12000.0, n_planck)
    for t in temperatures:
        illuminants.append(planckian_illuminant(float(t), grid))
    n_led = max(0, int(0.3 * n_illuminants))
    for _ in range(n_led):
        blue_peak = _gauss(wl, rng.uniform(440.0, 465.0), rng.uniform(8.0, 14.0))
        phosphor = _gauss(wl, rng.uniform(540.0, 590.0), rng.uniform(45.0, 80.0))
        power = blue_peak + rng.uniform(0.6, 1.6) * phosphor
        illuminants.append(Spectrum(grid, power / power.max()))
    while len(illuminants) < n_illuminants:
        base = 0.15 + 0.1 * rng.random() * (wl - wl[0]) / (wl[-1] - wl[0])
        for _ in range(rng.integers(2, 5)):
            base = base + rng.uniform(0.3, 1.0) * _gauss(
                wl, rng.uniform(405.0, 630.0), rng.uniform(4.0, 12.0))
        illuminants.append(Spectrum(grid, base / base.max()))
    illuminants = illuminants[:n_illuminants]

    # Smooth reflectances: low-order cosine series, clipped into the
    # physically observed band (measured charts can slightly exceed 1).
    order = 7
    basis = cosine_basis(grid.n, order)
    amplitudes = 0.28 / (1.0 + np.arange(order))
    coeffs = rng.normal(size=(n_reflectances, order)) * amplitudes
    coeffs[:, 0] = rng.uniform(0.08, 0.85, size=n_reflectances)
    curves = np.clip(coeffs @ basis.T, 0.02, 1.15)
    reflectances = [Spectrum(grid, curve) for curve in curves]

    return Scene(tuple(illuminants), tuple(reflectances))
