"""Shared spectral data model.

Wavelength grids, sampled spectra, sensor sensitivity matrices, filter
transmittances, and the cosine basis used to parameterize smooth filters.
Everything downstream (projectors, optimization, colorimetry) operates on
these types. All values are immutable after construction and all functions
here are pure, so they are safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import GridMismatchError, SpectralRangeError

# Smallest singular value relative to the largest for a sensitivity matrix
# to count as full rank. Scale free, robust on 31x3 data.
RANK_RTOL = 1e-10

# Wavelengths closer than this (nm) are treated as coincident samples.
_COINCIDENT_NM = 1e-9


def _readonly(values, dtype=float) -> np.ndarray:
    arr = np.array(values, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class SpectralGrid:
    """Uniform wavelength sampling: ``start, start+step, ..., end`` in nm."""

    start: float
    end: float
    step: float

    def __post_init__(self):
        if not (self.start < self.end):
            raise ValueError(f"grid start {self.start} must be < end {self.end}")
        if not (self.step > 0):
            raise ValueError(f"grid step {self.step} must be positive")
        span = (self.end - self.start) / self.step
        if abs(span - round(span)) > 1e-9:
            raise ValueError(
                f"grid {self.start}:{self.step}:{self.end} does not divide evenly"
            )

    @property
    def n(self) -> int:
        return int(round((self.end - self.start) / self.step)) + 1

    def wavelengths(self) -> np.ndarray:
        return self.start + self.step * np.arange(self.n)

    def __str__(self):
        return f"{self.start:g}:{self.step:g}:{self.end:g}nm"


#: Grid every spectral quantity is resampled to: 400-700 nm at 10 nm, n=31.
DEFAULT_GRID = SpectralGrid(400.0, 700.0, 10.0)


@dataclass(frozen=True)
class Spectrum:
    """One sampled spectral curve (sensitivity, transmittance, or power)."""

    grid: SpectralGrid
    values: np.ndarray

    def __post_init__(self):
        values = _readonly(self.values)
        if values.ndim != 1 or values.size != self.grid.n:
            raise ValueError(
                f"expected {self.grid.n} samples on grid {self.grid}, got {values.shape}"
            )
        if not np.all(np.isfinite(values)):
            raise ValueError("spectrum values must be finite")
        if np.any(values < 0):
            raise ValueError("spectrum values must be nonnegative")
        object.__setattr__(self, "values", values)


@dataclass(frozen=True)
class SensorSet:
    """Trichromatic sensitivity matrix, one column per channel.

    Holds either camera RGB sensitivities or observer color matching
    functions. Rank is not enforced at construction (use
    :func:`full_rank_check`); operations that mathematically require full
    rank raise ``SingularMatrixError`` naming the offending label.
    """

    grid: SpectralGrid
    matrix: np.ndarray
    label: str = "sensor"

    def __post_init__(self):
        matrix = _readonly(self.matrix)
        if matrix.ndim != 2 or matrix.shape != (self.grid.n, 3):
            raise ValueError(
                f"sensor matrix must be {self.grid.n}x3, got {matrix.shape}"
            )
        if not np.all(np.isfinite(matrix)):
            raise ValueError(f"sensor matrix {self.label!r} has non-finite entries")
        object.__setattr__(self, "matrix", matrix)

    def recombined(self, m3: np.ndarray, label: str | None = None) -> "SensorSet":
        """Right-multiply by an invertible 3x3 matrix (same subspace)."""
        return SensorSet(self.grid, self.matrix @ np.asarray(m3, dtype=float),
                         label if label is not None else self.label)


@dataclass(frozen=True)
class FilterTransmittance:
    """Per-wavelength transmittance f with 0 < f_i <= 1.

    Strict positivity keeps diag(f) invertible; physical filters cannot
    exceed unit transmission.
    """

    grid: SpectralGrid
    f: np.ndarray

    def __post_init__(self):
        f = _readonly(self.f)
        if f.ndim != 1 or f.size != self.grid.n:
            raise ValueError(f"filter must have {self.grid.n} samples, got {f.shape}")
        if not np.all(np.isfinite(f)):
            raise ValueError("filter transmittance must be finite")
        if np.any(f <= 0) or np.any(f > 1.0):
            raise ValueError("filter transmittance must satisfy 0 < f <= 1")
        object.__setattr__(self, "f", f)

    @classmethod
    def uniform(cls, grid: SpectralGrid, value: float = 1.0) -> "FilterTransmittance":
        return cls(grid, np.full(grid.n, float(value)))


@dataclass(frozen=True)
class BasisExpansion:
    """Filter written as f = B c over a fixed smooth basis."""

    B: np.ndarray
    c: np.ndarray
    k: int = field(init=False)

    def __post_init__(self):
        B = _readonly(self.B)
        c = _readonly(self.c)
        if B.ndim != 2 or c.ndim != 1 or B.shape[1] != c.size:
            raise ValueError(f"basis {B.shape} and coefficients {c.shape} disagree")
        n, k = B.shape
        if k > n:
            raise ValueError(f"basis size k={k} exceeds sample count n={n}")
        smin, smax = _extreme_singular_values(B)
        if smin <= RANK_RTOL * smax:
            raise ValueError("basis columns must be linearly independent")
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "k", k)

    def filter_values(self) -> np.ndarray:
        return self.B @ self.c


def _extreme_singular_values(matrix) -> tuple[float, float]:
    s = np.linalg.svd(np.asarray(matrix, dtype=float), compute_uv=False)
    return float(s[-1]), float(s[0])


def full_rank_check(sensors: SensorSet) -> bool:
    """True iff the smallest singular value exceeds RANK_RTOL x the largest."""
    smin, smax = _extreme_singular_values(sensors.matrix)
    return smin > RANK_RTOL * smax


def cosine_basis(n: int, k: int) -> np.ndarray:
    """First ``k`` half-sample cosine basis vectors on ``n`` points.

    Column j (0-indexed) samples cos(pi * j * (i - 1/2) / n) at i = 1..n,
    so column 0 is the constant vector and the columns are mutually
    orthogonal (unnormalized).
    """
    if k < 1 or k > n:
        raise ValueError(f"basis size must satisfy 1 <= k <= n, got k={k}, n={n}")
    i = np.arange(1, n + 1) - 0.5
    j = np.arange(k)
    return np.cos(np.pi * np.outer(i, j) / n)


def resample(spectrum: Spectrum, target: SpectralGrid) -> Spectrum:
    """Piecewise-linear resampling onto ``target``.

    Values at wavelengths shared with the source grid are copied exactly,
    which makes resampling idempotent. Extrapolation is refused.
    """
    src = spectrum.grid
    if src == target:
        return Spectrum(target, spectrum.values)
    if (target.start < src.start - _COINCIDENT_NM
            or target.end > src.end + _COINCIDENT_NM):
        raise SpectralRangeError(
            f"target grid {target} reaches outside source grid {src}"
        )

    values = spectrum.values
    # Fractional source index of every target wavelength.
    pos = (target.wavelengths() - src.start) / src.step
    lo = np.clip(np.floor(pos).astype(int), 0, src.n - 2)
    frac = pos - lo

    out = values[lo] * (1.0 - frac) + values[lo + 1] * frac
    # Copy coincident samples exactly rather than trusting the lerp rounding.
    exact_lo = np.abs(frac) * src.step < _COINCIDENT_NM
    exact_hi = np.abs(1.0 - frac) * src.step < _COINCIDENT_NM
    out[exact_lo] = values[lo[exact_lo]]
    out[exact_hi] = values[lo[exact_hi] + 1]
    return Spectrum(target, out)


def require_same_grid(*objects) -> SpectralGrid:
    """Return the common grid of the arguments or raise GridMismatchError."""
    grids = {obj.grid for obj in objects}
    if len(grids) != 1:
        detail = ", ".join(sorted(str(g) for g in grids))
        raise GridMismatchError(f"grids do not match: {detail}")
    return next(iter(grids))
