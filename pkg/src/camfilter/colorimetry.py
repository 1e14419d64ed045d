"""Colorimetric evaluation of a filter+camera system.

Renders camera RGB and observer XYZ responses for every illuminant x
reflectance pair of a scene, fits a linear RGB->XYZ correction, converts
both sides to CIELAB against each sample's own illuminant white, and
summarizes the per-sample Euclidean color errors.

The rendered response is a plain Riemann sum on the common grid; the
wavelength-step factor is omitted because it cancels in the correction fit
and in the white-point normalization.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SingularMatrixError
from .spectral import SensorSet, require_same_grid
from .vora import _filter_values, filtered_vora_value

# CIELAB nonlinearity constants.
_LAB_DELTA = 6.0 / 29.0
_LAB_CUBE = _LAB_DELTA ** 3
_LAB_SLOPE = 1.0 / (3.0 * _LAB_DELTA ** 2)

_REFLECTANCE_MAX = 1.2  # measured reflectances may slightly exceed 1


@dataclass(frozen=True)
class Scene:
    """Illuminant and reflectance collections on one common grid."""

    illuminants: tuple
    reflectances: tuple

    def __post_init__(self):
        if not self.illuminants or not self.reflectances:
            raise ValueError("scene needs at least one illuminant and one reflectance")
        object.__setattr__(self, "illuminants", tuple(self.illuminants))
        object.__setattr__(self, "reflectances", tuple(self.reflectances))
        require_same_grid(*self.illuminants, *self.reflectances)
        for r in self.reflectances:
            if np.any(r.values > _REFLECTANCE_MAX + 1e-9):
                raise ValueError(f"reflectance exceeds {_REFLECTANCE_MAX}")

    @property
    def grid(self):
        return self.illuminants[0].grid

    def illuminant_matrix(self) -> np.ndarray:
        """(n_illuminants, n) stack of spectral powers."""
        return np.stack([s.values for s in self.illuminants])

    def reflectance_matrix(self) -> np.ndarray:
        """(n, n_reflectances) column stack."""
        return np.stack([s.values for s in self.reflectances], axis=1)


@dataclass(frozen=True)
class TriResponse:
    """Tristimulus rows, illuminant-major then reflectance-minor."""

    rows: np.ndarray
    n_illuminants: int
    n_reflectances: int

    def __post_init__(self):
        rows = np.asarray(self.rows, dtype=float)
        expected = self.n_illuminants * self.n_reflectances
        if rows.shape != (expected, 3):
            raise ValueError(f"expected {expected}x3 response rows, got {rows.shape}")
        if not np.all(np.isfinite(rows)):
            raise ValueError("responses must be finite")
        object.__setattr__(self, "rows", rows)


@dataclass(frozen=True)
class DeltaEStats:
    """Summary of per-sample CIELAB errors."""

    mean: float
    median: float
    p95: float
    p99: float
    max: float

    def as_row(self) -> tuple:
        return (self.mean, self.median, self.p95, self.p99, self.max)


def render_responses(sensors: SensorSet, scene: Scene) -> TriResponse:
    """S^T diag(L) r for every illuminant L and reflectance r."""
    require_same_grid(sensors, scene.illuminants[0])
    refl = scene.reflectance_matrix()
    blocks = [
        refl.T @ (sensors.matrix * light.values[:, None])
        for light in scene.illuminants
    ]
    return TriResponse(np.vstack(blocks), len(scene.illuminants), len(scene.reflectances))


def fit_correction(rgb: TriResponse, xyz: TriResponse, mode: str = "global") -> np.ndarray:
    """Least-squares 3x3 matrix M minimizing ||RGB M - XYZ||_F.

    ``mode='global'`` fits one matrix over all rows; ``'per-illuminant'``
    fits one per illuminant block and returns them stacked
    (n_illuminants, 3, 3).
    """
    if rgb.rows.shape != xyz.rows.shape:
        raise ValueError("RGB and XYZ row counts differ")
    if mode == "global":
        return _lstsq_correction(rgb.rows, xyz.rows)
    if mode == "per-illuminant":
        per = []
        for block_rgb, block_xyz in zip(_blocks(rgb), _blocks(xyz)):
            per.append(_lstsq_correction(block_rgb, block_xyz))
        return np.stack(per)
    raise ValueError(f"unknown correction mode {mode!r}")


def _lstsq_correction(rgb_rows, xyz_rows) -> np.ndarray:
    m, _, rank, _ = np.linalg.lstsq(rgb_rows, xyz_rows, rcond=None)
    if rank < 3:
        raise SingularMatrixError("RGB", "responses do not span 3 dimensions")
    return m


def _blocks(resp: TriResponse):
    size = resp.n_reflectances
    for i in range(resp.n_illuminants):
        yield resp.rows[i * size:(i + 1) * size]


def xyz_to_lab(xyz: np.ndarray, white: np.ndarray) -> np.ndarray:
    """CIE 1976 L*a*b* relative to the given white point(s).

    Accepts single vectors or row stacks; ``white`` broadcasts against
    ``xyz``. Uses the cube root above (6/29)^3 and the linear segment below.
    """
    xyz = np.asarray(xyz, dtype=float)
    white = np.asarray(white, dtype=float)
    if np.any(white <= 0):
        raise ValueError("white point components must be positive")
    t = xyz / white
    ft = np.where(t > _LAB_CUBE, np.cbrt(t), t * _LAB_SLOPE + 4.0 / 29.0)
    fx, fy, fz = ft[..., 0], ft[..., 1], ft[..., 2]
    lab = np.stack([116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)], axis=-1)
    return lab


def delta_e_stats(lab_est: np.ndarray, lab_ref: np.ndarray) -> DeltaEStats:
    """Euclidean CIELAB distances summarized as mean/median/95%/99%/max.

    Percentiles interpolate linearly between order statistics.
    """
    lab_est = np.asarray(lab_est, dtype=float)
    lab_ref = np.asarray(lab_ref, dtype=float)
    if lab_est.shape != lab_ref.shape:
        raise ValueError("Lab arrays must have identical shapes")
    d = np.linalg.norm(lab_est - lab_ref, axis=-1).ravel()
    return DeltaEStats(
        mean=float(np.mean(d)),
        median=float(np.median(d)),
        p95=float(np.percentile(d, 95)),
        p99=float(np.percentile(d, 99)),
        max=float(np.max(d)),
    )


def illuminant_whites(observer: SensorSet, scene: Scene) -> np.ndarray:
    """XYZ of each illuminant itself (perfect reflecting diffuser)."""
    return scene.illuminant_matrix() @ observer.matrix


class FilterEvaluator:
    """Caches the observer side of the pipeline to score many filters.

    The reference XYZ responses, per-sample whites, and reference Lab only
    depend on the observer and the scene, so scoring a sequence of filters
    (e.g. the iterates of one ascent run) re-renders just the camera side.
    """

    def __init__(self, Q: SensorSet, X: SensorSet, scene: Scene,
                 correction: str = "global"):
        self.grid = require_same_grid(Q, X, scene.illuminants[0])
        if correction not in ("global", "per-illuminant"):
            raise ValueError(f"unknown correction mode {correction!r}")
        self.Q = Q
        self.X = X
        self.scene = scene
        self.correction = correction
        self.xyz = render_responses(X, scene)
        self.whites = np.repeat(illuminant_whites(X, scene),
                                len(scene.reflectances), axis=0)
        self.lab_ref = xyz_to_lab(self.xyz.rows, self.whites)

    def evaluate(self, f) -> tuple[float, DeltaEStats]:
        values = _filter_values(f, self.grid.n)
        nu = filtered_vora_value(values, self.Q, self.X)

        effective = SensorSet(self.grid, values[:, None] * self.Q.matrix,
                              f"{self.Q.label}+filter")
        rgb = render_responses(effective, self.scene)
        m = fit_correction(rgb, self.xyz, mode=self.correction)
        if self.correction == "global":
            est = rgb.rows @ m
        else:
            est = np.vstack([block @ mi for block, mi in zip(_blocks(rgb), m)])
        lab_est = xyz_to_lab(est, self.whites)
        return nu, delta_e_stats(lab_est, self.lab_ref)


def evaluate_filter(f, Q: SensorSet, X: SensorSet, scene: Scene,
                    correction: str = "global") -> tuple[float, DeltaEStats]:
    """Vora-Value plus the color-error statistics of a filtered camera.

    Reference Lab comes from the true XYZ responses; estimated Lab from
    the linearly corrected filtered-camera RGB. Each sample is normalized
    by its own illuminant's white point.
    """
    return FilterEvaluator(Q, X, scene, correction).evaluate(f)
