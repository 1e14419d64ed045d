"""Subspace projectors, the Vora-Value, and its ascent direction.

The Vora-Value of two sensor sets Q and X is

    nu(Q, X) = trace(P{Q} P{X}) / trace(P{X}),

where P{A} = A (A^T A)^{-1} A^T projects onto the column space of A. It
measures, on a 0..1 scale, how similar the two spanned subspaces are: 1
when they coincide, 0 when they are orthogonal. For trichromatic sensors
trace(P{X}) = 3.

Placing a transmissive filter f in front of a camera turns its
sensitivities Q into diag(f) Q, so filter design becomes maximizing
nu(diag(f) Q, X) over f. The ascent direction used by the optimizer is

    d_i = [(I - P{FQ}) P{X} P{FQ} F^{-1}]_ii,     F = diag(f),

which is proportional to the exact gradient of nu: differentiating the
normalized objective gives exactly (2/3) d. The constant is irrelevant
under a line search, so d is used as-is; the finite-difference oracle in
this module lets tests confirm the factor numerically.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidFilterError, NearSingularFilterError, SingularMatrixError
from .spectral import FilterTransmittance, SensorSet, _readonly, require_same_grid, RANK_RTOL

# Smallest transmittance at which diag(f)^{-1} is still used; the
# optimizer keeps iterates at or above this floor.
EPS_F = 1e-4

# Central-difference step on unit-scale transmittances: balances
# truncation against double-precision roundoff.
FD_STEP = 1e-6


@dataclass(frozen=True)
class Projector:
    """Orthogonal projection matrix onto a sensor set's column space."""

    P: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "P", _readonly(self.P))

    def apply(self, v: np.ndarray) -> np.ndarray:
        return self.P @ v

    @property
    def trace(self) -> float:
        return float(np.trace(self.P))


def _as_matrix_label(A, default_label: str) -> tuple[np.ndarray, str]:
    if isinstance(A, SensorSet):
        return A.matrix, A.label
    return np.asarray(A, dtype=float), default_label


def _orthonormal_columns(matrix: np.ndarray, label: str) -> np.ndarray:
    """Orthonormal basis for the column space; rejects rank deficiency."""
    u, s, _ = np.linalg.svd(matrix, full_matrices=False)
    if s[0] == 0.0 or s[-1] <= RANK_RTOL * s[0]:
        raise SingularMatrixError(label, "columns are not linearly independent")
    return u


def projector(A, label: str = "matrix") -> Projector:
    """P{A} = A (A^T A)^{-1} A^T, built from an orthonormal column basis.

    The orthogonal-decomposition route gives the identical projector with
    far better conditioning than the literal normal-equations formula.
    """
    matrix, label = _as_matrix_label(A, label)
    if matrix.ndim != 2 or matrix.shape[0] < matrix.shape[1]:
        raise ValueError(f"expected a tall n x m matrix, got {matrix.shape}")
    u = _orthonormal_columns(matrix, label)
    return Projector(u @ u.T)


def _subspace_overlap(Ua: np.ndarray, Ub: np.ndarray) -> float:
    # trace(P_a P_b) = ||Ua^T Ub||_F^2 for orthonormal bases.
    w = Ua.T @ Ub
    return float(np.sum(w * w))


def vora_value(Q: SensorSet, X: SensorSet) -> float:
    """trace(P{Q} P{X}) / trace(P{X}) in [0, 1]."""
    require_same_grid(Q, X)
    uq = _orthonormal_columns(Q.matrix, Q.label)
    ux = _orthonormal_columns(X.matrix, X.label)
    return _subspace_overlap(uq, ux) / ux.shape[1]


def _filter_values(f, n: int) -> np.ndarray:
    if isinstance(f, FilterTransmittance):
        values = f.f
    else:
        values = np.asarray(f, dtype=float)
    if values.shape != (n,):
        raise ValueError(f"filter must have {n} samples, got {values.shape}")
    return values


def filtered_vora_value(f, Q: SensorSet, X: SensorSet) -> float:
    """Vora-Value of the effective sensitivities diag(f) Q against X."""
    grid = require_same_grid(Q, X)
    if isinstance(f, FilterTransmittance):
        require_same_grid(f, Q)
    values = _filter_values(f, grid.n)
    if np.any(values <= 0.0):
        raise InvalidFilterError("filter transmittances must be strictly positive")
    uq = _orthonormal_columns(values[:, None] * Q.matrix, f"diag(f)*{Q.label}")
    ux = _orthonormal_columns(X.matrix, X.label)
    return _subspace_overlap(uq, ux) / ux.shape[1]


def vora_gradient_f(f, Q: SensorSet, X: SensorSet) -> np.ndarray:
    """Ascent direction vecd((I - P{FQ}) P{X} P{FQ} F^{-1}) in filter space.

    Proportional to the gradient of the normalized Vora-Value (factor 2/3,
    see module docstring); zero exactly when span(FQ) already contains
    span(X).
    """
    grid = require_same_grid(Q, X)
    if isinstance(f, FilterTransmittance):
        require_same_grid(f, Q)
    values = _filter_values(f, grid.n)
    if np.any(values < EPS_F):
        raise NearSingularFilterError(
            f"filter transmittance below floor {EPS_F:g}; diag(f)^-1 ill-conditioned"
        )
    ux = _orthonormal_columns(X.matrix, X.label)
    return _direction_from_values(values, Q.matrix, ux, Q.label)


def _direction_from_values(values: np.ndarray, Qm: np.ndarray,
                           ux: np.ndarray, label: str) -> np.ndarray:
    uq = _orthonormal_columns(values[:, None] * Qm, f"diag(f)*{label}")
    P = uq @ uq.T
    SP = ux @ (ux.T @ P)
    G = SP - P @ SP  # (I - P) P{X} P
    return np.diag(G) / values


def _vora_from_values(values: np.ndarray, Qm: np.ndarray,
                      ux: np.ndarray, label: str) -> float:
    uq = _orthonormal_columns(values[:, None] * Qm, f"diag(f)*{label}")
    return _subspace_overlap(uq, ux) / ux.shape[1]


def vora_gradient_c(B: np.ndarray, c: np.ndarray, Q: SensorSet, X: SensorSet) -> np.ndarray:
    """Chain rule through f = B c: returns B^T grad_f."""
    B = np.asarray(B, dtype=float)
    c = np.asarray(c, dtype=float)
    return B.T @ vora_gradient_f(B @ c, Q, X)


def fd_gradient_oracle(objective, point: np.ndarray, h: float = FD_STEP) -> np.ndarray:
    """Central finite differences of a scalar objective, component by component.

    Deliberately independent of any analytic gradient code so it can serve
    as a test oracle for it.
    """
    point = np.asarray(point, dtype=float)
    grad = np.empty_like(point)
    for i in range(point.size):
        bumped = point.copy()
        bumped[i] = point[i] + h
        hi = objective(bumped)
        bumped[i] = point[i] - h
        lo = objective(bumped)
        grad[i] = (hi - lo) / (2.0 * h)
    return grad
