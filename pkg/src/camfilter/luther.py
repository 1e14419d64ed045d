"""Luther-condition filter baseline.

Solves for a transmittance f and a 3x3 correction M so that the filtered
camera sensitivities are as close as possible, in the least-squares sense,
to the target color matching functions:

    minimize  || diag(f) Q M - X ||_F

by alternating two closed-form updates: M given f (linear least squares)
and f given M (per-wavelength scalar ratio). The bilinear objective is
scale ambiguous (f/a with a*M is equivalent), so unconstrained solutions
are normalized to unit peak transmittance before being returned.

Unlike the Vora-Value objective, this fit depends on which basis of the
human visual subspace is used as the target: recombining X changes the
solved-for filter.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SingularMatrixError
from .optimize import _project_with
from .spectral import FilterTransmittance, SensorSet, full_rank_check, require_same_grid
from .vora import EPS_F

CONVERGED = "converged"
ITERATION_CAP = "iteration-cap"


@dataclass(frozen=True)
class LutherSolution:
    """Filter, linear correction, and the residual path that produced them."""

    f: FilterTransmittance
    M: np.ndarray
    residual: float
    residuals: np.ndarray  # accepted-iteration residuals, non-increasing
    iterations: int
    status: str


def _fit_correction_matrix(A: np.ndarray, X: np.ndarray, label: str) -> np.ndarray:
    solution, _, rank, _ = np.linalg.lstsq(A, X, rcond=None)
    if rank < A.shape[1]:
        raise SingularMatrixError(label, "least-squares system is rank deficient")
    return solution


def luther_filter(Q: SensorSet, X: SensorSet, constraints=None,
                  tol: float = 1e-8, max_iters: int = 5000,
                  f_floor: float = EPS_F) -> LutherSolution:
    """Alternating least squares for the Luther-condition filter.

    ``constraints`` is an optional ``(B, BoxBounds)`` pair; when given, each
    filter update is projected onto the span of B intersected with the box,
    matching the constraint set of the Vora-Value optimizer. Iteration
    stops when the relative residual improvement drops below ``tol`` (the
    recorded residual sequence is non-increasing by construction).
    """
    grid = require_same_grid(Q, X)
    for sensors in (Q, X):
        if not full_rank_check(sensors):
            raise SingularMatrixError(sensors.label)

    basis = pinv = bounds = None
    if constraints is not None:
        basis, bounds = constraints
        basis = np.asarray(basis, dtype=float)
        pinv = np.linalg.pinv(basis)

    Qm, Xm = Q.matrix, X.matrix
    f = np.ones(grid.n)
    M = _fit_correction_matrix(Qm, Xm, Q.label)
    res = float(np.linalg.norm(f[:, None] * (Qm @ M) - Xm))
    residuals = [res]

    status = ITERATION_CAP
    iterations = 0
    for iterations in range(1, max_iters + 1):
        M_new = _fit_correction_matrix(f[:, None] * Qm, Xm, Q.label)
        U = Qm @ M_new
        uu = np.sum(U * U, axis=1)
        ux = np.sum(U * Xm, axis=1)
        # Per-wavelength exact coordinate minimizer; rows with no signal
        # keep their previous transmittance.
        f_new = np.where(uu > 1e-300, ux / np.where(uu > 1e-300, uu, 1.0), f)
        f_new = np.maximum(f_new, f_floor)
        if bounds is not None:
            f_new = np.minimum(f_new, bounds.f_max)
            c = _project_with(pinv @ f_new, basis, pinv, bounds)
            f_new = np.maximum(basis @ c, f_floor)

        res_new = float(np.linalg.norm(f_new[:, None] * (Qm @ M_new) - Xm))
        if res_new > res:
            # The basis projection can overshoot; keep the best state.
            status = CONVERGED
            break
        f, M, improvement = f_new, M_new, res - res_new
        res = res_new
        residuals.append(res)
        if improvement <= tol * max(res, 1e-30):
            status = CONVERGED
            break

    peak = float(np.max(f))
    if peak > 1.0:
        # Scale ambiguity of the bilinear objective: fold the peak into M.
        f = f / peak
        M = M * peak
    f = np.clip(f, f_floor, 1.0)

    return LutherSolution(
        f=FilterTransmittance(grid, f),
        M=M,
        residual=res,
        residuals=np.array(residuals),
        iterations=iterations,
        status=status,
    )
