"""Gradient ascent on the filtered Vora-Value.

Two variants share the same backtracking line search:

* :func:`gradient_ascent_unconstrained` climbs in raw filter space,
  flooring iterates so diag(f) stays invertible; the returned filter is
  normalized by its maximum (which leaves the Vora-Value unchanged) so it
  is physically interpretable.
* :func:`projected_gradient_ascent` climbs in the coefficient space of a
  smooth basis f = B c and maps every trial point back onto the
  basis + box feasible set, so all iterates respect the transmittance
  bounds f_min <= f <= f_max.

Runs are deterministic: identical inputs and config produce bit-identical
traces.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ProjectionFailureError
from .spectral import FilterTransmittance, SensorSet, SpectralGrid, require_same_grid
from .vora import EPS_F, _direction_from_values, _orthonormal_columns, _vora_from_values

# Line-search trial steps below this count as a stall.
T_MIN = 1e-14

# Tolerances for the basis+box projection.
_FEAS_TOL = 1e-8
_FEAS_HARD_TOL = 1e-6
_PROJECT_MAX_ITERS = 100

# Projected-step improvement below this, ten iterations running, means the
# run has converged against an active bound.
_STAGNATION_EPS = 1e-12
_STAGNATION_RUN = 10

CONVERGED = "converged"
ITERATION_CAP = "iteration-cap"
STALLED = "stalled"


@dataclass(frozen=True)
class AscentConfig:
    """Stopping rule and line-search constants.

    eta is the threshold on max|gradient component|; armijo_c the
    sufficient-increase fraction; backtrack_beta the geometric step
    shrink; t0 the first trial step of every iteration; f_floor the
    smallest transmittance an iterate may reach. extra_starts optionally
    adds user-supplied starting filters (multi-start is off by default so
    runs stay reproducible).
    """

    eta: float = 1e-6
    max_iters: int = 10_000
    armijo_c: float = 1e-4
    backtrack_beta: float = 0.5
    t0: float = 1.0
    f_floor: float = EPS_F
    extra_starts: tuple = ()

    def __post_init__(self):
        if not self.eta > 0:
            raise ValueError("eta must be positive")
        if not 0 < self.armijo_c < 0.5:
            raise ValueError("armijo_c must be in (0, 0.5)")
        if not 0 < self.backtrack_beta < 1:
            raise ValueError("backtrack_beta must be in (0, 1)")
        if not self.t0 > 0:
            raise ValueError("t0 must be positive")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if self.f_floor < EPS_F:
            raise ValueError(f"f_floor must be >= {EPS_F:g}")


@dataclass(frozen=True)
class BoxBounds:
    """Transmittance box f_min <= f <= f_max.

    f_min == f_max is tolerated (a degenerate box whose only member is the
    uniform filter).
    """

    f_min: float
    f_max: float

    def __post_init__(self):
        if not (0.0 <= self.f_min <= self.f_max <= 1.0):
            raise ValueError(
                f"need 0 <= f_min <= f_max <= 1, got [{self.f_min}, {self.f_max}]"
            )

    def violation(self, f: np.ndarray) -> float:
        low = float(np.max(self.f_min - f, initial=0.0))
        high = float(np.max(f - self.f_max, initial=0.0))
        return max(low, high)


@dataclass(frozen=True)
class IterationRecord:
    iteration: int
    vora_value: float
    step: float
    grad_max: float
    filter_values: np.ndarray


@dataclass
class AscentTrace:
    """Per-iteration history of one ascent run."""

    records: list = field(default_factory=list)
    status: str = ITERATION_CAP

    def append(self, iteration, vora_value, step, grad_max, filter_values):
        self.records.append(IterationRecord(
            iteration, float(vora_value), float(step), float(grad_max),
            np.array(filter_values, dtype=float),
        ))

    @property
    def final(self) -> IterationRecord:
        return self.records[-1]

    def vora_values(self) -> np.ndarray:
        return np.array([r.vora_value for r in self.records])

    def vora_at(self, iteration: int) -> float:
        """Vora-Value at an iteration index (holds the final value after
        the run stopped)."""
        idx = min(iteration, len(self.records) - 1)
        return self.records[idx].vora_value

    def write_csv(self, path):
        with open(path, "w", encoding="utf-8") as out:
            out.write("iter,vora_value,step,grad_max\n")
            for r in self.records:
                out.write(f"{r.iteration},{r.vora_value:.17g},"
                          f"{r.step:.17g},{r.grad_max:.17g}\n")


def default_initial_filter(grid: SpectralGrid) -> FilterTransmittance:
    """Neutral all-ones start: its Vora-Value is the unfiltered baseline."""
    return FilterTransmittance.uniform(grid, 1.0)


def backtracking_step(f, direction, objective, config: AscentConfig) -> float:
    """Largest t in {t0 * beta^m} meeting the sufficient-increase test.

    Accepts t when objective(f + t d) >= objective(f) + armijo_c * t * ||d||^2.
    Returns 0.0 when no step above T_MIN qualifies (stall signal).
    """
    f = np.asarray(f, dtype=float)
    d = np.asarray(direction, dtype=float)
    d2 = float(d @ d)
    if d2 == 0.0:
        return 0.0
    base = objective(f)
    t = config.t0
    while t > T_MIN:
        if objective(f + t * d) >= base + config.armijo_c * t * d2:
            return t
        t *= config.backtrack_beta
    return 0.0


def _start_values(f0, n: int, floor: float) -> np.ndarray:
    values = f0.f if isinstance(f0, FilterTransmittance) else np.asarray(f0, dtype=float)
    if values.shape != (n,):
        raise ValueError(f"initial filter must have {n} samples, got {values.shape}")
    if np.any(values <= floor):
        raise ValueError(f"initial filter must be strictly above the floor {floor:g}")
    return values.astype(float)


def _ascend_from(values, Qm, ux, label, config) -> AscentTrace:
    floor = config.f_floor

    def objective(fv):
        return _vora_from_values(np.maximum(fv, floor), Qm, ux, label)

    trace = AscentTrace()
    f = values.copy()
    nu = objective(f)
    g = _direction_from_values(f, Qm, ux, label)
    gmax = float(np.max(np.abs(g)))
    trace.append(0, nu, 0.0, gmax, f)

    for k in range(1, config.max_iters + 1):
        if gmax <= config.eta:
            trace.status = CONVERGED
            return trace
        t = backtracking_step(f, g, objective, config)
        if t == 0.0:
            trace.status = STALLED
            return trace
        f = np.maximum(f + t * g, floor)
        nu = objective(f)
        g = _direction_from_values(f, Qm, ux, label)
        gmax = float(np.max(np.abs(g)))
        trace.append(k, nu, t, gmax, f)

    trace.status = ITERATION_CAP
    return trace


def gradient_ascent_unconstrained(Q: SensorSet, X: SensorSet, f0,
                                  config: AscentConfig = AscentConfig()
                                  ) -> tuple[FilterTransmittance, AscentTrace]:
    """Climb nu(diag(f) Q, X) from f0 until max|gradient| <= eta.

    The raw solution may exceed unit transmittance; it is normalized by
    its maximum before being returned, which does not change the spanned
    subspace and hence not the Vora-Value.
    """
    grid = require_same_grid(Q, X)
    ux = _orthonormal_columns(X.matrix, X.label)
    starts = [_start_values(f0, grid.n, config.f_floor)]
    for extra in config.extra_starts:
        starts.append(_start_values(extra, grid.n, config.f_floor))

    best = None
    for values in starts:
        trace = _ascend_from(values, Q.matrix, ux, Q.label, config)
        if best is None or trace.final.vora_value > best.final.vora_value:
            best = trace

    final = best.final.filter_values
    filt = FilterTransmittance(grid, final / np.max(final))
    return filt, best


def project_feasible(c: np.ndarray, B: np.ndarray, bounds: BoxBounds) -> np.ndarray:
    """Map coefficients to the nearest-by-iteration basis+box feasible point.

    Alternates clipping f = B c into the box with least-squares refitting
    of c until the reconstruction satisfies the bounds (tolerance 1e-8), up
    to 100 rounds, then applies one final hard clip-and-refit. Raises
    ProjectionFailureError if even that leaves a violation above 1e-6.
    """
    B = np.asarray(B, dtype=float)
    pinv = np.linalg.pinv(B)
    return _project_with(np.asarray(c, dtype=float), B, pinv, bounds)


def _project_with(c, B, pinv, bounds: BoxBounds) -> np.ndarray:
    f = B @ c
    if bounds.violation(f) == 0.0:
        return c  # strictly inside: nothing to do
    for _ in range(_PROJECT_MAX_ITERS):
        c = pinv @ np.clip(f, bounds.f_min, bounds.f_max)
        f = B @ c
        if bounds.violation(f) <= _FEAS_TOL:
            break
    # Final hard clip-and-refit on either loop exit; it contracts the
    # violation further, so iterates cannot camp on the tolerance shell.
    c = pinv @ np.clip(f, bounds.f_min, bounds.f_max)
    f = B @ c
    if bounds.violation(f) > _FEAS_HARD_TOL:
        raise ProjectionFailureError(
            f"basis cannot reach the box [{bounds.f_min}, {bounds.f_max}] "
            f"(violation {bounds.violation(f):.3g})"
        )
    return c


def projected_gradient_ascent(Q: SensorSet, X: SensorSet, B: np.ndarray,
                              c0: np.ndarray, bounds: BoxBounds,
                              config: AscentConfig = AscentConfig()
                              ) -> tuple[FilterTransmittance, AscentTrace]:
    """Basis-constrained ascent: c <- project(c + t * grad_c), t by backtracking.

    Stops on a small coefficient gradient, on ten consecutive iterations
    with projected-step improvement below 1e-12 (convergence against an
    active bound, where the raw gradient need not vanish), or at the
    iteration cap. Every iterate's filter satisfies the bounds within 1e-8.
    """
    grid = require_same_grid(Q, X)
    B = np.asarray(B, dtype=float)
    c = np.asarray(c0, dtype=float)
    if B.ndim != 2 or B.shape[0] != grid.n or B.shape[1] != c.size:
        raise ValueError(f"basis {B.shape} does not match grid n={grid.n}, k={c.size}")
    if bounds.f_max < config.f_floor:
        raise ValueError("f_max lies below the transmittance floor")
    pinv = np.linalg.pinv(B)
    if bounds.violation(B @ c) > _FEAS_TOL:
        raise ValueError("initial coefficients are infeasible for the bounds")

    ux = _orthonormal_columns(X.matrix, X.label)
    Qm = Q.matrix
    floor = config.f_floor

    def coef_objective(cv):
        return _vora_from_values(np.maximum(B @ cv, floor), Qm, ux, Q.label)

    def projected_objective(cv):
        return coef_objective(_project_with(cv, B, pinv, bounds))

    trace = AscentTrace()
    nu = coef_objective(c)
    g = B.T @ _direction_from_values(np.maximum(B @ c, floor), Qm, ux, Q.label)
    gmax = float(np.max(np.abs(g)))
    trace.append(0, nu, 0.0, gmax, B @ c)

    stagnant = 0
    trace.status = ITERATION_CAP
    for k in range(1, config.max_iters + 1):
        if gmax <= config.eta:
            trace.status = CONVERGED
            break
        t = backtracking_step(c, g, projected_objective, config)
        nu_new = nu
        if t > 0.0:
            candidate = _project_with(c + t * g, B, pinv, bounds)
            nu_candidate = coef_objective(candidate)
            # The Armijo base is the re-projected current point, which can
            # sit 1 ulp away from nu; only move when the trace stays
            # non-decreasing.
            if nu_candidate >= nu:
                c, nu_new = candidate, nu_candidate
            else:
                t = 0.0
        stagnant = stagnant + 1 if nu_new - nu < _STAGNATION_EPS else 0
        nu = nu_new
        g = B.T @ _direction_from_values(np.maximum(B @ c, floor), Qm, ux, Q.label)
        gmax = float(np.max(np.abs(g)))
        trace.append(k, nu, t, gmax, B @ c)
        if stagnant >= _STAGNATION_RUN:
            trace.status = CONVERGED
            break

    f = np.clip(trace.final.filter_values, floor, bounds.f_max)
    return FilterTransmittance(grid, f), trace
