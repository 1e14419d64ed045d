"""Acceptance suite: one test per exit criterion, printed as pass/fail lines.

Run with ``pytest tests/test_acceptance.py -v -s``.

Criteria 1-4 reproduce published reference results for the Canon 40D
camera and therefore require the measured camera database (and, for the
color-error figures, the measured illuminant/reflectance collection) under
$CAMFILTER_DATA_DIR; they skip with an explicit reason when those files
are absent. Criteria 5 and 6 fall back to their documented property
suites on the deterministic synthetic stand-ins; criteria 7 and 8 are
fully self-contained.
"""

import time

import numpy as np
import pytest

from camfilter import (AscentConfig, BoxBounds, FilterEvaluator, SensorSet,
                       cosine_basis, default_initial_filter, fd_gradient_oracle,
                       filtered_vora_value, gradient_ascent_unconstrained,
                       luther_filter, projected_gradient_ascent, projector,
                       vora_gradient_f, vora_value)
from camfilter.spectral import SpectralGrid

from conftest import requires_canon, requires_scene

# Reference values for the Canon 40D + CIE 1931 observer pairing.
CANON_BASELINE_NU = 0.932
CANON_VORA_UNCONSTRAINED_NU = 0.991
CANON_VORA_COND1_NU = 0.986   # k=8 cosine basis, bounds [0.2, 1.0]
CANON_VORA_COND2_NU = 0.985   # k=8 cosine basis, bounds [0.3, 1.0]
CANON_LUTHER_UNCONSTRAINED_NU = 0.986
CANON_LUTHER_COND1_NU = 0.981
CANON_BASELINE_DELTA_E = (1.72, 1.03, 5.12, 12.94, 28.39)  # mean/median/p95/p99/max
CANON_VORA_MEAN_DELTA_E = 0.38
SWEEP_MEAN_NATIVE = 0.918
SWEEP_MEAN_VORA = 0.976
SWEEP_MEAN_LUTHER = 0.961


def _report(criterion, message):
    print(f"[criterion {criterion}] PASS - {message}")


@pytest.fixture(scope="module")
def sweep_results(camera_set, cmf):
    """Unconstrained Vora ascent + Luther baseline over the 28-camera set."""
    started = time.perf_counter()
    rows = []
    for camera in camera_set:
        native = vora_value(camera, cmf)
        _, trace = gradient_ascent_unconstrained(
            camera, cmf, default_initial_filter(camera.grid), AscentConfig())
        solution = luther_filter(camera, cmf)
        rows.append({
            "camera": camera.label,
            "native": native,
            "vora": trace.final.vora_value,
            "luther": filtered_vora_value(solution.f, camera, cmf),
            "trace": trace,
        })
    elapsed = time.perf_counter() - started
    return rows, elapsed


@requires_canon
class TestCriterion1Baseline:
    def test_canon_baseline_vora_value(self, canon_40d, cmf):
        started = time.perf_counter()
        nu = vora_value(canon_40d, cmf)
        elapsed = time.perf_counter() - started
        assert nu == pytest.approx(CANON_BASELINE_NU, abs=0.003)
        assert elapsed < 1.0
        _report(1, f"baseline vora {nu:.4f} (ref {CANON_BASELINE_NU}), {elapsed:.3f}s")


@requires_canon
class TestCriterion2UnconstrainedVora:
    def test_unconstrained_optimum(self, canon_40d, cmf):
        started = time.perf_counter()
        _, trace = gradient_ascent_unconstrained(
            canon_40d, cmf, default_initial_filter(canon_40d.grid), AscentConfig())
        elapsed = time.perf_counter() - started
        final = trace.final.vora_value
        assert final == pytest.approx(CANON_VORA_UNCONSTRAINED_NU, abs=0.003)
        assert trace.final.iteration <= 10_000
        # Converged by 10,000 iterations: the value has plateaued even if
        # the strict gradient threshold was not reached.
        assert abs(trace.vora_at(max(0, trace.final.iteration - 100)) - final) < 1e-5
        assert abs(trace.vora_at(100) - final) < 0.005
        assert elapsed < 10.0
        _report(2, f"unconstrained vora {final:.4f} (ref "
                   f"{CANON_VORA_UNCONSTRAINED_NU}), iter100 gap "
                   f"{abs(trace.vora_at(100) - final):.2e}, {elapsed:.2f}s")


@requires_canon
class TestCriterion3ConstrainedVora:
    @pytest.mark.parametrize("f_min,reference,tolerance", [
        (0.2, CANON_VORA_COND1_NU, 0.004),
        (0.3, CANON_VORA_COND2_NU, 0.004),
    ])
    def test_constrained_optimum(self, canon_40d, cmf, f_min, reference, tolerance):
        basis = cosine_basis(canon_40d.grid.n, 8)
        c0 = np.zeros(8)
        c0[0] = 1.0
        _, trace = projected_gradient_ascent(
            canon_40d, cmf, basis, c0, BoxBounds(f_min, 1.0), AscentConfig())
        final = trace.final.vora_value
        assert final == pytest.approx(reference, abs=tolerance)
        for record in trace.records:
            assert np.all(record.filter_values >= f_min - 1e-8)
            assert np.all(record.filter_values <= 1.0 + 1e-8)
        _report(3, f"bounds [{f_min}, 1.0]: vora {final:.4f} (ref {reference}), "
                   f"all {len(trace.records)} iterates feasible")


@requires_canon
class TestCriterion4LutherBaseline:
    def test_unconstrained_luther(self, canon_40d, cmf):
        solution = luther_filter(canon_40d, cmf)
        nu = filtered_vora_value(solution.f, canon_40d, cmf)
        assert nu == pytest.approx(CANON_LUTHER_UNCONSTRAINED_NU, abs=0.005)
        _report(4, f"luther unconstrained vora {nu:.4f} "
                   f"(ref {CANON_LUTHER_UNCONSTRAINED_NU})")

    def test_constrained_luther(self, canon_40d, cmf):
        constraints = (cosine_basis(canon_40d.grid.n, 8), BoxBounds(0.2, 1.0))
        solution = luther_filter(canon_40d, cmf, constraints=constraints)
        nu = filtered_vora_value(solution.f, canon_40d, cmf)
        assert nu == pytest.approx(CANON_LUTHER_COND1_NU, abs=0.005)
        _report(4, f"luther condition-I vora {nu:.4f} (ref {CANON_LUTHER_COND1_NU})")


class TestCriterion5CameraSweep:
    def test_sweep_properties_or_reference_means(self, sweep_results, cmf):
        from conftest import measured_cameras_dir
        from camfilter.dataio import load_camera_database

        rows, elapsed = sweep_results
        assert elapsed < 300.0, f"sweep took {elapsed:.0f}s"
        # Substitute property suite (always enforced, per-camera).
        for row in rows:
            assert row["vora"] >= row["luther"] - 0.002, row["camera"]
            assert row["vora"] >= row["native"], row["camera"]
            if row["native"] < 1.0 - 1e-6:
                assert row["vora"] > row["native"], row["camera"]

        measured = measured_cameras_dir()
        if measured is not None and len(load_camera_database(measured)) >= 28:
            cameras = load_camera_database(measured)
            natives, voras, luthers = [], [], []
            for camera in cameras:
                natives.append(vora_value(camera, cmf))
                _, trace = gradient_ascent_unconstrained(
                    camera, cmf, default_initial_filter(camera.grid), AscentConfig())
                voras.append(trace.final.vora_value)
                sol = luther_filter(camera, cmf)
                luthers.append(filtered_vora_value(sol.f, camera, cmf))
            assert np.mean(natives) == pytest.approx(SWEEP_MEAN_NATIVE, abs=0.005)
            assert np.mean(voras) == pytest.approx(SWEEP_MEAN_VORA, abs=0.005)
            assert np.mean(luthers) == pytest.approx(SWEEP_MEAN_LUTHER, abs=0.008)
            _report(5, f"measured database means native {np.mean(natives):.4f}, "
                       f"vora {np.mean(voras):.4f}, luther {np.mean(luthers):.4f}")
        else:
            means = {key: float(np.mean([r[key] for r in rows]))
                     for key in ("native", "luther", "vora")}
            _report(5, f"substitute property suite on {len(rows)} synthetic cameras "
                       f"(means native {means['native']:.4f}, luther "
                       f"{means['luther']:.4f}, vora {means['vora']:.4f}), "
                       f"{elapsed:.0f}s")


class TestCriterion6ColorErrors:
    def test_substitute_perfect_camera_zero_error(self, cmf, small_scene, rng):
        a = rng.normal(size=(3, 3)) + 2 * np.eye(3)
        perfect = cmf.recombined(a, "perfect")
        _, stats = FilterEvaluator(perfect, cmf, small_scene).evaluate(np.ones(31))
        assert stats.max < 1e-8
        _report(6, f"perfect camera max dE {stats.max:.2e} < 1e-8")

    def test_substitute_optimized_beats_baseline(self, camera, cmf, full_scene,
                                                 unconstrained_run):
        filt, _ = unconstrained_run
        evaluator = FilterEvaluator(camera, cmf, full_scene)
        _, baseline = evaluator.evaluate(np.ones(31))
        _, optimized = evaluator.evaluate(filt)
        assert optimized.mean < baseline.mean
        _report(6, f"substitute scene mean dE {baseline.mean:.3f} -> "
                   f"{optimized.mean:.3f} after optimization")

    @requires_canon
    @requires_scene
    def test_measured_baseline_row(self, canon_40d, cmf, measured_scene):
        evaluator = FilterEvaluator(canon_40d, cmf, measured_scene)
        _, stats = evaluator.evaluate(np.ones(canon_40d.grid.n))
        for got, ref in zip(stats.as_row(), CANON_BASELINE_DELTA_E):
            assert got == pytest.approx(ref, rel=0.15)
        _report(6, f"measured baseline row {tuple(round(v, 2) for v in stats.as_row())}")

    @requires_canon
    @requires_scene
    def test_measured_vora_filter_mean(self, canon_40d, cmf, measured_scene):
        filt, _ = gradient_ascent_unconstrained(
            canon_40d, cmf, default_initial_filter(canon_40d.grid), AscentConfig())
        _, stats = FilterEvaluator(canon_40d, cmf, measured_scene).evaluate(filt)
        assert stats.mean == pytest.approx(CANON_VORA_MEAN_DELTA_E, abs=0.1)
        _report(6, f"measured vora-filter mean dE {stats.mean:.3f} "
                   f"(ref {CANON_VORA_MEAN_DELTA_E})")


class TestCriterion7GradientOracle:
    def test_direction_parallel_to_finite_differences(self):
        rng = np.random.default_rng(2024)
        started = time.perf_counter()
        cosines = []
        scales = []
        instances = 0
        for n in (5, 10, 31):
            for _ in range(34):
                grid = SpectralGrid(400.0, 400.0 + 10.0 * (n - 1), 10.0)
                Q = SensorSet(grid, rng.uniform(0.05, 1.0, (n, 3)), "q")
                X = SensorSet(grid, rng.uniform(0.05, 1.0, (n, 3)), "x")
                f = rng.uniform(0.3, 1.0, n)
                d = vora_gradient_f(f, Q, X)
                fd = fd_gradient_oracle(lambda v: filtered_vora_value(v, Q, X), f)
                cosines.append((fd @ d) / (np.linalg.norm(fd) * np.linalg.norm(d)))
                scales.append((fd @ d) / (d @ d))
                instances += 1
        elapsed = time.perf_counter() - started
        scales = np.array(scales)
        assert instances >= 100
        assert min(cosines) > 1.0 - 1e-8
        assert np.all(scales > 0)
        assert scales.std() / scales.mean() < 1e-6
        assert elapsed < 30.0
        _report(7, f"{instances} instances: min cosine {min(cosines):.17f}, "
                   f"scale {scales.mean():.9f} (cv {scales.std() / scales.mean():.2e}), "
                   f"{elapsed:.1f}s")


class TestCriterion8InvarianceSuite:
    def test_basis_change_invariance_1000(self, camera, cmf):
        rng = np.random.default_rng(99)
        base = vora_value(camera, cmf)
        worst = 0.0
        count = 0
        while count < 1000:
            m = rng.normal(size=(3, 3))
            if abs(np.linalg.det(m)) < 1e-3:
                continue
            worst = max(worst, abs(vora_value(camera, cmf.recombined(m)) - base))
            count += 1
        assert worst < 1e-10
        _report(8, f"1000 observer recombinations, max vora deviation {worst:.2e}")

    def test_projector_properties_1000(self):
        rng = np.random.default_rng(7)
        for _ in range(1000):
            n = int(rng.integers(4, 40))
            m = int(rng.integers(1, 4))
            p = projector(rng.normal(size=(n, m))).P
            assert np.max(np.abs(p - p.T)) < 1e-10
            assert np.max(np.abs(p @ p - p)) < 1e-8
            assert abs(np.trace(p) - m) < 1e-8
        _report(8, "1000 random projectors: symmetric, idempotent, trace = rank")

    def test_all_camera_traces_monotone(self, sweep_results):
        rows, _ = sweep_results
        for row in rows:
            values = row["trace"].vora_values()
            assert np.all(np.diff(values) >= 0), row["camera"]
        _report(8, f"monotone non-decreasing traces on all {len(rows)} cameras")

    def test_uniform_filter_span_invariance(self, camera, cmf):
        base = vora_value(camera, cmf)
        for alpha in (0.05, 0.3, 0.5, 0.99, 1.0):
            nu = filtered_vora_value(np.full(31, alpha), camera, cmf)
            assert abs(nu - base) < 1e-10
        _report(8, "uniform filters leave the value unchanged to 1e-10")
