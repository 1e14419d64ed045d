"""CSV ingestion, validation errors with line numbers, and round-trips."""

import numpy as np
import pytest

from camfilter import DEFAULT_GRID, ParseError, full_rank_check
from camfilter.dataio import (load_camera_database,
                              load_filter_csv, load_scene, load_sensor_csv,
                              load_spectral_csv, table_from_arrays,
                              write_filter_csv, write_spectral_csv)
from camfilter.spectral import FilterTransmittance, SpectralGrid
from camfilter.synth import synthetic_camera_set, synthetic_scene


def _write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


def _camera_csv(tmp_path, cam, name=None):
    table = table_from_arrays(cam.grid, ("r", "g", "b"), cam.matrix, "sensitivities")
    path = tmp_path / f"{name or cam.label}.csv"
    write_spectral_csv(table, path)
    return path


class TestLoadSpectralCsv:
    def test_exact_grid_no_resample(self, tmp_path, rng):
        values = rng.random((31, 3))
        table = table_from_arrays(DEFAULT_GRID, ("a", "b", "c"), values, "illuminants")
        path = tmp_path / "t.csv"
        write_spectral_csv(table, path)
        loaded = load_spectral_csv(path, "illuminants")
        assert loaded.grid == DEFAULT_GRID
        assert np.array_equal(loaded.columns, values)

    def test_finer_grid_resampled(self, tmp_path, rng):
        fine = SpectralGrid(400.0, 700.0, 1.0)
        values = rng.random((fine.n, 2))
        table = table_from_arrays(fine, ("a", "b"), values, "reflectances")
        path = tmp_path / "fine.csv"
        write_spectral_csv(table, path)
        loaded = load_spectral_csv(path, "reflectances")
        assert loaded.grid == DEFAULT_GRID
        assert loaded.columns.shape == (31, 2)
        assert np.array_equal(loaded.columns[:, 0], values[::10, 0])

    def test_round_trip_bit_exact(self, tmp_path, rng):
        values = rng.random((31, 4))
        table = table_from_arrays(DEFAULT_GRID, ("w", "x", "y", "z"), values, "reflectances")
        path = tmp_path / "rt.csv"
        write_spectral_csv(table, path)
        loaded = load_spectral_csv(path, "reflectances")
        assert np.array_equal(loaded.columns, values)
        # A second round trip is stable too.
        path2 = tmp_path / "rt2.csv"
        write_spectral_csv(loaded, path2)
        assert path.read_text() == path2.read_text()

    def test_missing_wavelength_column(self, tmp_path):
        path = _write(tmp_path, "bad.csv", "nm,a\n400,1\n410,2\n")
        with pytest.raises(ParseError, match="bad.csv:1"):
            load_spectral_csv(path, "illuminants")

    def test_ragged_row_reports_line(self, tmp_path):
        path = _write(tmp_path, "ragged.csv",
                      "wavelength_nm,a\n400,1\n410\n420,3\n")
        with pytest.raises(ParseError, match="ragged.csv:3"):
            load_spectral_csv(path, "illuminants")

    def test_non_monotone_reports_line(self, tmp_path):
        path = _write(tmp_path, "mono.csv",
                      "wavelength_nm,a\n400,1\n420,2\n410,3\n")
        with pytest.raises(ParseError, match="mono.csv:4"):
            load_spectral_csv(path, "illuminants")

    def test_nan_rejected(self, tmp_path):
        path = _write(tmp_path, "nan.csv",
                      "wavelength_nm,a\n400,1\n410,nan\n")
        with pytest.raises(ParseError, match="nan.csv:3"):
            load_spectral_csv(path, "illuminants")

    def test_non_numeric_rejected(self, tmp_path):
        path = _write(tmp_path, "alpha.csv",
                      "wavelength_nm,a\n400,1\n410,oops\n")
        with pytest.raises(ParseError, match="alpha.csv:3"):
            load_spectral_csv(path, "illuminants")

    def test_negative_sensitivity_rejected(self, tmp_path):
        path = _write(tmp_path, "neg.csv",
                      "wavelength_nm,r,g,b\n400,0.1,0.1,0.1\n410,-0.2,0.1,0.1\n")
        with pytest.raises(ParseError, match="neg.csv:3"):
            load_spectral_csv(path, "sensitivities")

    def test_nonuniform_spacing_rejected(self, tmp_path):
        path = _write(tmp_path, "gaps.csv",
                      "wavelength_nm,a\n400,1\n410,1\n430,1\n")
        with pytest.raises(ParseError, match="not uniform"):
            load_spectral_csv(path, "illuminants")

    def test_narrow_range_cannot_cover_default_grid(self, tmp_path):
        from camfilter import SpectralRangeError
        rows = "\n".join(f"{wl},1.0" for wl in range(450, 651, 10))
        path = _write(tmp_path, "narrow.csv", f"wavelength_nm,a\n{rows}\n")
        with pytest.raises(SpectralRangeError):
            load_spectral_csv(path, "illuminants")


class TestCameraDatabase:
    def test_loads_all_cameras_with_labels(self, tmp_path):
        cams = synthetic_camera_set(count=5)
        for cam in cams:
            _camera_csv(tmp_path, cam)
        loaded = load_camera_database(tmp_path)
        assert len(loaded) == 5
        assert [c.label for c in loaded] == sorted(c.label for c in cams)
        assert all(full_rank_check(c) for c in loaded)

    def test_empty_directory_errors(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_camera_database(tmp_path)

    def test_duplicate_labels_rejected(self, tmp_path):
        cam = synthetic_camera_set(count=1)[0]
        _camera_csv(tmp_path, cam, name="CamA")
        _camera_csv(tmp_path, cam, name="cama")
        with pytest.raises(ValueError, match="duplicate"):
            load_camera_database(tmp_path)

    def test_rank_deficient_camera_rejected(self, tmp_path):
        col = np.linspace(0.1, 1.0, 31)
        table = table_from_arrays(DEFAULT_GRID, ("r", "g", "b"),
                                  np.stack([col, col, col], axis=1), "sensitivities")
        write_spectral_csv(table, tmp_path / "flat.csv")
        with pytest.raises(ParseError, match="rank deficient"):
            load_camera_database(tmp_path)

    def test_sensor_csv_needs_three_channels(self, tmp_path, rng):
        table = table_from_arrays(DEFAULT_GRID, ("a", "b"), rng.random((31, 2)),
                                  "sensitivities")
        path = tmp_path / "two.csv"
        write_spectral_csv(table, path)
        with pytest.raises(ValueError, match="3 channels"):
            load_sensor_csv(path)


class TestBundledCmf:
    def test_shape_grid_and_rank(self, cmf):
        assert cmf.label == "cie1931_xyz"
        assert cmf.grid == DEFAULT_GRID
        assert cmf.matrix.shape == (31, 3)
        assert full_rank_check(cmf)

    def test_known_tabulated_values(self, cmf):
        wl = list(cmf.grid.wavelengths())
        assert cmf.matrix[wl.index(550.0)] == pytest.approx([0.43345, 0.99495, 0.00875])
        assert cmf.matrix[wl.index(400.0)] == pytest.approx([0.01431, 0.000396, 0.06785])
        # y-bar peaks near 555 nm, x-bar near 600 nm, z-bar near 450 nm.
        assert 540.0 <= wl[np.argmax(cmf.matrix[:, 1])] <= 560.0
        assert 590.0 <= wl[np.argmax(cmf.matrix[:, 0])] <= 610.0
        assert 440.0 <= wl[np.argmax(cmf.matrix[:, 2])] <= 460.0


class TestFilterCsv:
    def test_round_trip(self, tmp_path, rng):
        f = FilterTransmittance(DEFAULT_GRID, rng.uniform(0.2, 1.0, 31))
        path = tmp_path / "filter.csv"
        write_filter_csv(f, path)
        loaded = load_filter_csv(path)
        assert np.array_equal(loaded.f, f.f)

    def test_rejects_out_of_range(self, tmp_path):
        rows = "\n".join(f"{wl},1.5" for wl in range(400, 701, 10))
        path = _write(tmp_path, "bad_filter.csv", f"wavelength_nm,transmittance\n{rows}\n")
        with pytest.raises(ParseError):
            load_filter_csv(path)


class TestLoadScene:
    def test_scene_files_round_trip(self, tmp_path):
        scene = synthetic_scene(n_illuminants=4, n_reflectances=6, seed=2)
        ill = table_from_arrays(scene.grid,
                                tuple(f"l{i}" for i in range(4)),
                                scene.illuminant_matrix().T, "illuminants")
        refl = table_from_arrays(scene.grid,
                                 tuple(f"r{i}" for i in range(6)),
                                 scene.reflectance_matrix(), "reflectances")
        write_spectral_csv(ill, tmp_path / "ill.csv")
        write_spectral_csv(refl, tmp_path / "refl.csv")
        loaded = load_scene(tmp_path / "ill.csv", tmp_path / "refl.csv")
        assert len(loaded.illuminants) == 4
        assert len(loaded.reflectances) == 6
        assert np.array_equal(loaded.illuminant_matrix(), scene.illuminant_matrix())
        assert np.array_equal(loaded.reflectance_matrix(), scene.reflectance_matrix())
