"""Spectral dataset ingestion and export.

Canonical format: UTF-8 CSV with a header row whose first column is
``wavelength_nm``, followed by one named column per spectrum. Wavelengths
must be strictly increasing and uniformly spaced; data on a finer grid
than 400:10:700 is linearly resampled onto it at load time. Converter
recipes for common upstream distributions are documented in the README.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from .colorimetry import Scene
from .errors import ParseError
from .spectral import (DEFAULT_GRID, FilterTransmittance, SensorSet,
                       SpectralGrid, Spectrum, full_rank_check, resample)

KINDS = ("sensitivities", "illuminants", "reflectances", "cmf")

_CMF_RESOURCE = "cie1931_cmf_10nm.csv"


@dataclass(frozen=True)
class SpectralTable:
    """Named spectra sharing one grid, as loaded from a file."""

    grid: SpectralGrid
    names: tuple
    columns: np.ndarray  # (grid.n, len(names))
    source: str
    kind: str

    def column(self, name: str) -> np.ndarray:
        return self.columns[:, self.names.index(name)]

    def spectra(self) -> list:
        return [Spectrum(self.grid, self.columns[:, j]) for j in range(len(self.names))]


def load_spectral_csv(path, kind: str, target: SpectralGrid = DEFAULT_GRID) -> SpectralTable:
    """Parse and validate one spectral CSV, resampling onto ``target``."""
    if kind not in KINDS:
        raise ValueError(f"kind must be one of {KINDS}, got {kind!r}")
    path = Path(path)
    with open(path, newline="", encoding="utf-8") as handle:
        rows = list(csv.reader(handle))

    if not rows:
        raise ParseError(path, 1, "empty file")
    header = [cell.strip() for cell in rows[0]]
    if not header or header[0] != "wavelength_nm":
        raise ParseError(path, 1, "first column must be 'wavelength_nm'")
    names = header[1:]
    if not names:
        raise ParseError(path, 1, "no data columns after 'wavelength_nm'")
    if len(set(names)) != len(names):
        raise ParseError(path, 1, "duplicate column names")

    wavelengths = []
    data = []
    for line_no, row in enumerate(rows[1:], start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != len(header):
            raise ParseError(path, line_no,
                             f"expected {len(header)} fields, found {len(row)}")
        try:
            parsed = [float(cell) for cell in row]
        except ValueError as exc:
            raise ParseError(path, line_no, f"non-numeric entry ({exc})") from None
        if any(math.isnan(v) or math.isinf(v) for v in parsed):
            raise ParseError(path, line_no, "non-finite entry")
        if any(v < 0.0 for v in parsed[1:]):
            raise ParseError(path, line_no,
                             f"negative value in {kind} data (spectra are nonnegative)")
        if wavelengths and parsed[0] <= wavelengths[-1]:
            raise ParseError(path, line_no, "wavelengths must increase monotonically")
        wavelengths.append(parsed[0])
        data.append(parsed[1:])

    if len(wavelengths) < 2:
        raise ParseError(path, len(rows), "need at least two wavelength samples")

    steps = np.diff(wavelengths)
    step = steps[0]
    if np.any(np.abs(steps - step) > 1e-9):
        raise ParseError(path, 1, "wavelength spacing is not uniform")

    grid = SpectralGrid(wavelengths[0], wavelengths[-1], float(step))
    columns = np.array(data)
    if grid != target:
        columns = np.stack(
            [resample(Spectrum(grid, columns[:, j]), target).values
             for j in range(columns.shape[1])],
            axis=1,
        )
        grid = target
    return SpectralTable(grid, tuple(names), columns, str(path), kind)


def write_spectral_csv(table: SpectralTable, path) -> None:
    """Write the canonical format with full float64 round-trip precision."""
    path = Path(path)
    with open(path, "w", newline="", encoding="utf-8") as handle:
        out = csv.writer(handle)
        out.writerow(["wavelength_nm", *table.names])
        for wl, row in zip(table.grid.wavelengths(), table.columns):
            out.writerow([f"{wl:g}", *(f"{v:.17g}" for v in row)])


def table_from_arrays(grid: SpectralGrid, names, columns, kind: str,
                      source: str = "<memory>") -> SpectralTable:
    return SpectralTable(grid, tuple(names), np.asarray(columns, dtype=float),
                         source, kind)


def sensor_set_from_table(table: SpectralTable, label: str) -> SensorSet:
    if len(table.names) != 3:
        raise ValueError(
            f"{table.source}: sensor file needs exactly 3 channels, has {len(table.names)}"
        )
    sensors = SensorSet(table.grid, table.columns, label)
    if not full_rank_check(sensors):
        raise ParseError(table.source, 1, "sensitivity channels are rank deficient")
    return sensors


def load_sensor_csv(path, label: str | None = None, kind: str = "sensitivities") -> SensorSet:
    path = Path(path)
    table = load_spectral_csv(path, kind)
    return sensor_set_from_table(table, label if label is not None else path.stem.lower())


def load_camera_database(directory) -> list:
    """One SensorSet per ``*.csv`` camera file, labeled by filename stem."""
    directory = Path(directory)
    files = sorted(directory.glob("*.csv"))
    if not files:
        raise FileNotFoundError(f"no camera CSV files in {directory}")
    cameras = []
    seen = set()
    for path in files:
        label = path.stem.lower()
        if label in seen:
            raise ValueError(f"duplicate camera label {label!r} in {directory}")
        seen.add(label)
        cameras.append(load_sensor_csv(path, label))
    return cameras


def load_cie1931_cmf() -> SensorSet:
    """Bundled CIE 1931 2-degree color matching functions on the 10 nm grid."""
    source = resources.files(__package__).joinpath("data").joinpath(_CMF_RESOURCE)
    with resources.as_file(source) as path:
        table = load_spectral_csv(path, "cmf")
    return sensor_set_from_table(table, "cie1931_xyz")


def load_scene(illuminants_path, reflectances_path) -> Scene:
    lights = load_spectral_csv(illuminants_path, "illuminants")
    surfaces = load_spectral_csv(reflectances_path, "reflectances")
    return Scene(tuple(lights.spectra()), tuple(surfaces.spectra()))


def write_filter_csv(filt: FilterTransmittance, path) -> None:
    """Filter curve as 'wavelength_nm,transmittance' rows."""
    path = Path(path)
    with open(path, "w", newline="", encoding="utf-8") as handle:
        out = csv.writer(handle)
        out.writerow(["wavelength_nm", "transmittance"])
        for wl, value in zip(filt.grid.wavelengths(), filt.f):
            out.writerow([f"{wl:g}", f"{value:.17g}"])


def load_filter_csv(path, target: SpectralGrid = DEFAULT_GRID) -> FilterTransmittance:
    """Read back a filter curve written by :func:`write_filter_csv`."""
    path = Path(path)
    table = load_spectral_csv(path, "reflectances", target)
    if len(table.names) != 1:
        raise ParseError(path, 1, "filter file must hold exactly one column")
    values = table.columns[:, 0]
    if np.any(values <= 0.0) or np.any(values > 1.0):
        raise ParseError(path, 1, "transmittance values must lie in (0, 1]")
    return FilterTransmittance(table.grid, values)
