"""Shared fixtures.

Measured datasets (camera sensitivity database, illuminant/reflectance
collections) are looked up under $CAMFILTER_DATA_DIR (default:
<repo>/data). Tests that need them self-skip when absent; everything else
runs on the deterministic synthetic stand-ins.
"""

import os
from pathlib import Path

import numpy as np
import pytest

from camfilter import AscentConfig, default_initial_filter, gradient_ascent_unconstrained
from camfilter.dataio import load_camera_database, load_cie1931_cmf, load_scene
from camfilter.synth import synthetic_camera, synthetic_camera_set, synthetic_scene

REPO_ROOT = Path(__file__).resolve().parent.parent
DATA_DIR = Path(os.environ.get("CAMFILTER_DATA_DIR", REPO_ROOT / "data"))

_NO_CAMERAS = "measured camera database not present (see README: Supplying the measured datasets)"
_NO_SCENE = "measured illuminant/reflectance collection not present (see README)"


def measured_cameras_dir():
    path = DATA_DIR / "cameras"
    if path.is_dir() and any(path.glob("*.csv")):
        return path
    return None


def measured_scene_paths():
    paths = (DATA_DIR / "illuminants.csv", DATA_DIR / "reflectances.csv")
    if all(p.is_file() for p in paths):
        return paths
    return None


def has_canon_40d():
    path = measured_cameras_dir()
    return path is not None and (path / "canon_40d.csv").is_file()


requires_canon = pytest.mark.skipif(not has_canon_40d(), reason=_NO_CAMERAS)
requires_scene = pytest.mark.skipif(measured_scene_paths() is None, reason=_NO_SCENE)


@pytest.fixture(scope="session")
def cmf():
    return load_cie1931_cmf()


@pytest.fixture(scope="session")
def camera():
    return synthetic_camera()


@pytest.fixture(scope="session")
def camera_set():
    return synthetic_camera_set(count=28)


@pytest.fixture(scope="session")
def small_scene():
    return synthetic_scene(n_illuminants=12, n_reflectances=90, seed=5)


@pytest.fixture(scope="session")
def full_scene():
    return synthetic_scene(n_illuminants=102, n_reflectances=1995, seed=7)


@pytest.fixture(scope="session")
def unconstrained_run(camera, cmf):
    """One default unconstrained ascent on the synthetic camera."""
    return gradient_ascent_unconstrained(
        camera, cmf, default_initial_filter(camera.grid), AscentConfig())


@pytest.fixture(scope="session")
def canon_40d(cmf):
    path = measured_cameras_dir()
    if path is None or not (path / "canon_40d.csv").is_file():
        pytest.skip(_NO_CAMERAS)
    cameras = {c.label: c for c in load_camera_database(path)}
    return cameras["canon_40d"]


@pytest.fixture(scope="session")
def measured_scene():
    paths = measured_scene_paths()
    if paths is None:
        pytest.skip(_NO_SCENE)
    return load_scene(*paths)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
