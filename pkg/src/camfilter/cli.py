"""Command-line front end.

Subcommands: ``optimize`` (design a filter for one camera), ``evaluate``
(score a filter with the CIELAB experiment), ``sweep`` (whole camera
database comparison), ``convergence`` (per-iteration Vora-Value and mean
color error). Every run writes a ``manifest.json`` capturing exactly what
produced the outputs; re-running a manifest reproduces the numeric files
byte for byte.

Exit codes: 0 success, 2 usage error, 3 data error, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import dataio
from .colorimetry import FilterEvaluator
from .errors import (GridMismatchError, InvalidFilterError, ParseError,
                     ProjectionFailureError, SingularMatrixError,
                     SpectralRangeError)
from .luther import luther_filter
from .optimize import (AscentConfig, BoxBounds, default_initial_filter,
                       gradient_ascent_unconstrained, projected_gradient_ascent)
from .spectral import cosine_basis
from .vora import filtered_vora_value, vora_value

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_NUMERIC = 4

_DATA_ERRORS = (ParseError, SpectralRangeError, GridMismatchError, OSError)
_NUMERIC_ERRORS = (SingularMatrixError, InvalidFilterError,
                   ProjectionFailureError, np.linalg.LinAlgError)

# Flag name -> value type, for --config key=value files.
_CONFIG_TYPES = {
    "camera": str, "cameras-dir": str, "cmf": str, "illuminants": str,
    "reflectances": str, "method": str, "basis": int, "fmin": float,
    "fmax": float, "eta": float, "max-iters": int, "filter": str,
    "correction": str, "jobs": int, "stride": int, "out": str,
}


@dataclass
class RunManifest:
    """Everything needed to reproduce one run, stored beside its outputs."""

    command: str
    cameras: list
    method: str
    constraint: str
    k: int | None
    f_min: float | None
    f_max: float | None
    config_overrides: dict
    datasets: dict
    out_dir: str
    timestamp: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat())

    def write(self, out_dir: Path):
        path = out_dir / "manifest.json"
        path.write_text(json.dumps(asdict(self), indent=2, sort_keys=True) + "\n",
                        encoding="utf-8")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="camfilter",
        description="Design and evaluate camera prefilters that maximize the "
                    "Vora-Value subspace similarity to the human observer.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--cameras-dir", required=True,
                       help="directory of per-camera sensitivity CSVs")
        p.add_argument("--cmf", default=None,
                       help="observer CMF CSV (default: bundled CIE 1931 2-deg)")
        p.add_argument("--out", required=True, help="output directory")
        p.add_argument("--config", default=None,
                       help="key=value file; command-line flags win")

    def add_camera(p):
        p.add_argument("--camera", required=True, help="camera label (file stem)")

    def add_design(p):
        p.add_argument("--method", choices=("vora", "luther"), default="vora")
        p.add_argument("--basis", type=int, default=None, metavar="K",
                       help="cosine-basis size; enables basis+box constraints")
        p.add_argument("--fmin", type=float, default=None)
        p.add_argument("--fmax", type=float, default=None)
        p.add_argument("--eta", type=float, default=None,
                       help="gradient-infinity-norm stopping threshold")
        p.add_argument("--max-iters", type=int, default=None)

    def add_scene(p):
        p.add_argument("--illuminants", required=True)
        p.add_argument("--reflectances", required=True)
        p.add_argument("--correction", choices=("global", "per-illuminant"),
                       default="global")

    p_opt = sub.add_parser("optimize", help="solve for a filter")
    add_common(p_opt)
    add_camera(p_opt)
    add_design(p_opt)

    p_eval = sub.add_parser("evaluate", help="color-error report for a filter")
    add_common(p_eval)
    add_camera(p_eval)
    add_scene(p_eval)
    p_eval.add_argument("--filter", default="none",
                        help="filter curve CSV, or 'none' for the bare camera")

    p_sweep = sub.add_parser("sweep", help="compare methods across a camera database")
    add_common(p_sweep)
    add_design(p_sweep)
    p_sweep.add_argument("--jobs", type=int, default=1)

    p_conv = sub.add_parser("convergence", help="per-iteration value and color error")
    add_common(p_conv)
    add_camera(p_conv)
    add_design(p_conv)
    add_scene(p_conv)
    p_conv.add_argument("--stride", type=int, default=None,
                        help="evaluate every Nth iterate (default: all up to "
                             "200, then every 10th)")

    return parser


def _apply_config_file(args: argparse.Namespace, argv: list) -> None:
    if not getattr(args, "config", None):
        return
    for line_no, raw in enumerate(Path(args.config).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise UsageError(f"{args.config}:{line_no}: expected key=value")
        key, _, value = line.partition("=")
        key = key.strip()
        if key not in _CONFIG_TYPES:
            raise UsageError(f"{args.config}:{line_no}: unknown key {key!r}")
        dest = key.replace("-", "_")
        if not hasattr(args, dest):
            continue  # key not applicable to this subcommand
        if f"--{key}" in argv:
            continue  # explicit flag wins
        try:
            setattr(args, dest, _CONFIG_TYPES[key](value.strip()))
        except ValueError:
            raise UsageError(f"{args.config}:{line_no}: bad value for {key!r}") from None


class UsageError(Exception):
    pass


def _load_inputs(args):
    cameras = dataio.load_camera_database(args.cameras_dir)
    if args.cmf:
        observer = dataio.load_sensor_csv(args.cmf, kind="cmf")
    else:
        observer = dataio.load_cie1931_cmf()
    return cameras, observer


def _pick_camera(cameras, label):
    for cam in cameras:
        if cam.label == label.lower():
            return cam
    known = ", ".join(c.label for c in cameras)
    raise UsageError(f"camera {label!r} not found; database has: {known}")


def _ascent_config(args) -> AscentConfig:
    overrides = {}
    if args.eta is not None:
        overrides["eta"] = args.eta
    if args.max_iters is not None:
        overrides["max_iters"] = args.max_iters
    return AscentConfig(**overrides)


def _constraints(args, n: int):
    """(B, bounds) when basis/box flags are present, else None."""
    if args.basis is None and args.fmin is None and args.fmax is None:
        return None
    k = args.basis if args.basis is not None else 8
    f_min = args.fmin if args.fmin is not None else 0.0
    f_max = args.fmax if args.fmax is not None else 1.0
    return cosine_basis(n, k), BoxBounds(f_min, f_max)


def _design_filter(camera, observer, args, config):
    """Run the selected method; returns (filter, summary dict)."""
    constraints = _constraints(args, camera.grid.n)
    initial_nu = vora_value(camera, observer)
    if args.method == "vora":
        if constraints is None:
            filt, trace = gradient_ascent_unconstrained(
                camera, observer, default_initial_filter(camera.grid), config)
        else:
            B, bounds = constraints
            c0 = np.zeros(B.shape[1])
            c0[0] = min(1.0, bounds.f_max)
            filt, trace = projected_gradient_ascent(
                camera, observer, B, c0, bounds, config)
        summary = {
            "camera": camera.label,
            "method": "vora",
            "initial_vora": initial_nu,
            "final_vora": trace.final.vora_value,
            "iterations": trace.final.iteration,
            "status": trace.status,
        }
        return filt, trace, summary
    solution = luther_filter(camera, observer, constraints=constraints)
    summary = {
        "camera": camera.label,
        "method": "luther",
        "initial_vora": initial_nu,
        "final_vora": filtered_vora_value(solution.f, camera, observer),
        "iterations": solution.iterations,
        "status": solution.status,
        "residual": solution.residual,
    }
    return solution.f, solution, summary


def _manifest(args, cameras_used, datasets) -> RunManifest:
    constraints = getattr(args, "basis", None) is not None or \
        getattr(args, "fmin", None) is not None or getattr(args, "fmax", None) is not None
    overrides = {}
    for name in ("eta", "max_iters", "stride", "jobs", "correction"):
        value = getattr(args, name, None)
        if value is not None:
            overrides[name] = value
    return RunManifest(
        command=args.command,
        cameras=cameras_used,
        method=getattr(args, "method", "none"),
        constraint="basis+box" if constraints else "unconstrained",
        k=getattr(args, "basis", None),
        f_min=getattr(args, "fmin", None),
        f_max=getattr(args, "fmax", None),
        config_overrides=overrides,
        datasets=datasets,
        out_dir=str(args.out),
        timestamp=datetime.now(timezone.utc).isoformat(),
    )


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _datasets(args) -> dict:
    datasets = {"cameras_dir": str(args.cameras_dir),
                "cmf": str(args.cmf) if args.cmf else "builtin:cie1931_2deg_10nm"}
    for name in ("illuminants", "reflectances", "filter"):
        value = getattr(args, name, None)
        if value is not None:
            datasets[name] = str(value)
    return datasets


def _write_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n",
                    encoding="utf-8")


def cmd_optimize(args) -> int:
    out = _out_dir(args)
    cameras, observer = _load_inputs(args)
    camera = _pick_camera(cameras, args.camera)
    config = _ascent_config(args)
    filt, history, summary = _design_filter(camera, observer, args, config)

    dataio.write_filter_csv(filt, out / "filter.csv")
    if hasattr(history, "write_csv"):
        history.write_csv(out / "trace.csv")
    else:  # Luther residual path
        with open(out / "trace.csv", "w", encoding="utf-8") as fh:
            fh.write("iter,residual\n")
            for i, r in enumerate(history.residuals):
                fh.write(f"{i},{r:.17g}\n")
    _write_json(out / "summary.json", summary)
    _manifest(args, [camera.label], _datasets(args)).write(out)
    print(f"{camera.label}: {args.method} filter, vora {summary['initial_vora']:.6f}"
          f" -> {summary['final_vora']:.6f} ({summary['status']})")
    return EXIT_OK


def cmd_evaluate(args) -> int:
    out = _out_dir(args)
    cameras, observer = _load_inputs(args)
    camera = _pick_camera(cameras, args.camera)
    scene = dataio.load_scene(args.illuminants, args.reflectances)
    if args.filter == "none":
        filt = default_initial_filter(camera.grid)
        method = "none"
    else:
        filt = dataio.load_filter_csv(args.filter)
        method = Path(args.filter).stem
    nu, stats = FilterEvaluator(camera, observer, scene, args.correction).evaluate(filt)

    with open(out / "report.csv", "w", encoding="utf-8") as fh:
        fh.write("method,vora_value,mean,median,p95,p99,max\n")
        row = ",".join(f"{v:.17g}" for v in (nu, *stats.as_row()))
        fh.write(f"{method},{row}\n")
    _manifest(args, [camera.label], _datasets(args)).write(out)
    print(f"{camera.label}: vora {nu:.6f}, mean dE {stats.mean:.4f}, "
          f"median {stats.median:.4f}, max {stats.max:.4f}")
    return EXIT_OK


def _sweep_one(camera, observer, args, config):
    nu_native = vora_value(camera, observer)
    constraints = _constraints(args, camera.grid.n)
    if constraints is None:
        _, trace = gradient_ascent_unconstrained(
            camera, observer, default_initial_filter(camera.grid), config)
        nu_vora = trace.final.vora_value
    else:
        B, bounds = constraints
        c0 = np.zeros(B.shape[1])
        c0[0] = min(1.0, bounds.f_max)
        _, trace = projected_gradient_ascent(camera, observer, B, c0, bounds, config)
        nu_vora = trace.final.vora_value
    solution = luther_filter(camera, observer, constraints=constraints)
    nu_luther = filtered_vora_value(solution.f, camera, observer)
    return camera.label, nu_native, nu_luther, nu_vora


def cmd_sweep(args) -> int:
    out = _out_dir(args)
    cameras, observer = _load_inputs(args)
    config = _ascent_config(args)
    jobs = max(1, args.jobs)
    if jobs == 1:
        rows = [_sweep_one(c, observer, args, config) for c in cameras]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(lambda c: _sweep_one(c, observer, args, config),
                                 cameras))
    rows.sort(key=lambda r: (r[1], r[0]))

    with open(out / "sweep.csv", "w", encoding="utf-8") as fh:
        fh.write("camera,vora_native,vora_luther,vora_vora\n")
        for label, native, lut, vor in rows:
            fh.write(f"{label},{native:.17g},{lut:.17g},{vor:.17g}\n")
    aggregates = {
        "cameras": len(rows),
        "mean_vora_native": float(np.mean([r[1] for r in rows])),
        "mean_vora_luther": float(np.mean([r[2] for r in rows])),
        "mean_vora_vora": float(np.mean([r[3] for r in rows])),
    }
    _write_json(out / "aggregates.json", aggregates)
    _manifest(args, [r[0] for r in rows], _datasets(args)).write(out)
    print(f"{len(rows)} cameras: native {aggregates['mean_vora_native']:.4f}, "
          f"luther {aggregates['mean_vora_luther']:.4f}, "
          f"vora {aggregates['mean_vora_vora']:.4f}")
    return EXIT_OK


def _convergence_indices(n_records: int, stride) -> list:
    last = n_records - 1
    if stride is not None:
        picks = list(range(0, n_records, max(1, stride)))
    else:
        picks = list(range(0, min(n_records, 201)))
        picks += list(range(210, n_records, 10))
    if last not in picks:
        picks.append(last)
    return picks


def cmd_convergence(args) -> int:
    if args.method != "vora":
        raise UsageError("convergence traces are produced by the ascent method; "
                         "use --method vora")
    out = _out_dir(args)
    cameras, observer = _load_inputs(args)
    camera = _pick_camera(cameras, args.camera)
    scene = dataio.load_scene(args.illuminants, args.reflectances)
    config = _ascent_config(args)
    _, trace, _ = _design_filter(camera, observer, args, config)

    evaluator = FilterEvaluator(camera, observer, scene, args.correction)
    with open(out / "convergence.csv", "w", encoding="utf-8") as fh:
        fh.write("iter,vora_value,mean_delta_e\n")
        for idx in _convergence_indices(len(trace.records), args.stride):
            record = trace.records[idx]
            # Raw iterates may exceed unit transmittance; the uniform
            # rescale leaves both scores unchanged.
            values = record.filter_values / max(1.0, np.max(record.filter_values))
            nu, stats = evaluator.evaluate(values)
            fh.write(f"{record.iteration},{nu:.17g},{stats.mean:.17g}\n")
    _manifest(args, [camera.label], _datasets(args)).write(out)
    print(f"{camera.label}: {len(trace.records)} iterations traced")
    return EXIT_OK


_COMMANDS = {
    "optimize": cmd_optimize,
    "evaluate": cmd_evaluate,
    "sweep": cmd_sweep,
    "convergence": cmd_convergence,
}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        _apply_config_file(args, argv)
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except _NUMERIC_ERRORS as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except _DATA_ERRORS as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
