"""Command-line entry point: ``biharmonic-scatter <command> [options]``.

Every run writes into ``<outdir>/<command>/<timestamp>/`` together with a
``config.json`` snapshot.  Files are produced in a scratch directory and
renamed into place once the run succeeds.  Exit status is 0 on success, 1
when a solver fails and 2 for invalid input.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import json
import math
import os
import re
import shutil
import sys
import tempfile
from pathlib import Path

import numpy as np

from . import harness, mie_disk
from .bie import MaterialPair, kite, load_curve
from .errors import ScatteringError
from .mie_disk import DiskProblem, PlaneWave, PointSource

OUTDIR_ENV = "BIHARMONIC_SCATTERING_OUTDIR"
DEFAULT_OUTDIR = "runs"

EXIT_OK, EXIT_SOLVER, EXIT_INPUT = 0, 1, 2


def parse_complex(text: str) -> complex:
    """Parse ``a``, ``a+bi``, ``a-bi``, ``bi``, ``a+i`` (``j`` also accepted)."""
    s = text.strip().replace(" ", "")
    try:
        if not s:
            raise ValueError
        if s[-1] in "ij":
            body = s[:-1]
            split = next(
                (p for p in range(len(body) - 1, 0, -1) if body[p] in "+-" and body[p - 1] not in "eE"),
                None,
            )
            real_part, imag_part = (body[:split], body[split:]) if split else ("", body)
            imag = {"": 1.0, "+": 1.0, "-": -1.0}.get(imag_part)
            if imag is None:
                imag = float(imag_part)
            value = complex(float(real_part) if real_part else 0.0, imag)
        else:
            value = complex(float(s), 0.0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number of the form a+bi: {text!r}") from None
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise argparse.ArgumentTypeError(f"complex value must be finite: {text!r}")
    return value


_PI_ANGLE = re.compile(r"^([+-]?(?:\d+\.?\d*|\.\d+)?)\*?pi(?:/(\d+\.?\d*))?$")


def parse_angle(text: str) -> float:
    """Radians, either a number or ``[c]pi[/d]`` such as ``pi/2`` or ``-3pi/4``."""
    s = text.strip().replace(" ", "")
    m = _PI_ANGLE.match(s)
    try:
        if m:
            c = m.group(1)
            coef = {"": 1.0, "+": 1.0, "-": -1.0}.get(c)
            coef = float(c) if coef is None else coef
            return coef * math.pi / (float(m.group(2)) if m.group(2) else 1.0)
        value = float(s)
    except (ValueError, ZeroDivisionError):
        value = math.nan
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"not an angle: {text!r}")
    return value


def parse_incidence(text: str):
    """``plane:<angle>`` or ``source:<angle>``; returns ``(kind, angle)``."""
    kind, _, angle = text.partition(":")
    if kind not in ("plane", "source") or not angle:
        raise argparse.ArgumentTypeError(f"incidence must be plane:<angle> or source:<angle>, got {text!r}")
    return kind, parse_angle(angle)


def parse_window(text: str):
    try:
        vals = tuple(float(v) for v in text.split(","))
    except ValueError:
        vals = ()
    if len(vals) != 4 or not (vals[1] > vals[0] and vals[3] > vals[2]):
        raise argparse.ArgumentTypeError(f"window must be xmin,xmax,ymin,ymax, got {text!r}")
    return vals


def _positive(kind):
    def parse(text):
        try:
            value = kind(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
        if not value > 0 or (kind is float and not math.isfinite(value)):
            raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
        return value

    return parse


def _nonnegative_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be nonnegative: {text!r}")
    return value


def _even_nodes(text):
    value = _positive(int)(text)
    if value % 2 or value < 4:
        raise argparse.ArgumentTypeError(f"node count must be even and >= 4: {text!r}")
    return value


# Parser.


def _add_common(p):
    p.add_argument(
        "--outdir",
        default=None,
        help=f"output root (default: ${OUTDIR_ENV} or ./{DEFAULT_OUTDIR})",
    )
    p.add_argument("--format", choices=("csv", "json"), default="csv", help="matrix/grid file format (default: csv)")
    p.add_argument("--grid", type=_positive(int), default=harness.DEFAULT_GRID, help="angular grid size M (default: 64)")


def _add_disk(p):
    p.add_argument("--k", type=_positive(float), default=2.0, help="wavenumber k > 0 (default: 2)")
    p.add_argument("--n", type=parse_complex, default=4 + 1j, help="refractive index a+bi (default: 4+1i)")
    p.add_argument(
        "--L", type=_nonnegative_int, default=mie_disk.DEFAULT_TRUNCATION, help="series truncation |l| <= L (default: 10)"
    )


def _add_curve(p, default_tau_minus=5.0, default_tau_plus=15.0):
    p.add_argument(
        "--tau-minus", type=parse_complex, default=None, help=f"interior wavenumber a+bi (default: {default_tau_minus:g})"
    )
    p.add_argument(
        "--tau-plus", type=_positive(float), default=None, help=f"exterior wavenumber > 0 (default: {default_tau_plus:g})"
    )
    p.add_argument(
        "--nodes", type=_even_nodes, default=harness.DEFAULT_NODES, help="boundary quadrature nodes N, even (default: 500)"
    )
    p.add_argument("--curve", default=None, help="curve file (JSON, see README); default: the built-in kite")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="biharmonic-scatter",
        description="Plate (biharmonic) scattering by a penetrable obstacle: series and boundary-integral solvers.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("disk-farfield", help="far-field reciprocity matrices F1, F2 for the unit disk")
    _add_disk(p)
    _add_common(p)

    p = sub.add_parser("disk-nearfield", help="near-field reciprocity matrices N1, N2 for the unit disk (radius 2)")
    _add_disk(p)
    _add_common(p)

    p = sub.add_parser("kite-nearfield", help="near-field reciprocity matrices on radius 3 around the kite")
    _add_curve(p)
    _add_common(p)

    p = sub.add_parser(
        "field-map",
        help="total field on a pixel grid (disk if --k/--n are given, otherwise the kite)",
    )
    p.add_argument("--k", type=_positive(float), default=None, help="disk wavenumber (selects the disk solver)")
    p.add_argument("--n", type=parse_complex, default=None, help="disk index a+bi (selects the disk solver)")
    p.add_argument("--L", type=_nonnegative_int, default=mie_disk.DEFAULT_TRUNCATION, help="series truncation (default: 10)")
    _add_curve(p)
    p.add_argument(
        "--incidence",
        type=parse_incidence,
        default=None,
        help="plane:<angle> or source:<angle>, angle in radians or like pi/2; sources sit on radius 2 "
        "(disk) or 3 (kite) (default: plane:0 for the disk, source:pi for the kite)",
    )
    p.add_argument("--window", type=parse_window, default=None, help="xmin,xmax,ymin,ymax (default: [-3,3]^2 disk, [-4,4]^2 kite)")
    p.add_argument("--resolution", type=_positive(int), default=harness.DEFAULT_RESOLUTION, help="pixels per side (default: 400)")
    p.add_argument("--outdir", default=None, help=f"output root (default: ${OUTDIR_ENV} or ./{DEFAULT_OUTDIR})")
    p.add_argument("--format", choices=("csv", "json"), default="csv", help="grid file format (default: csv)")
    return parser


# Output handling.


class _RunDirectory:
    """Scratch directory renamed to ``<root>/<command>/<timestamp>`` on success."""

    def __init__(self, outdir, command: str):
        root = Path(outdir or os.environ.get(OUTDIR_ENV) or DEFAULT_OUTDIR) / command
        root.mkdir(parents=True, exist_ok=True)
        self.root = root
        self.path = Path(tempfile.mkdtemp(prefix=".partial-", dir=root))

    def commit(self) -> Path:
        stamp = _dt.datetime.now(_dt.timezone.utc).strftime("%Y%m%dT%H%M%SZ")
        final, i = self.root / stamp, 1
        while final.exists():
            final, i = self.root / f"{stamp}-{i}", i + 1
        os.replace(self.path, final)
        return final

    def discard(self) -> None:
        shutil.rmtree(self.path, ignore_errors=True)


def _config(args) -> dict:
    cfg = {k: v for k, v in vars(args).items() if k not in ("outdir",)}
    return harness.to_jsonable(cfg)


def _write_pair(run: Path, fmt: str, names, pair, norm: float, extra: dict) -> None:
    A, B = pair
    if fmt == "csv":
        harness.write_matrix_csv(run / f"{names[0]}.csv", A.entries)
        harness.write_matrix_csv(run / f"{names[1]}.csv", B.entries)
    else:
        payload = {"grid": A.grid, "kind": A.kind.value, "radius": A.radius, **A.metadata}
        payload.update({names[0]: A.entries, names[1]: B.entries})
        harness.write_json(run / "matrices.json", payload)
    harness.write_json(run / "summary.json", {"norm_2": norm, **extra})


def _run_pair(args, names, pair):
    norm = harness.spectral_norm(pair[0] - pair[1])
    label = f"||{names[0]} - {names[1]}||_2"
    return norm, label, lambda run: _write_pair(run, args.format, names, pair, norm, {"quantity": label})


def _cmd_disk_farfield(args):
    return _run_pair(args, ("F1", "F2"), harness.farfield_matrices(args.k, args.n, args.grid, args.L))


def _cmd_disk_nearfield(args):
    return _run_pair(args, ("N1", "N2"), harness.nearfield_matrices_disk(args.k, args.n, args.grid, args.L))


def _curve_and_material(args):
    curve = load_curve(args.curve) if args.curve else kite()
    tau_minus = 5.0 if args.tau_minus is None else args.tau_minus
    tau_plus = 15.0 if args.tau_plus is None else args.tau_plus
    return curve, MaterialPair(tau_minus, tau_plus)


def _cmd_kite_nearfield(args):
    curve, mat = _curve_and_material(args)

    def progress(done, total):
        print(f"source {done}/{total}", file=sys.stderr)

    pair = harness.nearfield_matrices_kite(
        mat.tau_minus, mat.tau_plus, args.grid, args.nodes, curve=curve, progress=progress
    )
    return _run_pair(args, ("N1", "N2"), pair)


def _cmd_field_map(args):
    disk = args.k is not None or args.n is not None
    if disk and (args.tau_minus is not None or args.tau_plus is not None or args.curve):
        raise ValueError("give either --k/--n (disk) or --tau-minus/--tau-plus/--curve, not both")
    if disk:
        kind, angle = args.incidence or ("plane", 0.0)
        inc = PlaneWave(angle) if kind == "plane" else PointSource(angle, harness.DISK_RADIUS)
        problem = DiskProblem(args.k if args.k is not None else 2.0, args.n if args.n is not None else 4 + 1j, inc, args.L)
        spec = harness.DiskMapSpec(problem)
    else:
        curve, mat = _curve_and_material(args)
        kind, angle = args.incidence or ("source", math.pi)
        if kind == "plane":
            inc = PlaneWave(angle)
        else:
            inc = harness.KITE_RADIUS * np.array([math.cos(angle), math.sin(angle)])
        spec = harness.CurveMapSpec(mat, curve, inc, args.nodes)
    fmap = harness.field_map(spec, args.window, args.resolution)

    def write(run: Path):
        if args.format == "csv":
            harness.write_matrix_csv(run / "field.csv", fmap.values)
            np.savetxt(run / "inside.csv", fmap.inside.astype(int), fmt="%d", delimiter=",")
        else:
            harness.write_json(
                run / "field.json", {"x": fmap.x, "y": fmap.y, "values": fmap.values, "inside": fmap.inside.astype(int)}
            )
        harness.write_ppm(run / "real.ppm", fmap.real, signed=True)
        harness.write_ppm(run / "abs_real.ppm", fmap.abs_real, signed=False)

    finite = np.isfinite(fmap.values)
    return float(np.max(np.abs(fmap.values[finite]))) if finite.any() else 0.0, "max |u|", write


COMMANDS = {
    "disk-farfield": _cmd_disk_farfield,
    "disk-nearfield": _cmd_disk_nearfield,
    "kite-nearfield": _cmd_kite_nearfield,
    "field-map": _cmd_field_map,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        value, label, write = COMMANDS[args.command](args)
    except (ScatteringError, np.linalg.LinAlgError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except Exception as exc:  # noqa: BLE001 - unexpected numerical failure
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_SOLVER

    try:
        run = _RunDirectory(args.outdir, args.command)
    except OSError as exc:
        print(f"error: cannot create output directory: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        (run.path / "config.json").write_text(json.dumps(_config(args), indent=1, sort_keys=True) + "\n")
        write(run.path)
        final = run.commit()
    except BaseException:
        run.discard()
        raise
    print(f"{label} = {value:.6e}")
    print(f"output: {final}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
