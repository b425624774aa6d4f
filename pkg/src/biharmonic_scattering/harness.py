"""Sampled far- and near-field matrices, reciprocity norms and field maps.

Reciprocity is checked through pairs of matrices on a uniform angular grid
``theta_i = 2 pi i / M``:

* far field, plane waves: ``F1[i, j] = u_inf(theta_i, theta_j)`` and
  ``F2[i, j] = u_inf(theta_j + pi, theta_i + pi)``;
* near field, point sources on a circle: ``N1[i, j] = u^s(x_i; z_j)`` and
  ``N2[i, j] = u^s(x_j; z_i)``.

Both differences vanish for an exact solver, so ``spectral_norm(F1 - F2)``
measures how well a discretisation respects reciprocity.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional, Union

import numpy as np

from . import mie_disk
from .bie import system
from .bie.curves import BoundaryNodes, ParametricCurve, kite
from .errors import PlacementError
from .mie_disk import DiskProblem, PlaneWave, PointSource

DEFAULT_GRID = 64
DEFAULT_NODES = 500
DISK_RADIUS = mie_disk.SOURCE_RADIUS
KITE_RADIUS = 3.0
DEFAULT_RESOLUTION = 400
DISK_WINDOW = (-3.0, 3.0, -3.0, 3.0)
KITE_WINDOW = (-4.0, 4.0, -4.0, 4.0)
# Points per block when evaluating boundary-integral fields on a grid.
EVALUATION_CHUNK = 2048


class FieldKind(enum.Enum):
    FAR_FIELD = "far_field"
    NEAR_FIELD_DISK = "near_field_disk"
    NEAR_FIELD_KITE = "near_field_kite"


def angular_grid(M: int) -> np.ndarray:
    if M < 1:
        raise ValueError(f"grid size must be positive, got {M}")
    return 2 * np.pi * np.arange(M) / M


@dataclass(frozen=True)
class SampledFieldMatrix:
    """``M x M`` samples on the grid ``theta_i = 2 pi i / M``."""

    entries: np.ndarray
    kind: FieldKind
    radius: Optional[float] = None
    metadata: dict = field(default_factory=dict)

    @property
    def M(self) -> int:
        return self.entries.shape[0]

    @property
    def grid(self) -> np.ndarray:
        return angular_grid(self.M)

    def __sub__(self, other: "SampledFieldMatrix") -> np.ndarray:
        return self.entries - other.entries


def spectral_norm(matrix) -> float:
    """Largest singular value of ``matrix``."""
    A = np.asarray(matrix)
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    if A.size == 0:
        return 0.0
    return float(np.linalg.norm(np.atleast_2d(A), 2))


def farfield_matrices(k: float, n: complex, M: int = DEFAULT_GRID, L: int = mie_disk.DEFAULT_TRUNCATION):
    """Far-field reciprocity pair ``(F1, F2)`` for the unit disk."""
    solution = mie_disk.solve_modes(DiskProblem(k, n, PlaneWave(), L))
    th = angular_grid(M)
    theta, phi = np.meshgrid(th, th, indexing="ij")
    meta = {"k": k, "n": complex(n), "L": L}
    F1 = mie_disk.far_field(solution, theta, phi)
    F2 = mie_disk.far_field(solution, phi + np.pi, theta + np.pi)
    return (
        SampledFieldMatrix(F1, FieldKind.FAR_FIELD, None, meta),
        SampledFieldMatrix(F2, FieldKind.FAR_FIELD, None, meta),
    )


def nearfield_matrices_disk(k: float, n: complex, M: int = DEFAULT_GRID, L: int = mie_disk.DEFAULT_TRUNCATION):
    """Near-field reciprocity pair ``(N1, N2)`` for the unit disk, sources on radius 2."""
    solution = mie_disk.solve_modes(DiskProblem(k, n, PointSource(0.0, DISK_RADIUS), L))
    th = angular_grid(M)
    theta, theta_z = np.meshgrid(th, th, indexing="ij")
    meta = {"k": k, "n": complex(n), "L": L}
    N1 = mie_disk.near_field_point_source(solution, theta, theta_z)
    N2 = mie_disk.near_field_point_source(solution, theta_z, theta)
    return (
        SampledFieldMatrix(N1, FieldKind.NEAR_FIELD_DISK, DISK_RADIUS, meta),
        SampledFieldMatrix(N2, FieldKind.NEAR_FIELD_DISK, DISK_RADIUS, meta),
    )


def circle_points(M: int, radius: float) -> np.ndarray:
    th = angular_grid(M)
    return radius * np.column_stack([np.cos(th), np.sin(th)])


def bie_scattered_matrix(
    mat: system.MaterialPair,
    nodes: BoundaryNodes,
    sources: np.ndarray,
    receivers: np.ndarray,
    progress: Optional[Callable[[int, int], None]] = None,
) -> np.ndarray:
    """``U[i, j] = u^s(receiver_i; source_j)`` from one factorisation of the block system."""
    solver = system.TransmissionSolver(mat, nodes)
    rhs = np.empty((4 * nodes.N, len(sources)), complex)
    for j, z in enumerate(sources):
        try:
            rhs[:, j] = system.incident_traces_point_source(z, mat.tau_plus, nodes).stacked()
        except PlacementError as exc:
            angle = np.arctan2(z[1], z[0]) % (2 * np.pi)
            raise PlacementError(f"source {j} at angle {angle:.6f}: {exc}") from None
    densities = solver.solve_stacked(rhs)
    E = system.field_evaluation_matrix(mat, nodes, receivers)
    U = np.empty((len(receivers), len(sources)), complex)
    for j in range(len(sources)):
        U[:, j] = E @ densities[:, j]
        if progress is not None:
            progress(j + 1, len(sources))
    return U


def nearfield_matrices_kite(
    tau_minus: complex,
    tau_plus: float,
    M: int = DEFAULT_GRID,
    N: int = DEFAULT_NODES,
    curve: Optional[ParametricCurve] = None,
    radius: float = KITE_RADIUS,
    progress: Optional[Callable[[int, int], None]] = None,
):
    """Near-field reciprocity pair for a curve (the kite by default), sources on ``radius``."""
    curve = curve or kite()
    nodes = curve.discretize(N)
    mat = system.MaterialPair(tau_minus, tau_plus)
    pts = circle_points(M, radius)
    U = bie_scattered_matrix(mat, nodes, pts, pts, progress)
    meta = {"tau_minus": complex(tau_minus), "tau_plus": tau_plus, "N": N, "curve": curve.name}
    return (
        SampledFieldMatrix(U, FieldKind.NEAR_FIELD_KITE, radius, meta),
        SampledFieldMatrix(U.T.copy(), FieldKind.NEAR_FIELD_KITE, radius, meta),
    )


# Field maps.


@dataclass(frozen=True)
class DiskMapSpec:
    """Series solution on the unit disk."""

    problem: DiskProblem


@dataclass(frozen=True)
class CurveMapSpec:
    """Boundary-integral solution for a point source or plane wave of wavenumber ``tau_plus``."""

    mat: system.MaterialPair
    curve: ParametricCurve
    incidence: Union[PlaneWave, np.ndarray]
    N: int = DEFAULT_NODES


@dataclass(frozen=True)
class FieldMap:
    """Total field on a pixel grid; ``values`` is NaN where it was not evaluated.

    Row ``i`` holds ``y[i]`` (increasing), column ``j`` holds ``x[j]``.
    """

    x: np.ndarray
    y: np.ndarray
    values: np.ndarray
    inside: np.ndarray

    @property
    def real(self) -> np.ndarray:
        return self.values.real

    @property
    def abs_real(self) -> np.ndarray:
        return np.abs(self.values.real)


def _pixel_grid(window, resolution):
    xmin, xmax, ymin, ymax = window
    if not (xmax > xmin and ymax > ymin):
        raise ValueError(f"empty window {window}")
    nx, ny = (resolution, resolution) if np.isscalar(resolution) else resolution
    return np.linspace(xmin, xmax, nx), np.linspace(ymin, ymax, ny)


def _disk_map(spec: DiskMapSpec, X, Y):
    solution = mie_disk.solve_modes(spec.problem)
    # The series is regular at the origin; nudge r = 0 off the polar singularity.
    r = np.maximum(np.hypot(X, Y), np.finfo(float).tiny)
    th = np.arctan2(Y, X)
    # Pixels on the interface take the (continuous) one-sided interior value.
    r = np.where(np.abs(r - 1) < 1e-12, 1 - 1e-11, r)
    values = np.full(X.shape, np.nan + 0j)
    ok = np.ones(X.shape, bool)
    if isinstance(spec.problem.incidence, PointSource):
        inc = spec.problem.incidence
        z = inc.radius * np.array([np.cos(inc.angle), np.sin(inc.angle)])
        ok &= np.hypot(X - z[0], Y - z[1]) > 0
    values[ok] = mie_disk.field_at(solution, r[ok], th[ok], total=True)
    return values, r < 1


def _incident(spec: CurveMapSpec, pts):
    k = spec.mat.tau_plus
    if isinstance(spec.incidence, PlaneWave):
        d = np.array([np.cos(spec.incidence.angle), np.sin(spec.incidence.angle)])
        return np.exp(1j * k * (pts @ d))
    z = np.asarray(spec.incidence, float)
    return mie_disk.fundamental_solution(k, np.hypot(pts[:, 0] - z[0], pts[:, 1] - z[1]))


def _curve_map(spec: CurveMapSpec, X, Y):
    nodes = spec.curve.discretize(spec.N)
    mat = spec.mat
    if isinstance(spec.incidence, PlaneWave):
        traces = system.incident_traces_plane_wave(spec.incidence.angle, mat.tau_plus, nodes)
    else:
        traces = system.incident_traces_point_source(spec.incidence, mat.tau_plus, nodes)
    dens = system.TransmissionSolver(mat, nodes).solve(traces).stacked()
    pts = np.column_stack([X.ravel(), Y.ravel()])
    inside = nodes.contains(pts)
    usable = nodes.distance(pts) >= nodes.mesh_width
    if not isinstance(spec.incidence, PlaneWave):
        z = np.asarray(spec.incidence, float)
        usable &= np.hypot(pts[:, 0] - z[0], pts[:, 1] - z[1]) > 0
    values = np.full(len(pts), np.nan + 0j)
    idx = np.flatnonzero(usable)
    for start in range(0, len(idx), EVALUATION_CHUNK):
        sel = idx[start : start + EVALUATION_CHUNK]
        u = system.field_evaluation_matrix(mat, nodes, pts[sel]) @ dens
        out = ~inside[sel]
        u[out] += _incident(spec, pts[sel][out])
        values[sel] = u
    return values.reshape(X.shape), inside.reshape(X.shape)


def field_map(spec: Union[DiskMapSpec, CurveMapSpec], window=None, resolution=DEFAULT_RESOLUTION) -> FieldMap:
    """Total field (incident plus scattered outside, transmitted inside) on a pixel grid.

    Pixels at a point source are left as NaN, and so are pixels within one
    mesh width of the curve for boundary-integral solutions.
    """
    if window is None:
        window = DISK_WINDOW if isinstance(spec, DiskMapSpec) else KITE_WINDOW
    x, y = _pixel_grid(window, resolution)
    X, Y = np.meshgrid(x, y)
    if isinstance(spec, DiskMapSpec):
        values, inside = _disk_map(spec, X, Y)
    else:
        values, inside = _curve_map(spec, X, Y)
    return FieldMap(x, y, values, inside)


# Writers.


def format_complex(z: complex) -> str:
    """``re+imj`` with full double precision."""
    z = complex(z)
    im = repr(z.imag)
    return f"{z.real!r}{im if im[0] == '-' else '+' + im}j"


def write_matrix_csv(path, matrix) -> None:
    A = np.atleast_2d(np.asarray(matrix))
    lines = [",".join(format_complex(z) for z in row) for row in A]
    Path(path).write_text("\n".join(lines) + "\n")


def read_matrix_csv(path) -> np.ndarray:
    rows = Path(path).read_text().strip().splitlines()
    return np.array([[complex(c) for c in row.split(",")] for row in rows])


def to_jsonable(value):
    if isinstance(value, (complex, np.complexfloating)):
        return {"re": float(value.real), "im": float(value.imag)}
    if isinstance(value, np.ndarray):
        if np.iscomplexobj(value):
            return {"re": value.real.tolist(), "im": value.imag.tolist(), "shape": list(value.shape)}
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, dict):
        return {k: to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    return value


def write_json(path, payload: dict) -> None:
    """Complex arrays become ``{"re": [...], "im": [...], "shape": [...]}`` (row-major)."""
    Path(path).write_text(json.dumps(to_jsonable(payload), indent=1, allow_nan=True) + "\n")


def _diverging(t):
    # t in [-1, 1]: blue (-1) -> white (0) -> red (+1).
    t = np.clip(t, -1, 1)
    r = np.where(t < 0, 1 + t, 1.0)
    b = np.where(t > 0, 1 - t, 1.0)
    g = 1 - np.abs(t)
    return np.stack([r, g, b], axis=-1)


def write_ppm(path, image, signed: bool = True) -> None:
    """Binary PPM of a real image, scaled linearly by its largest finite magnitude.

    ``signed=True`` maps ``[-m, m]`` to blue-white-red; otherwise ``[0, m]``
    maps to white-black.  NaN pixels are drawn grey.  Row 0 of ``image`` is
    the bottom of the picture.
    """
    img = np.asarray(image, float)
    finite = np.isfinite(img)
    m = np.max(np.abs(img[finite])) if np.any(finite) else 1.0
    m = m if m > 0 else 1.0
    t = np.where(finite, img / m, 0.0)
    rgb = _diverging(t) if signed else np.repeat((1 - np.clip(t, 0, 1))[..., None], 3, axis=-1)
    rgb[~finite] = 0.5
    pix = np.round(255 * rgb[::-1]).astype(np.uint8)
    h, w = img.shape
    Path(path).write_bytes(f"P6\n{w} {h}\n255\n".encode() + pix.tobytes())
