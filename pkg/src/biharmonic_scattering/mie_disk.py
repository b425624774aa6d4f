"""Fourier-series solution of the penetrable unit-disk transmission problem.

Outside the disk the scattered field is split into a propagating part built
from ``H_l(kr)`` and an evanescent part built from ``H_l(ikr)``; inside, the
total field is a combination of ``J_l(k n^(1/4) r)`` and ``J_l(i k n^(1/4) r)``.
Matching ``u``, ``d_r u``, ``Lap u`` and ``d_r Lap u`` at ``r = 1`` gives a
4x4 linear system per Fourier mode.

Conventions (kept per incidence type):

* plane wave ``exp(ik x.d)``, ``d = (cos phi, sin phi)``: every series
  carries ``i**l exp(il(theta - phi))``;
* point source ``G(x, z; k)`` with ``z = R_s (cos phi, sin phi)``: every series
  carries ``exp(il(theta - phi))`` only.

The mode coefficients do not depend on ``phi``, so one solve serves every
incidence direction or source angle.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

import numpy as np

from . import specfun
from .errors import ResonanceError

DEFAULT_TRUNCATION = 10
SOURCE_RADIUS = 2.0
CONDITION_LIMIT = 1e12


@dataclass(frozen=True)
class PlaneWave:
    angle: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "angle", float(self.angle) % (2 * np.pi))


@dataclass(frozen=True)
class PointSource:
    angle: float = 0.0
    radius: float = SOURCE_RADIUS

    def __post_init__(self):
        object.__setattr__(self, "angle", float(self.angle) % (2 * np.pi))
        if self.radius <= 1.0:
            raise ValueError("point source must lie outside the unit disk")


Incidence = Union[PlaneWave, PointSource]


@dataclass(frozen=True)
class DiskProblem:
    """Unit disk with constant index ``n`` illuminated at wavenumber ``k``."""

    k: float
    n: complex
    incidence: Incidence = field(default_factory=PlaneWave)
    L: int = DEFAULT_TRUNCATION

    def __post_init__(self):
        if not self.k > 0:
            raise ValueError(f"wavenumber must be positive, got {self.k}")
        if self.L < 0:
            raise ValueError(f"truncation must be nonnegative, got {self.L}")
        object.__setattr__(self, "n", complex(self.n))

    @property
    def interior_wavenumber(self) -> complex:
        return self.k * self.n**0.25


@dataclass(frozen=True)
class ModeCoefficients:
    ell: int
    a: complex
    b: complex
    c: complex
    d: complex


@dataclass(frozen=True)
class DiskSolution:
    """Solved mode coefficients for ``|l| <= L``, stored as arrays over ``ell``."""

    problem: DiskProblem
    ell: np.ndarray
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    d: np.ndarray
    residuals: np.ndarray

    @property
    def modes(self) -> list[ModeCoefficients]:
        return [
            ModeCoefficients(int(l), complex(a), complex(b), complex(c), complex(d))
            for l, a, b, c, d in zip(self.ell, self.a, self.b, self.c, self.d)
        ]

    def __iter__(self):
        return iter(self.modes)

    def __len__(self):
        return len(self.ell)


def assemble_mode_matrix(ell: int, k: float, n: complex) -> np.ndarray:
    """4x4 matrix acting on ``(a, b, c, d)`` for Fourier mode ``ell``.

    Rows are the jumps of ``u``, ``d_r u``, ``Lap u``, ``d_r Lap u`` at
    ``r = 1`` (outside minus inside).  All Hankel derivatives are taken at the
    boundary, i.e. at arguments ``k`` and ``ik``.
    """
    q = complex(n) ** 0.25
    tau = k * q
    h = specfun.hankel1(ell, k)
    hp = specfun.hankel1_prime(ell, k)
    he = specfun.hankel1(ell, 1j * k)
    hep = specfun.hankel1_prime(ell, 1j * k)
    j = specfun.bessel_j(ell, tau)
    jp = specfun.bessel_j_prime(ell, tau)
    je = specfun.bessel_j(ell, 1j * tau)
    jep = specfun.bessel_j_prime(ell, 1j * tau)
    k2, k3 = k**2, k**3
    return np.array(
        [
            [h, he, -j, -je],
            [k * hp, 1j * k * hep, -tau * jp, -1j * tau * jep],
            [-k2 * h, k2 * he, k2 * q**2 * j, -k2 * q**2 * je],
            [-k3 * hp, 1j * k3 * hep, k3 * q**3 * jp, -1j * k3 * q**3 * jep],
        ],
        dtype=complex,
    )


def plane_wave_rhs(ell: int, k: float) -> np.ndarray:
    """Minus the incident traces of the ``i**l``-normalised Jacobi-Anger mode."""
    j = specfun.bessel_j(ell, k)
    jp = specfun.bessel_j_prime(ell, k)
    return np.array([-j, -k * jp, k**2 * j, k**3 * jp], dtype=complex)


def point_source_rhs(ell: int, k: float, radius: float = SOURCE_RADIUS) -> np.ndarray:
    """Minus the incident traces of mode ``ell`` of ``G(x, z; k)``, ``|z| = radius``.

    The oscillatory part ``H_l(k|z|) J_l(kr)`` is annihilated by ``Lap + k^2``
    and the decaying part ``H_l(ik|z|) J_l(ikr)`` by ``Lap - k^2``, so both
    Laplacian rows pick up ``-k^2`` times the source-mode amplitude.
    """
    hs = specfun.hankel1(ell, radius * k)
    hse = specfun.hankel1(ell, radius * 1j * k)
    j = specfun.bessel_j(ell, k)
    jp = specfun.bessel_j_prime(ell, k)
    je = specfun.bessel_j(ell, 1j * k)
    jep = specfun.bessel_j_prime(ell, 1j * k)
    k2, k3 = k**2, k**3
    traces = np.array(
        [
            hs * j - hse * je,
            k * hs * jp - 1j * k * hse * jep,
            -k2 * hs * j - k2 * hse * je,
            -k3 * hs * jp - 1j * k3 * hse * jep,
        ],
        dtype=complex,
    )
    return -1j / (8 * k2) * traces


def _equilibrated_condition(A: np.ndarray) -> float:
    # Raw columns differ by many orders of magnitude for large |l|; scaling is
    # not a sign of resonance, so measure conditioning after equilibration.
    A = A / np.max(np.abs(A), axis=1, keepdims=True)
    A = A / np.max(np.abs(A), axis=0, keepdims=True)
    return float(np.linalg.cond(A))


def solve_modes(problem: DiskProblem) -> DiskSolution:
    """Solve the 4x4 system of every mode ``-L <= l <= L``.

    Plane-wave coefficients are even in ``l``; point-source coefficients
    satisfy ``x_{-l} = (-1)**l x_l`` because the right-hand side is even
    while the matrix picks up ``(-1)**l``.

    Raises
    ------
    ResonanceError
        If a mode matrix has (equilibrated) condition number above 1e12.
    """
    k, n, L = problem.k, problem.n, problem.L
    inc = problem.incidence
    ell = np.arange(-L, L + 1)
    table = np.empty((ell.size, 4), dtype=complex)
    residuals = np.empty(ell.size)
    for i, m in enumerate(ell):
        A = assemble_mode_matrix(m, k, n)
        cond = _equilibrated_condition(A)
        if not np.isfinite(cond) or cond > CONDITION_LIMIT:
            raise ResonanceError(
                f"mode system nearly singular (cond {cond:.3e}) at l={m}, k={k}, n={n}"
            )
        if isinstance(inc, PlaneWave):
            rhs = plane_wave_rhs(m, k)
        else:
            rhs = point_source_rhs(m, k, inc.radius)
        table[i] = np.linalg.solve(A, rhs)
        residuals[i] = np.linalg.norm(A @ table[i] - rhs) / np.linalg.norm(rhs)
    return DiskSolution(
        problem=problem,
        ell=ell,
        a=table[:, 0],
        b=table[:, 1],
        c=table[:, 2],
        d=table[:, 3],
        residuals=residuals,
    )


def _phase(solution: DiskSolution, theta, phi):
    """``exp(il(theta - phi))`` with the mode axis last."""
    diff = np.asarray(theta, float) - np.asarray(phi, float)
    return np.exp(1j * diff[..., None] * solution.ell)


def far_field(solution: DiskSolution, theta, phi):
    """Far-field pattern ``u_inf(theta, phi) = (4/i) sum_l a_l exp(il(theta - phi))``.

    ``phi`` is the incidence angle; the solution must come from plane-wave incidence.
    """
    if not isinstance(solution.problem.incidence, PlaneWave):
        raise ValueError("far field pattern needs plane-wave coefficients")
    theta, phi = np.broadcast_arrays(np.asarray(theta, float), np.asarray(phi, float))
    out = (4 / 1j) * (_phase(solution, theta, phi) @ solution.a)
    return out[()] if out.ndim == 0 else out


def near_field_point_source(solution: DiskSolution, theta, theta_z):
    """Scattered field at ``R_s e^{i theta}`` due to a source at ``R_s e^{i theta_z}``.

    Both points lie on the source circle (radius 2 by default).
    """
    inc = solution.problem.incidence
    if not isinstance(inc, PointSource):
        raise ValueError("near field needs point-source coefficients")
    k, R = solution.problem.k, inc.radius
    ell = solution.ell
    radial = solution.a * specfun.hankel1(ell, R * k) + solution.b * specfun.hankel1(ell, R * 1j * k)
    theta, theta_z = np.broadcast_arrays(np.asarray(theta, float), np.asarray(theta_z, float))
    out = _phase(solution, theta, theta_z) @ radial
    return out[()] if out.ndim == 0 else out


def _angular_weights(solution: DiskSolution, theta):
    inc = solution.problem.incidence
    phase = _phase(solution, theta, inc.angle)
    if isinstance(inc, PlaneWave):
        phase = phase * (1j**solution.ell)
    return phase


def scattered_parts(solution: DiskSolution, r, theta, radial_derivative=False):
    """Propagating and evanescent parts of the scattered field for ``r > 1``.

    With ``radial_derivative=True`` the ``d/dr`` of both parts is returned instead.
    """
    r = np.asarray(r, float)
    k, ell = solution.problem.k, solution.ell
    r_, w = np.broadcast_arrays(r[..., None], _angular_weights(solution, theta))
    if radial_derivative:
        hp = k * specfun.hankel1_prime(ell, k * r_)
        he = 1j * k * specfun.hankel1_prime(ell, 1j * k * r_)
    else:
        hp = specfun.hankel1(ell, k * r_)
        he = specfun.hankel1(ell, 1j * k * r_)
    pr = np.sum(w * solution.a * hp, axis=-1)
    ev = np.sum(w * solution.b * he, axis=-1)
    return pr, ev


def interior_parts(solution: DiskSolution, r, theta):
    """Helmholtz and modified-Helmholtz parts of the total field for ``r < 1``."""
    r = np.asarray(r, float)
    tau, ell = solution.problem.interior_wavenumber, solution.ell
    r_, w = np.broadcast_arrays(r[..., None], _angular_weights(solution, theta))
    uh = np.sum(w * solution.c * specfun.bessel_j(ell, tau * r_), axis=-1)
    um = np.sum(w * solution.d * specfun.bessel_j(ell, 1j * tau * r_), axis=-1)
    return uh, um


def incident_field(problem: DiskProblem, r, theta, laplacian=False):
    """Incident field (or its Laplacian) evaluated in closed form."""
    r, theta = np.broadcast_arrays(np.asarray(r, float), np.asarray(theta, float))
    k, inc = problem.k, problem.incidence
    x, y = r * np.cos(theta), r * np.sin(theta)
    if isinstance(inc, PlaneWave):
        u = np.exp(1j * k * (x * np.cos(inc.angle) + y * np.sin(inc.angle)))
        return -(k**2) * u if laplacian else u
    zx, zy = inc.radius * np.cos(inc.angle), inc.radius * np.sin(inc.angle)
    dist = np.hypot(x - zx, y - zy)
    return fundamental_solution(k, dist, laplacian=laplacian)


def fundamental_solution(k: float, dist, laplacian=False):
    """Radiating fundamental solution of ``Lap^2 - k^4`` (or its Laplacian) at distance ``dist``."""
    h = specfun.hankel1(0, k * np.asarray(dist, float))
    he = specfun.hankel1(0, 1j * k * np.asarray(dist, float))
    if laplacian:
        return -1j / 8 * (h + he)
    return 1j / (8 * k**2) * (h - he)


def field_at(solution: DiskSolution, r, theta, *, total=False, laplacian=False):
    """Point values of the series solution.

    For ``r > 1`` returns the scattered field (or the total field when
    ``total=True``); for ``r < 1`` the transmitted total field.  With
    ``laplacian=True`` the Laplacian of the same quantity is returned, using
    ``Lap = -k^2`` / ``+k^2`` on the oscillatory / decaying parts.
    """
    r, theta = np.broadcast_arrays(np.asarray(r, float), np.asarray(theta, float))
    if np.any(r <= 0):
        raise ValueError("radius must be positive")
    if np.any(np.abs(r - 1.0) < 1e-12):
        raise ValueError("field_at is undefined on the interface r = 1; use one-sided radii")
    k = solution.problem.k
    tau = solution.problem.interior_wavenumber
    out = np.zeros(r.shape, dtype=complex)
    ext = r > 1
    if np.any(ext):
        pr, ev = scattered_parts(solution, r[ext], theta[ext])
        val = -(k**2) * pr + k**2 * ev if laplacian else pr + ev
        if total:
            val = val + incident_field(solution.problem, r[ext], theta[ext], laplacian=laplacian)
        out[ext] = val
    if np.any(~ext):
        uh, um = interior_parts(solution, r[~ext], theta[~ext])
        out[~ext] = -(tau**2) * uh + tau**2 * um if laplacian else uh + um
    return out[()] if out.ndim == 0 else out
