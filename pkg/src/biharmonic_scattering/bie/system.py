"""Block boundary-integral system for the penetrable plate obstacle.

The scattered and transmitted fields are represented as

    u^s = D_o(tau+)[phi_s] - S_d(tau+)[lambda_s]        outside,
    u^t = -D_o(tau-)[phi_t] + S_d(tau-)[lambda_t]       inside,

where ``D_o`` is the double-layer potential of the oscillatory kernel
``(i/4) H0(tau r)`` and ``S_d`` the single-layer potential of the decaying
kernel ``(i/4) H0(i tau r)``.  Imposing continuity of ``u``, ``d_nu u``,
``Lap u`` and ``d_nu Lap u`` gives a 4 x 4 block system for the densities
``(lambda_t, phi_t, lambda_s, phi_s)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import linalg
from scipy.linalg import lapack

from .. import specfun
from ..errors import AccuracyError, PlacementError, SolvabilityError
from . import operators as op
from .curves import BoundaryNodes, interpolation_matrix

CONDITION_LIMIT = 1e13
# Minimum distance between a point source and the curve.
PLACEMENT_TOLERANCE = 1e-6
# Off-surface evaluation refines the density until targets are this many
# (refined) mesh widths away from the curve.
EVALUATION_CLEARANCE = 6.0
MAX_EVALUATION_REFINEMENT = 16


@dataclass(frozen=True)
class MaterialPair:
    """Interior and exterior wavenumbers ``tau_minus = k n**(1/4)``, ``tau_plus = k``."""

    tau_minus: complex
    tau_plus: float

    def __post_init__(self):
        if not self.tau_plus > 0:
            raise ValueError(f"tau_plus must be positive, got {self.tau_plus}")
        if not complex(self.tau_minus).real > 0:
            raise ValueError(f"tau_minus must have positive real part, got {self.tau_minus}")

    @classmethod
    def from_index(cls, k: float, n: complex) -> "MaterialPair":
        return cls(k * complex(n) ** 0.25, k)


@dataclass(frozen=True)
class IncidentTraces:
    """Traces of ``u^i``, ``d_nu u^i``, ``Lap u^i``, ``d_nu Lap u^i`` at the nodes."""

    u: np.ndarray
    dnu: np.ndarray
    lap: np.ndarray
    dnu_lap: np.ndarray

    def stacked(self) -> np.ndarray:
        return np.concatenate([self.u, self.dnu, self.lap, self.dnu_lap])


@dataclass(frozen=True)
class DensitySet:
    """Densities ``(lambda_t, phi_t, lambda_s, phi_s)`` at the nodes."""

    lambda_t: np.ndarray
    phi_t: np.ndarray
    lambda_s: np.ndarray
    phi_s: np.ndarray

    @classmethod
    def from_vector(cls, x: np.ndarray) -> "DensitySet":
        return cls(*np.split(np.asarray(x), 4))

    def stacked(self) -> np.ndarray:
        return np.concatenate([self.lambda_t, self.phi_t, self.lambda_s, self.phi_s])


def _source_geometry(z, nodes: BoundaryNodes):
    z = np.asarray(z, float)
    if nodes.contains(z)[0]:
        raise PlacementError(f"source {tuple(z)} lies inside the obstacle")
    if nodes.distance(z)[0] < PLACEMENT_TOLERANCE:
        raise PlacementError(f"source {tuple(z)} lies on the boundary")
    d = nodes.x - z[:, None]
    r = np.hypot(d[0], d[1])
    return r, (nodes.normal[0] * d[0] + nodes.normal[1] * d[1]) / r


def incident_traces_point_source(z, k: float, nodes: BoundaryNodes) -> IncidentTraces:
    """Traces of ``G(x, z) = (i / 8k^2) [H0(k r) - H0(i k r)]``."""
    r, dr = _source_geometry(z, nodes)
    h0, he0 = specfun.hankel1(0, k * r), specfun.hankel1(0, 1j * k * r)
    h1, he1 = specfun.hankel1(1, k * r), specfun.hankel1(1, 1j * k * r)
    c = 1j / (8 * k**2)
    return IncidentTraces(
        u=c * (h0 - he0),
        dnu=c * (-k * h1 + 1j * k * he1) * dr,
        lap=-1j / 8 * (h0 + he0),
        dnu_lap=-1j / 8 * (-k * h1 - 1j * k * he1) * dr,
    )


def incident_traces_plane_wave(angle: float, k: float, nodes: BoundaryNodes) -> IncidentTraces:
    """Traces of ``exp(i k x . d)`` with ``d = (cos angle, sin angle)``."""
    d = np.array([np.cos(angle), np.sin(angle)])
    u = np.exp(1j * k * (d @ nodes.x))
    dnu = 1j * k * (d @ nodes.normal) * u
    return IncidentTraces(u, dnu, -(k**2) * u, -(k**2) * dnu)


def assemble_block_system(mat: MaterialPair, nodes: BoundaryNodes) -> np.ndarray:
    """``4N x 4N`` matrix acting on ``(lambda_t, phi_t, lambda_s, phi_s)``.

    Rows are the jumps (inside minus outside) of ``u``, ``d_nu u``,
    ``Lap u`` and ``d_nu Lap u``.
    """
    I = np.eye(nodes.N)
    blocks = []
    for tau, side in ((complex(mat.tau_minus), -1), (complex(mat.tau_plus), +1)):
        V = op.layer_matrix_V(tau, nodes)
        J = op.layer_matrix_J(tau, nodes)
        K = op.layer_matrix_K(tau, nodes)
        W = op.layer_matrix_W(tau, nodes)
        t2 = tau**2
        if side < 0:
            # u^t = -D[phi_t] + S[lambda_t], inner traces.
            col_lam = [V, 0.5 * I + J, t2 * V, t2 * (0.5 * I + J)]
            col_phi = [0.5 * I - K, -W, t2 * (K - 0.5 * I), t2 * W]
        else:
            # -u^s = -D[phi_s] + S[lambda_s], outer traces.
            col_lam = [V, J - 0.5 * I, t2 * V, t2 * (J - 0.5 * I)]
            col_phi = [-(0.5 * I + K), -W, t2 * (0.5 * I + K), t2 * W]
        blocks += [col_lam, col_phi]
    return np.block([[blocks[c][r] for c in range(4)] for r in range(4)])


class TransmissionSolver:
    """LU-factorised block system for one material pair on one curve.

    Rows are scaled to unit 1-norm before factorising; a condition estimate
    of the scaled matrix above ``CONDITION_LIMIT`` raises
    :class:`SolvabilityError`.
    """

    def __init__(self, mat: MaterialPair, nodes: BoundaryNodes):
        self.mat = mat
        self.nodes = nodes
        A = assemble_block_system(mat, nodes)
        self.row_scale = 1.0 / np.abs(A).sum(axis=1)
        A *= self.row_scale[:, None]
        self.lu = linalg.lu_factor(A)
        rcond, info = lapack.zgecon(self.lu[0], np.linalg.norm(A, 1), norm="1")
        self.condition = np.inf if rcond == 0 else 1.0 / rcond
        if info != 0 or self.condition > CONDITION_LIMIT:
            raise SolvabilityError(
                f"block system is numerically singular for tau_minus={mat.tau_minus}, "
                f"tau_plus={mat.tau_plus} (condition ~ {self.condition:.2e})"
            )

    def solve(self, traces: IncidentTraces) -> DensitySet:
        return DensitySet.from_vector(self.solve_stacked(traces.stacked()))

    def solve_stacked(self, rhs: np.ndarray) -> np.ndarray:
        """Solve for one stacked right-hand side or a ``4N x m`` block of them."""
        rhs = np.asarray(rhs, complex)
        scale = self.row_scale if rhs.ndim == 1 else self.row_scale[:, None]
        return linalg.lu_solve(self.lu, rhs * scale)


def _refinement(nodes: BoundaryNodes, pts: np.ndarray) -> np.ndarray:
    dist = nodes.distance(pts)
    too_close = dist < nodes.mesh_width
    if np.any(too_close):
        bad = pts[np.argmax(too_close)]
        raise AccuracyError(
            f"point {tuple(bad)} is closer than one mesh width ({nodes.mesh_width:.3g}) to the boundary"
        )
    factor = np.ceil(EVALUATION_CLEARANCE * nodes.mesh_width / dist)
    return np.clip(factor, 1, MAX_EVALUATION_REFINEMENT).astype(int)


def _potential_rows(kappa_o: complex, kappa_d: complex, nodes: BoundaryNodes, pts, factor: int):
    """Rows mapping node densities to ``D_o[phi]`` and ``S_d[lambda]`` at ``pts``."""
    fine = nodes.refine(factor)
    P = interpolation_matrix(nodes.N, fine.N) if factor > 1 else None
    D = op.double_layer_potential_matrix(kappa_o, fine, pts)
    S = op.single_layer_potential_matrix(kappa_d, fine, pts)
    if P is not None:
        D, S = D @ P, S @ P
    return D, S


def field_evaluation_matrix(mat: MaterialPair, nodes: BoundaryNodes, pts) -> np.ndarray:
    """Matrix ``E`` with ``E @ densities.stacked()`` = field at ``pts``.

    Exterior points receive the scattered field, interior points the
    transmitted field.  Points closer than one mesh width to the curve raise
    :class:`AccuracyError`.
    """
    pts = np.atleast_2d(np.asarray(pts, float))
    N = nodes.N
    E = np.zeros((len(pts), 4 * N), complex)
    if len(pts) == 0:
        return E
    inside = nodes.contains(pts)
    factor = _refinement(nodes, pts)
    for f in np.unique(factor):
        for is_in in (True, False):
            sel = (factor == f) & (inside == is_in)
            if not np.any(sel):
                continue
            tau = complex(mat.tau_minus if is_in else mat.tau_plus)
            D, S = _potential_rows(tau, 1j * tau, nodes, pts[sel], int(f))
            if is_in:
                E[np.ix_(sel, np.arange(0, N))] = S
                E[np.ix_(sel, np.arange(N, 2 * N))] = -D
            else:
                E[np.ix_(sel, np.arange(2 * N, 3 * N))] = -S
                E[np.ix_(sel, np.arange(3 * N, 4 * N))] = D
    return E


def evaluate_fields(densities: DensitySet, mat: MaterialPair, nodes: BoundaryNodes, x) -> np.ndarray:
    """Scattered field outside / transmitted field inside at the points ``x``."""
    return field_evaluation_matrix(mat, nodes, x) @ densities.stacked()


def solve_point_source(mat: MaterialPair, nodes: BoundaryNodes, z) -> DensitySet:
    """Densities for the fundamental solution of wavenumber ``tau_plus`` centred at ``z``."""
    traces = incident_traces_point_source(z, mat.tau_plus, nodes)
    return TransmissionSolver(mat, nodes).solve(traces)
