"""Nystrom matrices of the layer operators for ``Phi(x, y) = (i/4) H0(kappa |x - y|)``.

Every operator is built for a complex wavenumber ``kappa``; the oscillatory
(Helmholtz) family uses ``kappa = xi`` and the decaying (modified Helmholtz)
family ``kappa = i xi``.  Logarithmic singularities are integrated with the
Kress product rule: each kernel is split as

    M(s, t) = M1(s, t) log(4 sin^2((s - t)/2)) + M2(s, t)

with ``M1`` read off from the ``J``-part of the Hankel function.  Where
``|Im kappa| r`` is large, ``J0(kappa r)`` grows like ``exp(|Im kappa| r)``
while the kernel itself is tiny; the split is then localised with a smooth
envelope so ``M2`` does not suffer cancellation.  The envelope must be
resolved, so for strongly decaying kernels the quadrature runs on a refined
source grid and the density is brought there by trigonometric interpolation.

Normals point out of the enclosed domain; ``d = x - y``.
"""

from __future__ import annotations

import numpy as np
from scipy import special

from .curves import BoundaryNodes, interpolation_matrix
from .quadrature import kress_weights, log_kernel, spectral_derivative_matrix

EULER_GAMMA = np.euler_gamma
# Width of the log-split envelope, in units of the decay length 1/|Im kappa|.
ENVELOPE_RADIUS = 8.0
ENVELOPE_POWER = 6
# Source grids are refined until |Im kappa| times the mesh width is below this.
RESOLUTION = 0.3


def _bessel_j(order: int, kappa: complex, r: np.ndarray) -> np.ndarray:
    """``J_order(kappa r)`` for order 0 or 1, via real routines on the axes."""
    if kappa.imag == 0:
        f = special.j0 if order == 0 else special.j1
        return f(kappa.real * r).astype(complex)
    if kappa.real == 0:
        # J_m(i x) = i^m I_m(x).
        f = special.i0 if order == 0 else special.i1
        return (1j**order) * f(kappa.imag * r)
    return special.jv(order, kappa * r)


def _hankel(order: int, kappa: complex, r: np.ndarray) -> np.ndarray:
    """``H^(1)_order(kappa r)`` for order 0 or 1, via real routines on the axes."""
    if kappa.imag == 0 and kappa.real > 0:
        x = kappa.real * r
        if order == 0:
            return special.j0(x) + 1j * special.y0(x)
        return special.j1(x) + 1j * special.y1(x)
    if kappa.real == 0 and kappa.imag > 0:
        # H_m(i x) = 2 K_m(x) / (pi i^(m+1)).
        f = special.k0 if order == 0 else special.k1
        return (2 / (np.pi * 1j ** (order + 1))) * f(kappa.imag * r)
    return special.hankel1(order, kappa * r)


class _Geometry:
    """Pairs (coarse target, fine source) for a source grid refined ``factor`` times."""

    def __init__(self, nodes: BoundaryNodes, factor: int):
        fine = nodes.refine(factor)
        N, Nf = nodes.N, fine.N
        rows = np.arange(N) * factor
        self.nodes = nodes
        self.fine = fine
        self.diag = (np.arange(N), rows)
        self.dx = nodes.x[0][:, None] - fine.x[0][None, :]
        self.dy = nodes.x[1][:, None] - fine.x[1][None, :]
        r = np.hypot(self.dx, self.dy)
        r[self.diag] = 1.0
        self.r = r
        self.R = kress_weights(Nf)[rows]
        self.logk = log_kernel(Nf)[rows]
        self.h = 2 * np.pi / Nf
        self.P = interpolation_matrix(N, Nf) if factor > 1 else None

    def to_coarse(self, A: np.ndarray) -> np.ndarray:
        return A if self.P is None else A @ self.P


def oversampling(kappa: complex, nodes: BoundaryNodes) -> int:
    """Refinement factor of the source grid needed for ``kappa`` on ``nodes``."""
    return max(1, int(np.ceil(abs(complex(kappa).imag) * nodes.mesh_width / RESOLUTION)))


def _geometry(nodes: BoundaryNodes, factor: int) -> _Geometry:
    # Pairwise geometry is shared by every operator on the same nodes.
    cache = nodes.__dict__.setdefault("_geometry", {})
    if factor not in cache:
        cache[factor] = _Geometry(nodes, factor)
    return cache[factor]


def _log_coefficient_envelope(kappa: complex, r: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Envelope of the log split and distances safe to feed into ``J_m(kappa r)``.

    ``J_m(kappa r)`` grows like ``exp(|Im kappa| r)`` while the kernel decays,
    so the split is confined to ``r`` of a few decay lengths by
    ``exp(-(r / rho)**6)``; the envelope is 1 to high order at ``r = 0``.
    """
    growth = abs(complex(kappa).imag)
    if growth == 0:
        return np.ones_like(r), r
    rho = ENVELOPE_RADIUS / growth
    r_safe = np.minimum(r, 2 * rho)
    return np.exp(-((r_safe / rho) ** ENVELOPE_POWER)), r_safe


def _split_quadrature(geo: _Geometry, M1: np.ndarray, M2: np.ndarray) -> np.ndarray:
    return geo.R * M1 + geo.h * M2


def _single_layer_fine(kappa: complex, geo: _Geometry) -> np.ndarray:
    r = geo.r
    chi, r_safe = _log_coefficient_envelope(kappa, r)
    M = 0.25j * _hankel(0, kappa, r)
    M1 = -chi * _bessel_j(0, kappa, r_safe) / (4 * np.pi)
    M2 = M - M1 * geo.logk
    M1[geo.diag] = -1 / (4 * np.pi)
    M2[geo.diag] = (
        0.25j
        - (np.log(kappa / 2) + EULER_GAMMA) / (2 * np.pi)
        - np.log(geo.nodes.speed) / (2 * np.pi)
    )
    return _split_quadrature(geo, M1, M2)


def single_layer(kappa: complex, nodes: BoundaryNodes, jacobian: bool = True) -> np.ndarray:
    """``(S phi)(x_i) = int Phi(x_i, y) phi(y) ds(y)`` (``jacobian=False``: ``ds`` -> ``dt``)."""
    kappa = complex(kappa)
    geo = _geometry(nodes, oversampling(kappa, nodes))
    A = _single_layer_fine(kappa, geo)
    if jacobian:
        A = A * geo.fine.speed[None, :]
    return geo.to_coarse(A)


def double_layer(kappa: complex, nodes: BoundaryNodes) -> np.ndarray:
    """``(K phi)(x_i) = int d Phi(x_i, y)/d nu(y) phi(y) ds(y)``."""
    return _normal_derivative_layer(complex(kappa), nodes, adjoint=False)


def adjoint_double_layer(kappa: complex, nodes: BoundaryNodes) -> np.ndarray:
    """``(K' phi)(x_i) = int d Phi(x_i, y)/d nu(x_i) phi(y) ds(y)``."""
    return _normal_derivative_layer(complex(kappa), nodes, adjoint=True)


def _normal_derivative_layer(kappa: complex, nodes: BoundaryNodes, adjoint: bool) -> np.ndarray:
    geo = _geometry(nodes, oversampling(kappa, nodes))
    r = geo.r
    if adjoint:
        nu = nodes.normal
        proj = -(nu[0][:, None] * geo.dx + nu[1][:, None] * geo.dy) / r
    else:
        nu = geo.fine.normal
        proj = (nu[0][None, :] * geo.dx + nu[1][None, :] * geo.dy) / r
    chi, r_safe = _log_coefficient_envelope(kappa, r)
    M = 0.25j * kappa * _hankel(1, kappa, r) * proj
    M1 = -chi * kappa * _bessel_j(1, kappa, r_safe) * proj / (4 * np.pi)
    M2 = M - M1 * geo.logk
    M1[geo.diag] = 0.0
    M2[geo.diag] = -nodes.curvature / (4 * np.pi)
    return geo.to_coarse(_split_quadrature(geo, M1, M2) * geo.fine.speed[None, :])


def hypersingular(kappa: complex, nodes: BoundaryNodes) -> np.ndarray:
    """``(T phi)(x_i) = d/dnu(x_i) int d Phi(x_i, y)/d nu(y) phi(y) ds(y)``.

    Uses the Maue identity
    ``T phi = d/ds S[d phi/ds] + kappa^2 nu(x) . S[nu phi]``
    with tangential derivatives taken spectrally.
    """
    kappa = complex(kappa)
    geo = _geometry(nodes, oversampling(kappa, nodes))
    A = _single_layer_fine(kappa, geo)
    D = spectral_derivative_matrix(nodes.N)
    S0 = geo.to_coarse(A)
    nu, mu = nodes.normal, geo.fine.normal
    nn = np.outer(nu[0], mu[0]) + np.outer(nu[1], mu[1])
    S_nn = geo.to_coarse(A * nn * geo.fine.speed[None, :])
    return (D @ S0 @ D) / nodes.speed[:, None] + kappa**2 * S_nn


# Block-system names: V and J carry the decaying kernel, K and W the oscillatory one.


def layer_matrix_V(xi: complex, nodes: BoundaryNodes) -> np.ndarray:
    """Single layer with the decaying kernel ``(i/4) H0(i xi r)``."""
    return single_layer(1j * complex(xi), nodes)


def layer_matrix_J(xi: complex, nodes: BoundaryNodes) -> np.ndarray:
    """Adjoint double layer with the decaying kernel ``(i/4) H0(i xi r)``."""
    return adjoint_double_layer(1j * complex(xi), nodes)


def layer_matrix_K(xi: complex, nodes: BoundaryNodes) -> np.ndarray:
    """Double layer with the oscillatory kernel ``(i/4) H0(xi r)``."""
    return double_layer(complex(xi), nodes)


def layer_matrix_W(xi: complex, nodes: BoundaryNodes) -> np.ndarray:
    """Hypersingular operator ``d_nu(x) d_nu(y)`` of the oscillatory kernel."""
    return hypersingular(complex(xi), nodes)


# Off-surface potentials (plain trapezoid rule, spectrally accurate away from the curve).


def _targets(nodes: BoundaryNodes, pts):
    pts = np.atleast_2d(np.asarray(pts, float))
    dx = pts[:, 0][:, None] - nodes.x[0][None, :]
    dy = pts[:, 1][:, None] - nodes.x[1][None, :]
    return dx, dy, np.hypot(dx, dy)


def single_layer_potential_matrix(kappa: complex, nodes: BoundaryNodes, pts) -> np.ndarray:
    """Rows ``(i/4) H0(kappa |x - y_j|) w_j`` for targets ``x`` off the curve."""
    _, _, r = _targets(nodes, pts)
    w = nodes.speed * (2 * np.pi / nodes.N)
    return 0.25j * _hankel(0, complex(kappa), r) * w


def double_layer_potential_matrix(kappa: complex, nodes: BoundaryNodes, pts) -> np.ndarray:
    """Rows ``d/dnu(y) (i/4) H0(kappa |x - y_j|) w_j`` for targets ``x`` off the curve."""
    dx, dy, r = _targets(nodes, pts)
    kappa = complex(kappa)
    proj = (nodes.normal[0][None, :] * dx + nodes.normal[1][None, :] * dy) / r
    w = nodes.speed * (2 * np.pi / nodes.N)
    return 0.25j * kappa * _hankel(1, kappa, r) * proj * w


def single_layer_potential(kappa: complex, nodes: BoundaryNodes, density, pts) -> np.ndarray:
    return single_layer_potential_matrix(kappa, nodes, pts) @ density


def double_layer_potential(kappa: complex, nodes: BoundaryNodes, density, pts) -> np.ndarray:
    return double_layer_potential_matrix(kappa, nodes, pts) @ density
