"""Periodic quadrature pieces: log-singular product weights and spectral differentiation."""

from __future__ import annotations

import numpy as np
from scipy.linalg import circulant, toeplitz


def kress_weights(N: int) -> np.ndarray:
    """Product weights ``R_j`` for ``int_0^{2pi} log(4 sin^2((s - t)/2)) f(t) dt``.

    Exact for trigonometric polynomials of degree ``< N/2``; returns the
    ``N x N`` matrix ``R[i, j] = R_{|i - j|}`` for nodes ``2 pi j / N``.
    """
    if N % 2:
        raise ValueError("Kress weights need an even number of nodes")
    n = N // 2
    d = np.pi * np.arange(N) / n
    m = np.arange(1, n)
    R = -(2 * np.pi / n) * (np.cos(np.outer(d, m)) / m).sum(axis=1) - (np.pi / n**2) * np.cos(n * d)
    return circulant(R)


def log_kernel(N: int) -> np.ndarray:
    """``log(4 sin^2((s_i - s_j)/2))`` off the diagonal, zero on it."""
    s = 2 * np.pi * np.arange(N) / N
    diff = s[:, None] - s[None, :]
    with np.errstate(divide="ignore"):
        out = np.log(4 * np.sin(diff / 2) ** 2)
    np.fill_diagonal(out, 0.0)
    return out


def spectral_derivative_matrix(N: int) -> np.ndarray:
    """Derivative of the trigonometric interpolant on ``N`` equispaced nodes (even ``N``)."""
    if N % 2:
        raise ValueError("spectral differentiation here assumes even N")
    h = 2 * np.pi / N
    k = np.arange(1, N)
    col = np.zeros(N)
    col[1:] = 0.5 * (-1.0) ** k / np.tan(k * h / 2)
    return toeplitz(col, -col)

