"""Integer-order cylinder functions used by the disk and boundary-integral solvers.

Values come from the AMOS routines wrapped by :mod:`scipy.special`, which
accept complex arguments directly and internally route arguments near the
imaginary axis through the modified functions ``I`` and ``K`` (with
exponential scaling, so ``H(i x)`` does not overflow/underflow for moderate
``x``).  Derivatives are never taken from the series; they use the three-term
recurrence ``C'_l = (C_{l-1} - C_{l+1}) / 2`` for every family here.

All functions broadcast over ``order`` and ``z`` like numpy ufuncs.
"""

from __future__ import annotations

import numpy as np
from scipy import special

from .errors import SpecialFunctionDomainError, SpecialFunctionRangeError

MAX_ORDER = 200
# Below this modulus H^(1) overflows or loses all relative accuracy.
HANKEL_MIN_ARGUMENT = 1e-300


def _check_order(order):
    order = np.asarray(order)
    if not np.issubdtype(order.dtype, np.integer):
        if not np.all(np.equal(np.mod(order, 1), 0)):
            raise SpecialFunctionRangeError("only integer orders are supported")
        order = order.astype(int)
    if np.any(np.abs(order) > MAX_ORDER):
        raise SpecialFunctionRangeError(
            f"|order| must not exceed {MAX_ORDER}, got max {np.max(np.abs(order))}"
        )
    return order


def _as_complex(z):
    return np.asarray(z, dtype=complex)


def _squeeze(x):
    return x[()] if isinstance(x, np.ndarray) and x.ndim == 0 else x


def _check_hankel_argument(z):
    if np.any(np.abs(z) <= HANKEL_MIN_ARGUMENT):
        raise SpecialFunctionDomainError("Hankel function evaluated at its singularity z = 0")


def bessel_j(order, z):
    """Bessel function of the first kind ``J_order(z)`` for complex ``z``.

    For a purely imaginary argument this is ``i**order * I_order(x)``.
    """
    order = _check_order(order)
    return _squeeze(special.jv(order, _as_complex(z)))


def bessel_y(order, z):
    """Bessel function of the second kind ``Y_order(z)`` (``z`` off the cut)."""
    order = _check_order(order)
    z = _as_complex(z)
    _check_hankel_argument(z)
    return _squeeze(special.yv(order, z))


def hankel1(order, z):
    """Hankel function of the first kind ``H^(1)_order(z) = J + iY``.

    For ``z = i x`` with ``x > 0`` it satisfies ``K_l(x) = (pi/2) i**(l+1) H^(1)_l(ix)``
    and therefore decays like ``x**-0.5 * exp(-x)``.
    """
    order = _check_order(order)
    z = _as_complex(z)
    _check_hankel_argument(z)
    return _squeeze(special.hankel1(order, z))


def bessel_i(order, x):
    """Modified Bessel function ``I_order(x)``."""
    order = _check_order(order)
    return _squeeze(special.iv(order, _as_complex(x)))


def bessel_k(order, x):
    """Modified Bessel function ``K_order(x)``."""
    order = _check_order(order)
    x = _as_complex(x)
    _check_hankel_argument(x)
    return _squeeze(special.kv(order, x))


def bessel_j_prime(order, z):
    """Derivative of ``J_order`` with respect to its (complex) argument."""
    order = _check_order(order)
    z = _as_complex(z)
    return _squeeze(0.5 * (special.jv(order - 1, z) - special.jv(order + 1, z)))


def hankel1_prime(order, z):
    """Derivative of ``H^(1)_order`` with respect to its (complex) argument."""
    order = _check_order(order)
    z = _as_complex(z)
    _check_hankel_argument(z)
    return _squeeze(0.5 * (special.hankel1(order - 1, z) - special.hankel1(order + 1, z)))
