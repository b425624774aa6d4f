"""Smooth closed boundary curves and their equispaced discretisations."""

from __future__ import annotations

import functools
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional

import numpy as np

TWO_PI = 2 * np.pi


@dataclass(frozen=True)
class ParametricCurve:
    """Closed curve ``x(t)``, ``t in [0, 1)``, traversed counter-clockwise.

    ``position``, ``velocity`` and ``acceleration`` map an array of ``t`` to
    arrays of shape ``(2, len(t))``.  Curves loaded from sampled nodes have
    ``samples`` set instead and can only be discretised at that node count.
    """

    name: str
    position: Optional[Callable] = None
    velocity: Optional[Callable] = None
    acceleration: Optional[Callable] = None
    samples: Optional[np.ndarray] = None

    def discretize(self, N: int) -> "BoundaryNodes":
        if N % 2 or N < 4:
            raise ValueError(f"node count must be even and >= 4, got {N}")
        if self.samples is not None:
            if len(self.samples) != N:
                raise ValueError(
                    f"curve '{self.name}' is sampled at {len(self.samples)} nodes, asked for {N}"
                )
            x, dx, ddx = self.samples[:, 0:2].T, self.samples[:, 2:4].T, self.samples[:, 4:6].T
        else:
            if self.acceleration is None:
                raise ValueError(f"curve '{self.name}' has no second derivative")
            t = np.arange(N) / N
            x, dx, ddx = self.position(t), self.velocity(t), self.acceleration(t)
        # Switch to the 2*pi-periodic parameter s = 2*pi*t used by the quadrature.
        return BoundaryNodes(
            np.asarray(x, float), np.asarray(dx, float) / TWO_PI, np.asarray(ddx, float) / TWO_PI**2
        )


class BoundaryNodes:
    """Equispaced nodes ``s_j = 2 pi j / N`` with derivatives in ``s``."""

    def __init__(self, x, dx, ddx):
        self.x = x
        self.dx = dx
        self.ddx = ddx
        self.N = x.shape[1]
        self.speed = np.hypot(dx[0], dx[1])
        if np.any(self.speed <= 0):
            raise ValueError("parametrisation is not regular (|x'| = 0 somewhere)")
        self.normal = np.vstack([dx[1], -dx[0]]) / self.speed
        self.curvature = (dx[0] * ddx[1] - dx[1] * ddx[0]) / self.speed**3
        self.s = TWO_PI * np.arange(self.N) / self.N

    def refine(self, factor: int) -> "BoundaryNodes":
        """Trigonometric interpolation of the node data onto ``factor * N`` nodes."""
        if factor == 1:
            return self
        cache = self.__dict__.setdefault("_refined", {})
        if factor not in cache:
            P = interpolation_matrix(self.N, factor * self.N)
            cache[factor] = BoundaryNodes(self.x @ P.T, self.dx @ P.T, self.ddx @ P.T)
        return cache[factor]

    @property
    def points(self) -> np.ndarray:
        return self.x.T

    @property
    def mesh_width(self) -> float:
        return float(np.max(self.speed) * TWO_PI / self.N)

    @property
    def length(self) -> float:
        return float(np.sum(self.speed) * TWO_PI / self.N)

    def contains(self, pts) -> np.ndarray:
        """Winding-number test for points strictly inside the polygon of nodes."""
        pts = np.atleast_2d(np.asarray(pts, float))
        rel = self.x.T[None, :, :] - pts[:, None, :]
        ang = np.arctan2(rel[..., 1], rel[..., 0])
        dang = np.diff(np.concatenate([ang, ang[:, :1]], axis=1), axis=1)
        dang = (dang + np.pi) % TWO_PI - np.pi
        return np.abs(dang.sum(axis=1)) > np.pi

    def distance(self, pts) -> np.ndarray:
        """Distance from each point to the nearest node."""
        pts = np.atleast_2d(np.asarray(pts, float))
        d = np.hypot(pts[:, None, 0] - self.x[0], pts[:, None, 1] - self.x[1])
        return d.min(axis=1)


@functools.lru_cache(maxsize=32)
def interpolation_matrix(N: int, Nf: int) -> np.ndarray:
    """``Nf x N`` matrix evaluating the band-limited interpolant of ``N`` periodic samples.

    Uses the periodic sinc for even ``N`` (Nyquist mode split symmetrically).
    """
    t = TWO_PI * np.arange(Nf) / Nf
    tj = TWO_PI * np.arange(N) / N
    d = t[:, None] - tj[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        P = np.sin(N * d / 2) / (N * np.tan(d / 2))
    P[np.isclose(np.sin(d / 2), 0.0, atol=1e-14)] = 1.0
    P.flags.writeable = False
    return P


def kite() -> ParametricCurve:
    """``x(t) = (cos 2 pi t + cos 4 pi t, 2 sin 2 pi t)``."""
    w = TWO_PI
    return ParametricCurve(
        "kite",
        lambda t: np.array([np.cos(w * t) + np.cos(2 * w * t), 2 * np.sin(w * t)]),
        lambda t: w * np.array([-np.sin(w * t) - 2 * np.sin(2 * w * t), 2 * np.cos(w * t)]),
        lambda t: w**2 * np.array([-np.cos(w * t) - 4 * np.cos(2 * w * t), -2 * np.sin(w * t)]),
    )


def circle(radius: float = 1.0, center=(0.0, 0.0)) -> ParametricCurve:
    w = TWO_PI
    cx, cy = center
    return ParametricCurve(
        "circle" if radius == 1.0 else f"circle(r={radius:g})",
        lambda t: np.array([cx + radius * np.cos(w * t), cy + radius * np.sin(w * t)]),
        lambda t: w * radius * np.array([-np.sin(w * t), np.cos(w * t)]),
        lambda t: -(w**2) * radius * np.array([np.cos(w * t), np.sin(w * t)]),
    )


def ellipse(a: float, b: float) -> ParametricCurve:
    w = TWO_PI
    return ParametricCurve(
        f"ellipse({a:g},{b:g})",
        lambda t: np.array([a * np.cos(w * t), b * np.sin(w * t)]),
        lambda t: w * np.array([-a * np.sin(w * t), b * np.cos(w * t)]),
        lambda t: -(w**2) * np.array([a * np.cos(w * t), b * np.sin(w * t)]),
    )


BUILTIN_CURVES = {"kite": kite, "circle": circle, "unit_circle": circle}


def load_curve(path) -> ParametricCurve:
    """Read a curve file (JSON).

    Either ``{"name": ..., "parametrization": {"builtin": "kite"}}`` or
    ``{"name": ..., "parametrization": {"nodes": [[x, y, dx, dy, ddx, ddy], ...]}}``
    where derivatives are with respect to ``t in [0, 1)`` at ``t_j = j / N``.
    """
    spec = json.loads(Path(path).read_text())
    name = spec.get("name", Path(path).stem)
    param = spec["parametrization"]
    if "builtin" in param:
        try:
            factory = BUILTIN_CURVES[param["builtin"]]
        except KeyError:
            raise ValueError(f"unknown builtin curve {param['builtin']!r}") from None
        curve = factory(**param.get("args", {}))
        return ParametricCurve(name, curve.position, curve.velocity, curve.acceleration)
    nodes = np.asarray(param["nodes"], float)
    if nodes.ndim != 2 or nodes.shape[1] != 6:
        raise ValueError("sampled curve needs rows [x, y, dx, dy, ddx, ddy]")
    return ParametricCurve(name, samples=nodes)


def save_curve(curve: ParametricCurve, path, N: Optional[int] = None) -> None:
    """Write a curve file; analytic curves are sampled at ``N`` nodes."""
    if curve.samples is not None:
        rows = curve.samples
    else:
        if N is None:
            raise ValueError("N is required to sample an analytic curve")
        t = np.arange(N) / N
        rows = np.vstack([curve.position(t), curve.velocity(t), curve.acceleration(t)]).T
    payload = {"name": curve.name, "parametrization": {"nodes": rows.tolist()}}
    Path(path).write_text(json.dumps(payload))
