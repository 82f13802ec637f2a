"""Inversion in the boundary of an axis-parallel cube.

J = h^-1 o j o h, where j is inversion in the unit sphere and h is the
radial map rescaling the sup-norm ball of the cube onto the round unit
ball.  Writing u = x - o this collapses to

    J(x) = o + s^2 u / |u|_inf^2,

which fixes the cube boundary pointwise, swaps inside and outside and
exchanges the center with infinity.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .inversive import INFINITY, as_point


@dataclass(frozen=True)
class CubeInversion:
    center: tuple[Fraction, ...]
    half_width: Fraction

    def __post_init__(self):
        object.__setattr__(self, "center", as_point(self.center))
        object.__setattr__(self, "half_width", Fraction(self.half_width))
        if self.half_width <= 0:
            raise ValueError("half_width must be positive")

    def sup_radius(self, x) -> Fraction:
        return max(abs(a - c) for a, c in zip(x, self.center))

    def side(self, x) -> int:
        """-1 inside the cube, 0 on its boundary, +1 outside (oo counts as outside)."""
        if x is INFINITY:
            return 1
        r = self.sup_radius(x)
        return (r > self.half_width) - (r < self.half_width)

    def __call__(self, x):
        return pl_invert(self, x)


def pl_invert(ci: CubeInversion, x):
    if x is INFINITY:
        return ci.center
    x = as_point(x)
    u = tuple(a - c for a, c in zip(x, ci.center))
    r = max(abs(a) for a in u)
    if r == 0:
        return INFINITY
    k = ci.half_width ** 2 / (r * r)
    return tuple(c + k * a for c, a in zip(ci.center, u))


@dataclass(frozen=True)
class InvolutionFailure:
    sample: object
    image: object
    reason: str


def involution_check(ci: CubeInversion, samples: Sequence):
    """J(J(x)) = x on every sample, boundary fixed, inside and outside exchanged.

    Returns None when all samples pass, otherwise the first failure.
    """
    for x in samples:
        x = as_point(x)
        y = pl_invert(ci, x)
        if pl_invert(ci, y) != x:
            return InvolutionFailure(x, y, "J(J(x)) != x")
        sx, sy = ci.side(x), ci.side(y)
        if sx == 0 and y != x:
            return InvolutionFailure(x, y, "boundary point moved")
        if sx != -sy:
            return InvolutionFailure(x, y, "inside/outside not exchanged")
    return None


def jacobian_det(ci: CubeInversion, x: Sequence[float], h: float = 1e-6) -> float:
    """Central-difference Jacobian determinant of J at a finite point (floats)."""
    o = np.array([float(c) for c in ci.center])
    s2 = float(ci.half_width) ** 2

    def f(p):
        u = p - o
        return o + s2 * u / np.max(np.abs(u)) ** 2

    x = np.asarray(x, dtype=float)
    jac = np.empty((4, 4))
    for k in range(4):
        e = np.zeros(4)
        e[k] = h
        jac[:, k] = (f(x + e) - f(x - e)) / (2 * h)
    return float(np.linalg.det(jac))
