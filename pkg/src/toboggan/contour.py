"""PT-symmetric complex integration contours, including multi-sheet toboggans.

Every contour is a regular map ``s -> x(s)`` on the whole real line with
``x(-s) = -conj(x(s))``. Besides ``x``, ``x'`` and ``x''`` each contour
reports ``|x(s)|`` and a continuous (unwrapped) ``arg x(s)``; the latter is
what tells which Riemann sheet a point sits on. The branch cut of the
potentials runs upward from the origin, i.e. along ``arg x = pi/2 + 2*pi*k``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

import numpy as np

from .potential import UnwrappedPoint
from .wedges import Wedge, classify_direction, ordinal


class ContourError(ValueError):
    """Invalid contour parameters or an unclassifiable endpoint."""


class Contour:
    """Base class; subclasses implement the five evaluation methods."""

    def position(self, s):
        raise NotImplementedError

    def derivatives(self, s):
        """``(x'(s), x''(s))``."""
        raise NotImplementedError

    def radius(self, s):
        return np.abs(self.position(s))

    def angle(self, s):
        """Unwrapped ``arg x(s)``, continuous in ``s``."""
        raise NotImplementedError

    def limit_angles(self) -> tuple[float, float]:
        """``arg x`` as ``s -> -inf`` and ``s -> +inf``."""
        raise NotImplementedError

    def min_radius(self) -> float:
        raise NotImplementedError

    def points(self, s) -> UnwrappedPoint:
        s = np.asarray(s, dtype=float)
        return UnwrappedPoint.from_x_angle(self.radius(s), self.angle(s))

    def fingerprint(self) -> str:
        return repr(self)


@dataclass(frozen=True)
class BGLine(Contour):
    """Straight line ``x = s - i*epsilon`` below the branch point."""

    epsilon: float

    def position(self, s):
        return np.asarray(s, dtype=float) - 1j * self.epsilon

    def derivatives(self, s):
        s = np.asarray(s, dtype=float)
        return np.ones_like(s, dtype=complex), np.zeros_like(s, dtype=complex)

    def radius(self, s):
        return np.hypot(np.asarray(s, dtype=float), self.epsilon)

    def angle(self, s):
        return np.arctan2(-self.epsilon, np.asarray(s, dtype=float))

    def limit_angles(self):
        return -math.pi, 0.0

    def min_radius(self):
        return self.epsilon


@dataclass(frozen=True)
class WedgeJoin(Contour):
    """Contour from the ``n``-th left to the ``n``-th right wedge centre of order ``p``.

    ``x(s) = r(s) exp(i*phi(s))`` with ``r = sqrt(epsilon**2 + s**2)`` and
    ``phi = -pi/2 + (n*pi/p) * tanh(s/ell)``; it passes ``-i*epsilon`` at ``s = 0``.
    """

    n: int
    p: float
    epsilon: float = 1.0
    ell: float = 1.0

    @property
    def _rate(self) -> float:
        return self.n * math.pi / float(self.p)

    def radius(self, s):
        return np.hypot(np.asarray(s, dtype=float), self.epsilon)

    def angle(self, s):
        return -math.pi / 2 + self._rate * np.tanh(np.asarray(s, dtype=float) / self.ell)

    def position(self, s):
        return self.radius(s) * np.exp(1j * self.angle(s))

    def derivatives(self, s):
        s = np.asarray(s, dtype=float)
        eps2 = self.epsilon ** 2
        t = np.tanh(s / self.ell)
        sech2 = 1.0 - t * t
        dlogr = s / (eps2 + s * s)
        ddlogr = (eps2 - s * s) / (eps2 + s * s) ** 2
        dphi = self._rate / self.ell * sech2
        ddphi = -2.0 * self._rate / self.ell ** 2 * sech2 * t
        x = self.position(s)
        g = dlogr + 1j * dphi
        return g * x, (ddlogr + 1j * ddphi + g * g) * x

    def limit_angles(self):
        return -math.pi / 2 - self._rate, -math.pi / 2 + self._rate

    def min_radius(self):
        return self.epsilon


@dataclass(frozen=True)
class LiouvilleImage(Contour):
    """Image of ``base`` under ``i*x = (i*y)**alpha`` taken on the continuous branch."""

    base: Contour
    alpha: Any

    def _w(self, s):
        # i*y(s) on the base's own sheet
        return self.base.radius(s), self.base.angle(s) + math.pi / 2

    def radius(self, s):
        return self.base.radius(s) ** float(self.alpha)

    def angle(self, s):
        a = float(self.alpha)
        return a * (self.base.angle(s) + math.pi / 2) - math.pi / 2

    def position(self, s):
        return self.radius(s) * np.exp(1j * self.angle(s))

    def _wpow(self, s, k: float):
        r, th = self._w(s)
        return r ** k * np.exp(1j * k * th)

    def derivatives(self, s):
        a = float(self.alpha)
        dy, ddy = self.base.derivatives(s)
        # x = -i w**a, w = i*y  =>  x' = a w**(a-1) y',  x'' = i a (a-1) w**(a-2) y'**2 + a w**(a-1) y''
        w_am1 = self._wpow(s, a - 1)
        w_am2 = self._wpow(s, a - 2)
        return a * w_am1 * dy, 1j * a * (a - 1) * w_am2 * dy * dy + a * w_am1 * ddy

    def limit_angles(self):
        a = float(self.alpha)
        lo, hi = self.base.limit_angles()
        return a * (lo + math.pi / 2) - math.pi / 2, a * (hi + math.pi / 2) - math.pi / 2

    def min_radius(self):
        return self.base.min_radius() ** float(self.alpha)


def _positive(name: str, value) -> None:
    if not (value > 0 and math.isfinite(float(value))):
        raise ContourError(f"{name} must be a positive finite number, got {value!r}")


def bg_line(epsilon: float) -> BGLine:
    _positive("epsilon", epsilon)
    return BGLine(float(epsilon))


def wedge_join(n: int, p: float, epsilon: float = 1.0, ell: float = 1.0) -> WedgeJoin:
    if int(n) != n or n < 1:
        raise ContourError(f"n must be a positive integer, got {n!r}")
    if not p >= 1:
        raise ContourError(f"p must be >= 1, got {p!r}")
    _positive("epsilon", epsilon)
    _positive("ell", ell)
    return WedgeJoin(int(n), p, float(epsilon), float(ell))


def liouville_image(base: Contour, alpha) -> Contour:
    """Contour ``x(s) = -i (i*y(s))**alpha``; ``alpha == 1`` returns ``base`` itself."""
    _positive("alpha", alpha)
    if not base.min_radius() > 0:
        raise ContourError("base contour passes through the branch point")
    if alpha == 1:
        return base
    if isinstance(alpha, float) and alpha.is_integer():
        alpha = int(alpha)
    return LiouvilleImage(base, alpha if isinstance(alpha, (int, Fraction)) else float(alpha))


@dataclass(frozen=True)
class ContourReport:
    left_wedge: Wedge
    right_wedge: Wedge
    total_sweep: float
    cut_crossings: int

    @property
    def tobogganic(self) -> bool:
        return self.cut_crossings >= 1

    @property
    def name(self) -> str:
        lw, rw = self.left_wedge, self.right_wedge
        if lw.index == rw.index:
            return f"{ordinal(lw.index)}-{ordinal(rw.index)}"
        return f"{lw.label} / {rw.label}"

    def as_dict(self) -> dict:
        return {
            "left_wedge": self.left_wedge.as_dict(),
            "right_wedge": self.right_wedge.as_dict(),
            "total_sweep": self.total_sweep,
            "cut_crossings": self.cut_crossings,
            "tobogganic": self.tobogganic,
        }


_CUT_TOL = 1e-9


def cut_crossings(lo: float, hi: float) -> int:
    """Number of upward-cut directions ``pi/2 + 2*pi*k`` strictly inside ``(lo, hi)``."""
    lo, hi = min(lo, hi), max(lo, hi)
    k_min = math.floor((lo - math.pi / 2) / (2 * math.pi)) - 1
    k_max = math.ceil((hi - math.pi / 2) / (2 * math.pi)) + 1
    return sum(
        1
        for k in range(k_min, k_max + 1)
        if lo + _CUT_TOL < math.pi / 2 + 2 * math.pi * k < hi - _CUT_TOL
    )


def analyze(contour: Contour, D: int) -> ContourReport:
    """Endpoint wedges, angular sweep and sheet crossings of ``contour``."""
    lo, hi = contour.limit_angles()
    left = classify_direction(lo, D)
    right = classify_direction(hi, D)
    if left is None or right is None:
        bad = lo if left is None else hi
        raise ContourError(f"contour endpoint angle {bad / math.pi:.6g}*pi lies on a Stokes line for D={D}")
    return ContourReport(left, right, hi - lo, cut_crossings(lo, hi))


def sample(contour: Contour, s_max: float, count: int) -> dict[str, list[float]]:
    """Evenly spaced samples on ``[-s_max, s_max]`` as plain lists."""
    s = np.linspace(-s_max, s_max, count)
    x = contour.position(s)
    return {
        "s": s.tolist(),
        "re_x": x.real.tolist(),
        "im_x": x.imag.tolist(),
        "theta": np.asarray(contour.angle(s), dtype=float).tolist(),
    }
