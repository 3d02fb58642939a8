"""Asymptotic decay sectors ("wedges") of power-law potentials.

For a dominant term ``x**D`` the WKB solutions behave like
``exp(-+ x**p / p)`` with ``p = D/2 + 1``. The ``minus`` solution decays where
``cos(p*phi) > 0`` and the ``plus`` solution where ``cos(p*phi) < 0``; the
boundaries ``cos(p*phi) = 0`` are the Stokes lines between them.

Wedges are counted outward from the downward direction ``phi = -pi/2``:
right wedges lie at larger unwrapped angles, left wedges at smaller ones, and
both keep counting across the branch cut onto other Riemann sheets. All
angles here are arguments of ``x`` (not of ``i*x``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

SIDES = ("left", "right", "bottom")
SIGNS = ("minus", "plus")

_ORDINALS = (
    "zeroth", "first", "second", "third", "fourth", "fifth",
    "sixth", "seventh", "eighth", "ninth", "tenth",
)

_BOUNDARY_TOL = 1e-9


def ordinal(n: int) -> str:
    return _ORDINALS[n] if 0 <= n < len(_ORDINALS) else f"{n}th"


@dataclass(frozen=True)
class Wedge:
    """One sector, with its angles also kept as exact multiples of pi.

    ``side == "bottom"`` (index 0) is the sector straddling ``-pi/2``; it
    exists only when ``p`` is even and is shared by both sides.
    """

    side: str
    index: int
    center_pi: Fraction
    half_width_pi: Fraction
    ansatz_sign: str

    @property
    def center(self) -> float:
        return float(self.center_pi) * math.pi

    @property
    def half_width(self) -> float:
        return float(self.half_width_pi) * math.pi

    @property
    def lower_pi(self) -> Fraction:
        return self.center_pi - self.half_width_pi

    @property
    def upper_pi(self) -> Fraction:
        return self.center_pi + self.half_width_pi

    @property
    def interval(self) -> tuple[float, float]:
        return float(self.lower_pi) * math.pi, float(self.upper_pi) * math.pi

    @property
    def label(self) -> str:
        if self.side == "bottom":
            return "bottom"
        return f"{ordinal(self.index)} {self.side}"

    def contains(self, theta: float) -> bool:
        lo, hi = self.interval
        return lo < theta < hi

    def as_dict(self) -> dict:
        return {
            "side": self.side,
            "index": self.index,
            "label": self.label,
            "sign": self.ansatz_sign,
            "center": self.center,
            "half_width": self.half_width,
            "lower": self.interval[0],
            "upper": self.interval[1],
            "center_pi": str(self.center_pi),
            "lower_pi": str(self.lower_pi),
            "upper_pi": str(self.upper_pi),
        }


def _order(D: int) -> int:
    if isinstance(D, bool) or int(D) != D or D < 2 or int(D) % 2:
        raise ValueError(f"dominant exponent must be an even integer >= 2, got {D!r}")
    return int(D) // 2 + 1


def _sign_at(p: int, center_pi: Fraction) -> str:
    # p*center is a multiple of pi here, so the cosine is exactly +-1
    return "minus" if math.cos(p * float(center_pi) * math.pi) > 0 else "plus"


def _wedge(p: int, side: str, n: int) -> Wedge:
    if p % 2 == 0:
        offset = Fraction(n, p)
    else:
        # -pi/2 is itself a Stokes line when p is odd; the first wedge starts there
        offset = Fraction(2 * n - 1, 2 * p)
    center = Fraction(-1, 2) + (offset if side != "left" else -offset)
    return Wedge(side, n, center, Fraction(1, 2 * p), _sign_at(p, center))


def wedge(D: int, side: str, n: int) -> Wedge:
    """The ``n``-th wedge on ``side`` for dominant exponent ``D``."""
    p = _order(D)
    if side not in SIDES:
        raise ValueError(f"side must be one of {SIDES}")
    if side == "bottom":
        if p % 2:
            raise ValueError(f"no bottom wedge when D/2 + 1 = {p} is odd")
        return _wedge(p, "bottom", 0)
    if n < 1:
        raise ValueError("wedge index must be positive")
    return _wedge(p, side, n)


def asymptotic_wedges(D: int, sign: str, count: int) -> list[Wedge]:
    """First ``count`` right and first ``count`` left wedges of the given sign.

    Ordered by index, right before left.
    """
    if sign not in SIGNS:
        raise ValueError(f"sign must be one of {SIGNS}")
    if count < 1:
        raise ValueError("count must be positive")
    p = _order(D)
    right = _matching(p, "right", sign, count)
    left = _matching(p, "left", sign, count)
    out = []
    for r, l in zip(right, left):
        out.extend((r, l))
    return out


def _matching(p: int, side: str, sign: str, count: int) -> list[Wedge]:
    found = []
    n = 1
    while len(found) < count:
        w = _wedge(p, side, n)
        if w.ansatz_sign == sign:
            found.append(w)
        n += 1
    return found


def classify_direction(theta: float, D: int) -> Wedge | None:
    """Wedge strictly containing the unwrapped angle ``theta``, or ``None`` on a Stokes line."""
    p = _order(D)
    u = (theta + math.pi / 2) * p / math.pi
    if p % 2 == 0:
        n = round(u)
        if abs(abs(u - n) - 0.5) < _BOUNDARY_TOL:
            return None
        if n == 0:
            return _wedge(p, "bottom", 0)
        return _wedge(p, "right" if n > 0 else "left", abs(n))
    if abs(u - round(u)) < _BOUNDARY_TOL:
        return None
    n = math.floor(abs(u)) + 1
    return _wedge(p, "right" if u > 0 else "left", n)


def wedges_between(D: int, lo: float, hi: float) -> Iterator[Wedge]:
    """All wedges (both signs, including the bottom one) overlapping ``(lo, hi)``."""
    p = _order(D)
    if p % 2 == 0:
        bottom = _wedge(p, "bottom", 0)
        if bottom.interval[1] > lo and bottom.interval[0] < hi:
            yield bottom
    for side in ("left", "right"):
        n = 1
        while True:
            w = _wedge(p, side, n)
            a, b = w.interval
            if side == "right" and a >= hi or side == "left" and b <= lo:
                break
            if b > lo and a < hi:
                yield w
            n += 1
