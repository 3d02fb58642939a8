"""PT-symmetric multinomial potentials with exact rational exponents.

A potential is stored as ``V(x) = sum_b g_b (ix)^b + gamma / x**2`` with real
couplings ``g_b`` and exact :class:`fractions.Fraction` exponents ``b``.
Powers of ``ix`` are evaluated in log-polar form on an *unwrapped* angle, so
fractional exponents follow the Riemann sheet a contour is on instead of
snapping back to the principal branch.

Two angle conventions coexist in this package:

* :class:`UnwrappedPoint` carries the argument of ``w = i*x``;
* contours and wedges use the argument of ``x`` itself.

They differ by a constant, ``arg(w) = arg(x) + pi/2``.
"""

from __future__ import annotations

import math
import numbers
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable, Sequence, Union

import numpy as np

Rational = Fraction
ExponentLike = Union[Fraction, int, str, tuple]

BASES = ("ix", "x")


class SingularityError(ValueError):
    """A negative power was requested at the branch point ``x = 0``."""


def as_rational(value: ExponentLike) -> Fraction:
    """Coerce ``value`` to an exact exponent.

    Accepts ``Fraction``, ``int``, strings such as ``"4/3"``, ``(num, den)``
    pairs, and integral floats. Non-integral floats are rejected because
    ``Fraction(4/3)`` is not ``4/3``.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("exponent must be a rational number, not bool")
    if isinstance(value, numbers.Integral):
        return Fraction(int(value))
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, (tuple, list)) and len(value) == 2:
        return Fraction(int(value[0]), int(value[1]))
    if isinstance(value, numbers.Real) and float(value).is_integer():
        return Fraction(int(value))
    raise TypeError(f"cannot use {value!r} as an exact exponent")


def _as_real(value: Any, what: str) -> numbers.Real:
    if isinstance(value, numbers.Complex) and not isinstance(value, numbers.Real):
        if isinstance(value, complex) or getattr(value, "imag", 0) != 0:
            raise ValueError(f"{what} must be real, got {value!r}")
        value = value.real
    if isinstance(value, np.generic):
        value = value.item()
    if not isinstance(value, numbers.Real) or isinstance(value, bool):
        raise TypeError(f"{what} must be a real number, got {value!r}")
    if not math.isfinite(float(value)):
        raise ValueError(f"{what} must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class PotentialTerm:
    coupling: numbers.Real
    exponent: Fraction


@dataclass(frozen=True)
class PotentialSpec:
    """Immutable multinomial potential.

    ``terms`` are sorted by descending exponent with no duplicates.
    ``centrifugal`` is the strength ``gamma = L(L+1)`` of a separate
    ``gamma / x**2`` term. ``basis`` says whether the couplings multiply
    ``(ix)^b`` or ``x^b``.
    """

    terms: tuple[PotentialTerm, ...]
    centrifugal: numbers.Real | None = None
    basis: str = "ix"

    @property
    def exponents(self) -> tuple[Fraction, ...]:
        return tuple(t.exponent for t in self.terms)

    @property
    def leading_exponent(self) -> Fraction:
        if not self.terms:
            raise ValueError("potential has no power-law terms")
        return self.terms[0].exponent

    def coupling(self, exponent: ExponentLike) -> numbers.Real:
        """Coupling at ``exponent`` (zero when the term is absent)."""
        b = as_rational(exponent)
        for term in self.terms:
            if term.exponent == b:
                return term.coupling
        return 0

    def as_dict(self) -> dict[str, Any]:
        return {
            "basis": self.basis,
            "terms": [
                [_json_number(t.coupling), t.exponent.numerator, t.exponent.denominator]
                for t in self.terms
            ],
            "centrifugal": None if self.centrifugal is None else _json_number(self.centrifugal),
        }


def _json_number(value: numbers.Real) -> float | int:
    if isinstance(value, numbers.Integral):
        return int(value)
    return float(value)


def make_potential(
    terms: Iterable[tuple[Any, ExponentLike]],
    centrifugal: Any = None,
    basis: str = "ix",
) -> PotentialSpec:
    """Build a canonical :class:`PotentialSpec` from ``(coupling, exponent)`` pairs.

    Raises ``ValueError`` for a duplicate exponent or a complex coupling.
    Exact couplings (``int``/``Fraction``) stay exact.
    """
    if basis not in BASES:
        raise ValueError(f"basis must be one of {BASES}, got {basis!r}")
    seen: dict[Fraction, PotentialTerm] = {}
    for coupling, exponent in terms:
        b = as_rational(exponent)
        if b in seen:
            raise ValueError(f"duplicate exponent {b}")
        seen[b] = PotentialTerm(_as_real(coupling, f"coupling of exponent {b}"), b)
    if basis == "x":
        for b in seen:
            if b.denominator != 1 or b.numerator % 2:
                raise ValueError(f"x basis only supports even integer exponents, got {b}")
    gamma = None if centrifugal is None else _as_real(centrifugal, "centrifugal strength")
    ordered = tuple(sorted(seen.values(), key=lambda t: t.exponent, reverse=True))
    return PotentialSpec(ordered, gamma, basis)


@dataclass(frozen=True)
class UnwrappedPoint:
    """Point ``w = i*x = radius * exp(i*theta)`` with ``theta`` never reduced mod 2*pi.

    Fields may be numpy arrays for vectorised evaluation.
    """

    radius: Any
    theta: Any

    @classmethod
    def from_x_angle(cls, radius, x_angle) -> "UnwrappedPoint":
        """Point from ``|x|`` and the unwrapped argument of ``x``."""
        return cls(radius, x_angle + np.pi / 2)

    @property
    def x_angle(self):
        return self.theta - np.pi / 2

    @property
    def w(self):
        return self.radius * np.exp(1j * self.theta)

    @property
    def x(self):
        return -1j * self.w

    def wound(self, turns: int = 1) -> "UnwrappedPoint":
        """Same complex value, ``turns`` sheets further round the branch point."""
        return UnwrappedPoint(self.radius, self.theta + 2 * np.pi * turns)

    def pt_image(self) -> "UnwrappedPoint":
        """Image under ``x -> -conj(x)``: ``arg x -> -pi - arg x``, i.e. ``arg w -> -arg w``."""
        return UnwrappedPoint(self.radius, -self.theta)


def eval_ix_power(point: UnwrappedPoint, beta: ExponentLike):
    """``(ix)**beta = exp(beta * (log r + i*theta))`` on the unwrapped sheet.

    ``exp(i*beta*theta)`` has period ``2*pi*den(beta)`` in ``theta``; the angle
    is reduced by that period first, which is exact and keeps integer powers
    winding-insensitive to machine precision.
    """
    b = as_rational(beta)
    r = np.asarray(point.radius, dtype=float)
    theta = np.asarray(point.theta, dtype=float)
    if np.any(r < 0):
        raise ValueError("radius must be non-negative")
    period = 2 * np.pi * b.denominator
    theta = np.mod(theta + np.pi * b.denominator, period) - np.pi * b.denominator
    phase = np.exp(1j * float(b) * theta)
    if b == 0:
        out = np.ones(np.broadcast(r, theta).shape, dtype=complex)
    elif np.any(r == 0):
        if b < 0:
            raise SingularityError(f"(ix)^{b} is singular at x = 0")
        with np.errstate(divide="ignore"):
            out = np.where(r == 0, 0.0, np.power(r, float(b))) * phase
    else:
        out = np.power(r, float(b)) * phase
    return out[()] if out.ndim == 0 else out


def basis_convert(spec: PotentialSpec, target: str) -> PotentialSpec:
    """Switch between ``(ix)^b`` and ``x^b`` couplings.

    Only even integer exponents are allowed; ``g (ix)^b = g (-1)^(b/2) x^b``.
    """
    if target not in BASES:
        raise ValueError(f"target basis must be one of {BASES}")
    if spec.basis == target:
        return spec
    terms = []
    for t in spec.terms:
        if t.exponent.denominator != 1 or t.exponent.numerator % 2:
            raise ValueError(f"basis conversion needs even integer exponents, got {t.exponent}")
        sign = -1 if (t.exponent.numerator // 2) % 2 else 1
        terms.append((sign * t.coupling, t.exponent))
    return make_potential(terms, spec.centrifugal, basis=target)


def eval_potential(spec: PotentialSpec, point: UnwrappedPoint):
    """Evaluate ``V`` at ``point`` following the point's sheet.

    The centrifugal part uses ``1/x**2 = -(ix)**-2``.
    """
    if spec.basis != "ix":
        spec = basis_convert(spec, "ix")
    shape = np.broadcast(np.asarray(point.radius), np.asarray(point.theta)).shape
    total = np.zeros(shape, dtype=complex)
    for t in spec.terms:
        if t.coupling:
            total += float(t.coupling) * eval_ix_power(point, t.exponent)
    if spec.centrifugal:
        total -= float(spec.centrifugal) * eval_ix_power(point, -2)
    return complex(total) if total.ndim == 0 else total


def fold_inverse_square(spec: PotentialSpec) -> PotentialSpec:
    """Merge any ``(ix)^-2`` term into the centrifugal strength (``(ix)^-2 = -x^-2``)."""
    if spec.basis != "ix":
        spec = basis_convert(spec, "ix")
    c = spec.coupling(-2)
    gamma = (spec.centrifugal or 0) - c
    terms = [(t.coupling, t.exponent) for t in spec.terms if t.exponent != -2]
    return make_potential(terms, gamma if gamma != 0 else None)


def canonical(spec: PotentialSpec) -> PotentialSpec:
    """``ix``-basis form with zero terms dropped and ``(ix)^-2`` folded in.

    Two specs describing the same function have equal canonical forms.
    """
    folded = fold_inverse_square(spec)
    terms = [(t.coupling, t.exponent) for t in folded.terms if t.coupling != 0]
    gamma = folded.centrifugal if folded.centrifugal else None
    return make_potential(terms, gamma)


def potential_from_dict(data: dict[str, Any]) -> PotentialSpec:
    """Inverse of :meth:`PotentialSpec.as_dict`; tolerant of ``"4/3"`` exponents."""
    basis = data.get("basis", "ix")
    terms = []
    for entry in data.get("terms", []):
        if isinstance(entry, dict):
            terms.append((entry["coupling"], entry["exponent"]))
        elif len(entry) == 3:
            terms.append((entry[0], Fraction(int(entry[1]), int(entry[2]))))
        elif len(entry) == 2:
            terms.append((entry[0], entry[1]))
        else:
            raise ValueError(f"bad term entry {entry!r}")
    return make_potential(terms, data.get("centrifugal"), basis=basis)


def harmonic(screening: Any = None) -> PotentialSpec:
    """``x**2 + (a**2 - 1/4)/x**2``; ``screening=None`` gives the bare oscillator."""
    if screening is None:
        return make_potential([(-1, 2)])
    gamma = screening * screening - Fraction(1, 4) if isinstance(screening, (int, Fraction)) else float(screening) ** 2 - 0.25
    return make_potential([(-1, 2)], gamma if gamma != 0 else None)


def from_x_polynomial(couplings: Sequence[tuple[Any, int]], centrifugal: Any = None) -> PotentialSpec:
    """Potential given by ``x^b`` couplings, returned in the ``ix`` basis."""
    return basis_convert(make_potential(couplings, centrifugal, basis="x"), "ix")
