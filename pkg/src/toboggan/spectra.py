"""Bound-state spectra along complex contours.

A contour ``s -> x(s)`` turns ``-psi'' + V psi = E psi`` into

    -u''/x'^2 + (x''/x'^3) u' + V(x(s)) u = E u,

which is discretised with second-order central differences on a uniform
``s`` grid with Dirichlet ends and solved as a dense non-Hermitian eigenvalue
problem. Two grids (spacing ``h`` and ``2h``) are combined by Richardson
extrapolation; levels whose positions do not agree between the grids are
boundary or discretisation artefacts and are set aside, not returned as
levels. Individual levels can be polished by complex shooting.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np
from scipy.integrate import solve_ivp

from .contour import Contour
from .potential import PotentialSpec, UnwrappedPoint, basis_convert, eval_ix_power, eval_potential

log = logging.getLogger(__name__)

DEFAULT_REALITY = 1e-6
IMAG_WINDOW = 0.1
DRIFT_TOL = 0.05


class ConfigurationError(ValueError):
    """Contour, grid or potential unsuitable for a bound-state calculation."""


class SpectrumError(RuntimeError):
    """The eigenvalue solver failed."""


class ShootingError(RuntimeError):
    """Newton matching did not converge; ``last`` is the final iterate."""

    def __init__(self, message: str, last: complex, iterations: int):
        super().__init__(message)
        self.last = last
        self.iterations = iterations


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid of ``points`` nodes on ``[s_min, s_max]``, ends included."""

    s_min: float
    s_max: float
    points: int

    def __post_init__(self):
        if not (self.s_min < 0 < self.s_max):
            raise ConfigurationError("grid must satisfy s_min < 0 < s_max")
        if int(self.points) != self.points or self.points < 3:
            raise ConfigurationError("grid needs at least 3 points")
        object.__setattr__(self, "points", int(self.points))
        object.__setattr__(self, "s_min", float(self.s_min))
        object.__setattr__(self, "s_max", float(self.s_max))

    @classmethod
    def symmetric(cls, s_max: float, points: int) -> "GridSpec":
        return cls(-s_max, s_max, points)

    @property
    def h(self) -> float:
        return (self.s_max - self.s_min) / (self.points - 1)

    def interior(self) -> np.ndarray:
        return self.s_min + self.h * np.arange(1, self.points - 1)

    def coarse(self) -> "GridSpec":
        """Grid with twice the spacing (``points`` must be odd)."""
        return GridSpec(self.s_min, self.s_max, (self.points + 1) // 2)

    def fingerprint(self) -> str:
        return f"GridSpec({self.s_min!r}, {self.s_max!r}, {self.points})"


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues sorted by real part, with where they came from.

    ``reality_tolerance=None`` means the relative default ``1e-6 * (1 + |E|)``.
    ``spurious`` holds fine-grid eigenvalues that had no partner on the
    coarse grid and were therefore not treated as levels.
    """

    eigenvalues: tuple
    contour_fingerprint: str = ""
    grid_fingerprint: str = ""
    reality_tolerance: float | None = None
    extrapolated: bool = False
    spurious: tuple = field(default=())

    def real_levels(self, tol: float | None = None) -> list[float]:
        return filter_real(self, self.reality_tolerance if tol is None else tol)

    def as_dict(self) -> dict:
        return {
            "eigenvalues": [[z.real, z.imag] for z in self.eigenvalues],
            "filtered_real": self.real_levels(),
            "contour": self.contour_fingerprint,
            "grid": self.grid_fingerprint,
            "reality_tolerance": self.reality_tolerance,
            "extrapolated": self.extrapolated,
            "spurious": [[z.real, z.imag] for z in self.spurious],
        }


def _ix_spec(potential: PotentialSpec) -> PotentialSpec:
    return potential if potential.basis == "ix" else basis_convert(potential, "ix")


def check_endpoints(potential: PotentialSpec, contour: Contour) -> None:
    """Both contour ends must lie strictly inside a sector of the dominant term.

    With ``V ~ g (ix)**D`` the WKB phase is ``sqrt(V) * x``; on a sector
    boundary its real part vanishes and neither solution decays.
    """
    spec = _ix_spec(potential)
    terms = [t for t in spec.terms if t.coupling]
    if not terms or terms[0].exponent <= 0:
        raise ConfigurationError("potential has no confining power-law term")
    lead = terms[0]
    for phi in contour.limit_angles():
        point = UnwrappedPoint.from_x_angle(1.0, phi)
        z = np.sqrt(complex(float(lead.coupling) * eval_ix_power(point, lead.exponent))) * np.exp(1j * phi)
        if abs(z.real) <= 1e-6 * abs(z):
            raise ConfigurationError(
                f"contour end at arg x = {phi / math.pi:.6g}*pi lies on a sector boundary of (ix)^{lead.exponent}"
            )


def discretize(potential: PotentialSpec, contour: Contour, grid: GridSpec) -> np.ndarray:
    """Dense ``(points-2)^2`` matrix of the pulled-back operator."""
    check_endpoints(potential, contour)
    s = grid.interior()
    dx, ddx = contour.derivatives(s)
    if np.any(np.abs(dx) < 1e-12):
        raise ConfigurationError("x'(s) vanishes on the grid")
    V = eval_potential(potential, contour.points(s))
    h = grid.h
    inv = 1.0 / (h * h * dx * dx)
    drift = ddx / (dx ** 3 * 2 * h)
    n = len(s)
    H = np.zeros((n, n), dtype=complex)
    idx = np.arange(n)
    H[idx, idx] = 2 * inv + V
    H[idx[:-1], idx[:-1] + 1] = (-inv + drift)[:-1]
    H[idx[1:], idx[1:] - 1] = (-inv - drift)[1:]
    return H


def _eigvals(matrix: np.ndarray) -> np.ndarray:
    try:
        return np.linalg.eigvals(matrix)
    except np.linalg.LinAlgError as exc:
        raise SpectrumError(f"dense eigensolver failed for a {matrix.shape[0]}x{matrix.shape[0]} matrix: {exc}") from exc


def _window(values: np.ndarray, imag_window: float) -> np.ndarray:
    keep = np.abs(values.imag) <= imag_window * (1 + np.abs(values))
    keep &= np.isfinite(values)
    out = values[keep]
    return out[np.lexsort((out.imag, out.real))]


def eigen_spectrum(matrix: np.ndarray, k: int | None = None, imag_window: float | None = None) -> Spectrum:
    """All eigenvalues, keeping the ``k`` lowest (by real part) of those with small imaginary part.

    ``imag_window`` bounds ``|Im E| / (1 + |E|)`` (``None`` keeps everything);
    complex-conjugate pairs of large imaginary part are not bound states.
    """
    matrix = np.asarray(matrix)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ValueError("matrix must be square")
    vals = _window(_eigvals(matrix), math.inf if imag_window is None else imag_window)
    if k is not None:
        vals = vals[:k]
    return Spectrum(tuple(complex(v) for v in vals))


def filter_real(spectrum: Spectrum | Iterable[complex], tol: float | None = None) -> list[float]:
    """Real parts of the eigenvalues with ``|Im E| < tol``, sorted.

    ``tol=None`` uses the relative default ``1e-6 * (1 + |E|)``.
    """
    values = spectrum.eigenvalues if isinstance(spectrum, Spectrum) else spectrum
    out = []
    for z in values:
        z = complex(z)
        bound = DEFAULT_REALITY * (1 + abs(z)) if tol is None else tol
        if abs(z.imag) < bound:
            out.append(z.real)
    return sorted(out)


@lru_cache(maxsize=32)
def _grid_eigs(potential: PotentialSpec, contour: Contour, grid: GridSpec, imag_window: float) -> np.ndarray:
    vals = _window(_eigvals(discretize(potential, contour, grid)), imag_window)
    vals.setflags(write=False)
    return vals


def _match(fine: np.ndarray, coarse: np.ndarray, drift_tol: float):
    """Pair every fine eigenvalue with its nearest unused coarse one."""
    pairs, lost = [], []
    used = np.zeros(len(coarse), dtype=bool)
    for e in fine:
        if len(coarse) == 0:
            lost.append(e)
            continue
        d = np.abs(coarse - e)
        d[used] = np.inf
        j = int(np.argmin(d))
        if d[j] <= drift_tol * (1 + abs(e)):
            used[j] = True
            pairs.append((e, coarse[j]))
        else:
            lost.append(e)
    return pairs, lost


def solve_spectrum(
    potential: PotentialSpec,
    contour: Contour,
    grid: GridSpec,
    k: int | None = None,
    extrapolate: bool = True,
    reality_tolerance: float | None = None,
    imag_window: float = IMAG_WINDOW,
    drift_tol: float = DRIFT_TOL,
) -> Spectrum:
    """Lowest ``k`` levels of ``potential`` on ``contour``.

    With ``extrapolate`` the grid and its coarsening are solved and combined
    as ``(4 E_h - E_2h) / 3``; fine-grid values without a coarse partner are
    reported in ``spurious``.
    """
    fine = _grid_eigs(potential, contour, grid, imag_window)
    spurious: list = []
    if extrapolate:
        if grid.points % 2 == 0:
            raise ConfigurationError("extrapolation needs an odd number of grid points")
        coarse = _grid_eigs(potential, contour, grid.coarse(), imag_window)
        pairs, spurious = _match(fine, coarse, drift_tol)
        vals = np.array([(4 * f - c) / 3 for f, c in pairs], dtype=complex)
        vals = vals[np.lexsort((vals.imag, vals.real))] if len(vals) else vals
        if spurious:
            log.info("%d unmatched eigenvalues set aside on %s", len(spurious), contour.fingerprint())
    else:
        vals = fine
    if k is not None:
        vals = vals[:k]
    return Spectrum(
        tuple(complex(v) for v in vals),
        contour.fingerprint(),
        grid.fingerprint(),
        reality_tolerance,
        extrapolate,
        tuple(complex(v) for v in spurious),
    )


@dataclass(frozen=True)
class ShootResult:
    E: complex
    iterations: int
    mismatch: float
    basin_ambiguous: bool


def _integrate(potential, contour, E, s0, s1, sign, rtol):
    """Decaying solution seeded at ``s0`` and carried to ``s1``; returns ``(u, u')``."""
    dx0, _ = contour.derivatives(s0)
    V0 = eval_potential(potential, contour.points(s0))
    kappa = np.sqrt(complex(V0 - E))
    slope = kappa * complex(dx0)
    if slope.real < 0:
        slope = -slope
    y0 = np.array([1.0 + 0j, sign * slope])

    def rhs(s, y):
        dx, ddx = contour.derivatives(s)
        V = eval_potential(potential, contour.points(s))
        return [y[1], complex(ddx / dx) * y[1] + complex(dx * dx) * (V - E) * y[0]]

    sol = solve_ivp(rhs, (s0, s1), y0, method="DOP853", rtol=rtol, atol=1e-30)
    if not sol.success:
        raise SpectrumError(f"integration failed: {sol.message}")
    return sol.y[0, -1], sol.y[1, -1]


def shoot(
    potential: PotentialSpec,
    contour: Contour,
    E_guess: complex,
    grid: GridSpec,
    tol: float = 1e-10,
    max_iter: int = 40,
    basin_radius: float = 0.5,
    rtol: float = 1e-12,
) -> ShootResult:
    """Newton iteration on the Wronskian of the two end solutions, matched at ``s = 0``."""
    check_endpoints(potential, contour)
    scale = []

    def mismatch(E):
        uL, dL = _integrate(potential, contour, E, grid.s_min, 0.0, +1, rtol)
        uR, dR = _integrate(potential, contour, E, grid.s_max, 0.0, -1, rtol)
        if not scale:
            # frozen complex normalisation keeps the matching function analytic in E
            scale.append(1.0 / (abs(uL) + abs(dL)) / (abs(uR) + abs(dR)))
        W = uL * dR - dL * uR
        rel = abs(W) / (abs(uL * dR) + abs(dL * uR))
        return W * scale[0], rel

    E = complex(E_guess)
    f, rel = mismatch(E)
    for it in range(1, max_iter + 1):
        if rel < tol:
            return _shoot_result(E, E_guess, it - 1, rel, basin_radius)
        delta = 1e-6 * (1 + abs(E))
        fd, _ = mismatch(E + delta)
        df = (fd - f) / delta
        if df == 0 or not np.isfinite(df):
            raise ShootingError("zero derivative in shooting Newton step", E, it)
        step = f / df
        if abs(step) > 10 * (1 + abs(E)):
            step *= 10 * (1 + abs(E)) / abs(step)
        E = E - step
        f, rel = mismatch(E)
        if abs(step) < 1e-13 * (1 + abs(E)):
            return _shoot_result(E, E_guess, it, rel, basin_radius)
    raise ShootingError(f"no convergence after {max_iter} iterations (mismatch {rel:.3e})", E, max_iter)


def _shoot_result(E, guess, iterations, rel, radius) -> ShootResult:
    E = complex(E)
    ambiguous = bool(abs(E - complex(guess)) > radius)
    if ambiguous:
        log.warning("shooting from %s moved to %s; basin is ambiguous", guess, E)
    return ShootResult(E, iterations, float(rel), ambiguous)


def shoot_refine(potential: PotentialSpec, contour: Contour, E_guess: complex, grid: GridSpec, **kw) -> complex:
    return shoot(potential, contour, E_guess, grid, **kw).E


@dataclass(frozen=True)
class Comparison:
    levels_a: tuple
    levels_b: tuple
    differences: tuple
    max_difference: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_difference < self.tolerance

    def as_dict(self) -> dict:
        return {
            "levels_a": list(self.levels_a),
            "levels_b": list(self.levels_b),
            "differences": list(self.differences),
            "max_difference": self.max_difference,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }


def compare_spectra(a: Spectrum | Sequence[complex], b: Spectrum | Sequence[complex], k: int, tol: float) -> Comparison:
    """Compare the ``k`` lowest real levels of two spectra."""
    la = a.real_levels() if isinstance(a, Spectrum) else filter_real(a)
    lb = b.real_levels() if isinstance(b, Spectrum) else filter_real(b)
    if len(la) < k or len(lb) < k:
        raise ValueError(f"need {k} real levels, got {len(la)} and {len(lb)}")
    la, lb = la[:k], lb[:k]
    diffs = tuple(abs(x - y) for x, y in zip(la, lb))
    return Comparison(tuple(la), tuple(lb), diffs, max(diffs), tol)
