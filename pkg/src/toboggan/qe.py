"""Quasi-exact bound states of the decadic oscillator.

The equation is

    -psi'' + [L(L+1)/x^2 + x^10 + g8 x^8 + g6 x^6 + g4 x^4 + g2 x^2] psi = E psi

with half-integer ``L = M - 1/2``. The ansatz

    psi = exp(-x^6/6 - alpha x^4/4 - beta x^2/2) * sum_{n<N} h_n x^(2n - L),
    alpha = g8/2,  beta = (g6 - alpha^2)/2,

terminates only for ``g4 = 2 alpha beta + 2M - 4N - 2``; the coefficients then
obey ``N + 1`` four-term recurrences in ``N`` unknowns, so ``E`` and ``g2``
must be tuned jointly (Sturmian solutions).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import brentq

from .potential import PotentialSpec, UnwrappedPoint, from_x_polynomial

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class QEParams:
    M: int
    N: int
    alpha: float = 0.0
    beta: float = 0.0

    def __post_init__(self):
        for name in ("M", "N"):
            v = getattr(self, name)
            if isinstance(v, bool) or int(v) != v or v < 1:
                raise ValueError(f"{name} must be a positive integer, got {v!r}")
            object.__setattr__(self, name, int(v))

    @property
    def L(self) -> Fraction:
        return Fraction(2 * self.M - 1, 2)

    @property
    def centrifugal(self) -> Fraction:
        return self.L * (self.L + 1)

    @property
    def g8(self) -> float:
        return 2 * self.alpha

    @property
    def g6(self) -> float:
        return 2 * self.beta + self.alpha ** 2

    @property
    def g4(self) -> float:
        return fix_g4(self)

    def potential(self, g2: float) -> PotentialSpec:
        """The decadic potential for this parameter set, in the ``(ix)`` basis."""
        return from_x_polynomial(
            [(1, 10), (self.g8, 8), (self.g6, 6), (self.g4, 4), (g2, 2)],
            centrifugal=self.centrifugal,
        )


@dataclass(frozen=True)
class RecurrenceCoeffs:
    A: float
    B: float
    C: float
    D: float


@dataclass(frozen=True)
class QESolution:
    E: complex | float
    g2: complex | float
    h: tuple
    residual: float
    flagged: bool = False

    @property
    def is_real(self) -> bool:
        return not isinstance(self.E, complex)

    def as_dict(self, params: QEParams) -> dict:
        def num(z):
            return [z.real, z.imag] if isinstance(z, complex) else float(z)

        return {
            "E": num(self.E),
            "g2": num(self.g2),
            "g4": params.g4,
            "h": [num(v) for v in self.h],
            "residual": self.residual,
            "flagged": self.flagged,
        }


def fix_g4(params: QEParams) -> float:
    return 2 * params.alpha * params.beta + 2 * params.M - 4 * params.N - 2


def recurrence_coeffs(n: int, params: QEParams, E, g2) -> RecurrenceCoeffs:
    M, N, a, b = params.M, params.N, params.alpha, params.beta
    if not 0 <= n <= N:
        raise ValueError(f"row index must lie in 0..{N}")
    return RecurrenceCoeffs(
        A=(2 * n + 2) * (2 * n + 2 - 2 * M),
        B=E - b * (4 * n + 2 - 2 * M),
        C=b * b - g2 - a * (4 * n - 2 * M),
        D=4 * (N + 1 - n),
    )


def _rows(params: QEParams, E, g2, rows: Sequence[int], cols: int) -> np.ndarray:
    """Recurrence rows ``rows`` restricted to ``h_0..h_{cols-1}``, batched over ``E``/``g2``."""
    E = np.asarray(E)
    g2 = np.asarray(g2)
    shape = np.broadcast(E, g2).shape
    dtype = np.result_type(E, g2, float)
    out = np.zeros(shape + (len(rows), cols), dtype=dtype)
    M, N, a, b = params.M, params.N, params.alpha, params.beta
    for i, n in enumerate(rows):
        entries = {
            n + 1: (2 * n + 2) * (2 * n + 2 - 2 * M),
            n: E - b * (4 * n + 2 - 2 * M),
            n - 1: b * b - g2 - a * (4 * n - 2 * M),
            n - 2: 4 * (N + 1 - n),
        }
        for col, val in entries.items():
            if 0 <= col < cols:
                out[..., i, col] = val
    return out


def recurrence_matrix(params: QEParams, E, g2) -> np.ndarray:
    """The full overcomplete ``(N+1) x N`` system (``h_n = 0`` outside ``0..N-1``)."""
    return _rows(params, E, g2, range(params.N + 1), params.N)


def secular_matrix_small(params: QEParams, E, g2) -> np.ndarray:
    """Upper-left ``M x M`` band block; closed because ``A_{M-1} = 0``."""
    return _rows(params, E, g2, range(params.M), params.M)


def secular_det_small(params: QEParams, E, g2):
    return np.linalg.det(secular_matrix_small(params, E, g2))


def reduced_matrix(params: QEParams, E, g2, omit: int = 0) -> np.ndarray:
    rows = [n for n in range(params.N + 1) if n != omit]
    return _rows(params, E, g2, rows, params.N)


def m3_locus(params: QEParams, E: float) -> float:
    """Closed-form ``g2(E)`` at ``M = 3``."""
    return 8.0 / E * (2 * params.N - 2 - params.alpha * params.beta) + E * E / 16.0


def _small_det_poly(params: QEParams, E: np.ndarray) -> np.ndarray:
    """Coefficients (ascending) of ``det_small`` as a polynomial in ``g2``, one row per ``E``."""
    deg = params.M // 2
    nodes = np.arange(deg + 1, dtype=float)
    vals = np.stack([secular_det_small(params, E, g) for g in nodes], axis=-1)
    vander = np.vander(nodes, deg + 1, increasing=True)
    return np.linalg.solve(vander, vals.T).T


def _g2_roots(coeffs: np.ndarray) -> list[float]:
    c = np.trim_zeros(np.asarray(coeffs), "b")
    if len(c) <= 1:
        return []
    if len(c) == 2:
        return [-c[0] / c[1]]
    roots = np.roots(c[::-1])
    return sorted(r.real for r in roots if abs(r.imag) <= 1e-12 * (1 + abs(r)))


def _null_vector(R: np.ndarray):
    _, sv, vh = np.linalg.svd(R)
    h = vh[-1].conj()
    k = np.argmax(np.abs(h))
    h = h / h[k]
    residual = float(np.max(np.abs(R @ h)))
    scale = max(1.0, float(np.max(np.abs(R))))
    defective = len(sv) > 1 and sv[-2] <= 1e-10 * scale
    return h, residual, scale, defective


def _validate(params: QEParams, E, g2, tol: float) -> QESolution | None:
    R = recurrence_matrix(params, E, g2)
    h, residual, scale, defective = _null_vector(R)
    if residual > tol * scale:
        return None
    if np.iscomplexobj(h) and np.all(np.abs(h.imag) <= 1e-12):
        h = h.real
    vals = tuple(complex(v) if np.iscomplexobj(h) else float(v) for v in h)
    return QESolution(E, g2, vals, residual, defective)


def _scan_grid(lo: float, hi: float, step: float) -> np.ndarray:
    # anchored at 0 so enlarging the box only adds points
    k0, k1 = math.ceil(lo / step), math.floor(hi / step)
    return np.arange(k0, k1 + 1) * step


def qe_solve(
    params: QEParams,
    e_box: float = 40.0,
    step: float = 0.01,
    g2_box: float | None = None,
    omit: int = 0,
    include_complex: bool = False,
    tol: float = 1e-10,
) -> list[QESolution]:
    """All QE solutions ``(E, g2, h)`` with ``|E| <= e_box`` (and ``|g2| <= g2_box``).

    ``M = 1`` forces ``E = 0`` and ``g2`` is an eigenvalue problem. Otherwise
    ``g2`` is eliminated through the ``M x M`` secular equation and the
    reduced ``N x N`` determinant (row ``omit`` dropped) is scanned for sign
    changes on a fixed ``step`` grid, then bracketed with Brent's method.
    Every candidate is re-checked against all ``N + 1`` rows.
    """
    if not 0 <= omit < min(params.M, params.N + 1):
        raise ValueError("omitted row must be one of the first M rows")
    if params.M == 1:
        found = _solve_m1(params, omit, tol, include_complex)
    else:
        found = _solve_scan(params, e_box, step, omit, tol)
        if include_complex:
            found += _solve_complex(params, e_box, omit, tol)
    found = [s for s in found if abs(s.E) <= e_box + 1e-12]
    if g2_box is not None:
        found = [s for s in found if abs(s.g2) <= g2_box]
    found = _dedupe(found)
    if not found:
        log.info("no QE solutions for %s in |E| <= %g", params, e_box)
    return found


def _dedupe(found: list[QESolution]) -> list[QESolution]:
    """Merge candidates closer than ``1e-7``, keeping the one with the smallest residual."""
    out: list[QESolution] = []
    for s in sorted(found, key=lambda s: s.residual):
        if any(abs(s.E - t.E) <= 1e-7 * (1 + abs(s.E)) and abs(s.g2 - t.g2) <= 1e-7 * (1 + abs(s.g2)) for t in out):
            continue
        out.append(s)
    return sorted(out, key=lambda s: (complex(s.E).real, complex(s.E).imag, complex(s.g2).real))


def _solve_m1(params: QEParams, omit: int, tol: float, include_complex: bool) -> list[QESolution]:
    if omit != 0:
        raise ValueError("M = 1 has a single dependent row (row 0)")
    # with row 0 dropped g2 sits only on the diagonal: R_red = K - g2 * I
    K = reduced_matrix(params, 0.0, 0.0, omit)
    out = []
    for g in np.linalg.eigvals(K):
        real = abs(g.imag) <= 1e-9 * (1 + abs(g))
        if not real and not include_complex:
            continue
        g2 = float(g.real) if real else complex(g)
        sol = _validate(params, 0.0, g2, tol)
        if sol is not None:
            out.append(sol)
    return out


def _branch_values(params: QEParams, Es: np.ndarray) -> list[list[float]]:
    """Real ``g2`` roots of the small secular equation at every ``E``."""
    return [_g2_roots(c) for c in _small_det_poly(params, Es)]


def _reduced_det(params: QEParams, E: float, g2: float, omit: int) -> float:
    return float(np.linalg.det(reduced_matrix(params, E, g2, omit)))


def _solve_scan(params: QEParams, e_box: float, step: float, omit: int, tol: float) -> list[QESolution]:
    Es = _scan_grid(-e_box, e_box, step)
    branches = _branch_values(params, Es)
    counts = np.array([len(b) for b in branches])
    width = counts.max(initial=0)
    g2 = np.full((len(Es), width), np.nan)
    for i, b in enumerate(branches):
        g2[i, : len(b)] = b
    out = []
    for j in range(width):
        ok = counts > j
        idx = np.nonzero(ok)[0]
        if len(idx) == 0:
            continue
        f = np.full(len(Es), np.nan)
        f[idx] = np.linalg.det(reduced_matrix(params, Es[idx], g2[idx, j], omit))
        for i in range(len(Es) - 1):
            if not (ok[i] and ok[i + 1]) or counts[i] != counts[i + 1]:
                continue
            fa, fb = f[i], f[i + 1]
            if fa == 0.0:
                cand = [Es[i]]
            elif fa * fb < 0:
                cand = [_refine(params, Es[i], Es[i + 1], j, omit)]
            else:
                continue
            for E in cand:
                if E is None:
                    continue
                roots = _g2_roots(_small_det_poly(params, np.array([E]))[0])
                if len(roots) <= j:
                    continue
                sol = _validate(params, float(E), float(roots[j]), tol)
                if sol is not None:
                    out.append(sol)
    return out


def _refine(params: QEParams, a: float, b: float, j: int, omit: int) -> float | None:
    def f(E):
        roots = _g2_roots(_small_det_poly(params, np.array([E]))[0])
        if len(roots) <= j:
            return math.nan
        return _reduced_det(params, E, roots[j], omit)

    try:
        return brentq(f, a, b, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)
    except (ValueError, RuntimeError):
        return None


def _solve_complex(params: QEParams, e_box: float, omit: int, tol: float) -> list[QESolution]:
    """Complex ``(E, g2)`` pairs from the eliminated polynomial in ``E`` (``M <= 3``)."""
    if params.M > 3:
        raise NotImplementedError("complex QE roots are only available for M <= 3")
    # det_red(E, G(E)) * d1(E)**N is a polynomial of degree <= N*M in E
    deg = params.N * params.M + params.N
    size = 1 << (deg + 1).bit_length()
    radius = max(e_box, 1.0)
    z = radius * np.exp(2j * np.pi * np.arange(size) / size)
    c = _small_det_poly(params, z)
    d0, d1 = c[:, 0], c[:, 1]
    g2 = -d0 / d1
    vals = np.linalg.det(reduced_matrix(params, z, g2, omit)) * d1 ** params.N
    coeffs = np.fft.fft(vals) / size
    coeffs = coeffs / radius ** np.arange(size)
    coeffs = np.trim_zeros(np.where(np.abs(coeffs) > 1e-13 * np.abs(coeffs).max(), coeffs, 0), "b")
    out = []
    for E in np.roots(coeffs[::-1]):
        if abs(E.imag) <= 1e-8 * (1 + abs(E)):
            continue
        E = _polish_complex(params, complex(E), omit)
        cc = _small_det_poly(params, np.array([E]))[0]
        if cc[1] == 0:
            continue
        sol = _validate(params, E, complex(-cc[0] / cc[1]), tol)
        if sol is not None:
            out.append(sol)
    return out


def _polish_complex(params: QEParams, E: complex, omit: int) -> complex:
    def f(E):
        cc = _small_det_poly(params, np.array([E]))[0]
        return complex(np.linalg.det(reduced_matrix(params, E, -cc[0] / cc[1], omit)))

    for _ in range(30):
        h = 1e-7 * (1 + abs(E))
        fe = f(E)
        df = (f(E + h) - f(E - h)) / (2 * h)
        if df == 0:
            break
        step = fe / df
        E -= step
        if abs(step) < 1e-14 * (1 + abs(E)):
            break
    return E


def _x_parts(point: UnwrappedPoint):
    r = np.asarray(point.radius, dtype=float)
    phi = np.asarray(point.theta, dtype=float) - np.pi / 2
    return r, phi


def _xpow(r, phi, k: float):
    return r ** k * np.exp(1j * k * phi)


def qe_wavefunction(solution: QESolution, params: QEParams) -> Callable[[UnwrappedPoint], complex]:
    """``psi(point)`` with the half-integer powers continued along the point's sheet."""
    L = float(params.L)
    a, b = params.alpha, params.beta

    def psi(point: UnwrappedPoint):
        r, phi = _x_parts(point)
        x = r * np.exp(1j * phi)
        poly = sum(h * _xpow(r, phi, 2 * n - L) for n, h in enumerate(solution.h))
        val = np.exp(-x ** 6 / 6 - a * x ** 4 / 4 - b * x ** 2 / 2) * poly
        return complex(val) if np.ndim(val) == 0 else val

    return psi


def ode_residual(solution: QESolution, params: QEParams, points: UnwrappedPoint) -> float:
    """Largest relative residual of the Schrodinger equation at ``points``.

    ``psi''`` comes from exact term-wise differentiation of the ansatz; the
    common factor ``exp(-F)`` is divided out.
    """
    L = float(params.L)
    a, b = params.alpha, params.beta
    r, phi = _x_parts(points)
    x = r * np.exp(1j * phi)
    P = np.zeros_like(x)
    dP = np.zeros_like(x)
    ddP = np.zeros_like(x)
    for n, h in enumerate(solution.h):
        k = 2 * n - L
        P = P + h * _xpow(r, phi, k)
        dP = dP + h * k * _xpow(r, phi, k - 1)
        ddP = ddP + h * k * (k - 1) * _xpow(r, phi, k - 2)
    dF = x ** 5 + a * x ** 3 + b * x
    ddF = 5 * x ** 4 + 3 * a * x ** 2 + b
    second = ddP - 2 * dF * dP + (dF * dF - ddF) * P
    V = (
        float(params.centrifugal) / x ** 2
        + x ** 10 + params.g8 * x ** 8 + params.g6 * x ** 6 + params.g4 * x ** 4 + solution.g2 * x ** 2
    )
    lhs = -second + (V - solution.E) * P
    scale = np.abs(second) + np.abs(V * P) + abs(solution.E) * np.abs(P) + 1e-300
    return float(np.max(np.abs(lhs) / scale))
