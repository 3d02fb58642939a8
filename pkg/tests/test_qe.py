from fractions import Fraction

import numpy as np
import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from toboggan.potential import UnwrappedPoint
from toboggan.qe import (
    QEParams,
    QESolution,
    fix_g4,
    m3_locus,
    ode_residual,
    qe_solve,
    qe_wavefunction,
    recurrence_coeffs,
    recurrence_matrix,
    secular_det_small,
)

x = sp.symbols("x", positive=True)
small = st.integers(-2, 2)


def _ode_rows(M, N, alpha, beta, E, g2, g4=None):
    """Coefficient rows obtained by substituting the ansatz into the ODE with sympy."""
    L = sp.Rational(2 * M - 1, 2)
    a, b = sp.Rational(alpha), sp.Rational(beta)
    if g4 is None:
        g4 = 2 * a * b + 2 * M - 4 * N - 2
    h = sp.symbols(f"h0:{N}")
    F = x ** 6 / 6 + a * x ** 4 / 4 + b * x ** 2 / 2
    psi = sp.exp(-F) * sum(h[n] * x ** (2 * n - L) for n in range(N))
    V = L * (L + 1) / x ** 2 + x ** 10 + 2 * a * x ** 8 + (2 * b + a * a) * x ** 6 + g4 * x ** 4 + sp.Rational(g2) * x ** 2
    expr = sp.expand(sp.simplify((-sp.diff(psi, x, 2) + (V - sp.Rational(E)) * psi) * sp.exp(F) * x ** (L + 2)))
    poly = sp.Poly(expr, x)
    rows = []
    for c in poly.all_coeffs():
        row = [float(sp.diff(c, hn)) for hn in h]
        if any(row):
            rows.append(row)
    return np.array(rows)


@pytest.mark.parametrize("M, N", [(1, 1), (1, 3), (2, 2), (3, 3), (4, 2), (2, 4)])
def test_recurrences_match_symbolic_substitution(M, N):
    alpha, beta, E, g2 = Fraction(1, 3), Fraction(-3, 2), Fraction(7, 5), Fraction(2, 7)
    S = _ode_rows(M, N, alpha, beta, E, g2)
    R = recurrence_matrix(QEParams(M, N, float(alpha), float(beta)), float(E), float(g2))
    assert len(S) == N + 1
    for row in R:
        best = max(abs(row @ s) / (np.linalg.norm(row) * np.linalg.norm(s)) for s in S)
        assert best == pytest.approx(1.0, abs=1e-12)


def test_wrong_g4_adds_a_condition():
    assert len(_ode_rows(2, 2, 1, 1, 1, 1, g4=0)) == 4


def test_symbolic_m1n1():
    psi = x ** sp.Rational(-1, 2) * sp.exp(-x ** 6 / 6)
    V = sp.Rational(3, 4) / x ** 2 + x ** 10 - 4 * x ** 4
    assert sp.simplify(-sp.diff(psi, x, 2) + V * psi) == 0


def test_symbolic_m2n1():
    a, b = sp.symbols("alpha beta", real=True)
    psi = x ** sp.Rational(-3, 2) * sp.exp(-x ** 6 / 6 - a * x ** 4 / 4 - b * x ** 2 / 2)
    V = sp.Rational(15, 4) / x ** 2 + x ** 10 + 2 * a * x ** 8 + (2 * b + a ** 2) * x ** 6 + (2 * a * b - 2) * x ** 4 + b ** 2 * x ** 2
    assert sp.simplify(-sp.diff(psi, x, 2) + (V + 2 * b) * psi) == 0


def test_recurrence_examples():
    c = recurrence_coeffs(0, QEParams(1, 1, 0, 0), 0, 0)
    assert (c.A, c.B, c.C, c.D) == (0, 0, 0, 8)
    c = recurrence_coeffs(1, QEParams(2, 3, 1, 2), 5, 0)
    assert (c.A, c.B, c.C, c.D) == (0, 1, 4, 12)


@given(st.integers(1, 6), st.integers(0, 5), st.floats(-3, 3), st.floats(-3, 3))
def test_structural_zero(M, extra, a, b):
    p = QEParams(M, M + extra, a, b)
    assert recurrence_coeffs(M - 1, p, 1.0, 1.0).A == 0


@pytest.mark.parametrize("M, N, a, b, want", [(1, 1, 0, 0, -4), (2, 1, 1.5, -2, 2 * 1.5 * -2 - 2), (2, 3, 1, 2, -6)])
def test_fix_g4(M, N, a, b, want):
    assert fix_g4(QEParams(M, N, a, b)) == want


@given(st.floats(-5, 5), st.floats(-5, 5), st.floats(-2, 2), st.floats(-2, 2))
def test_small_determinants(E, g2, a, b):
    assert secular_det_small(QEParams(1, 2, a, b), E, g2) == pytest.approx(E, abs=1e-12)
    assert secular_det_small(QEParams(2, 2, a, b), E, g2) == pytest.approx(E * E - 4 * g2, abs=1e-10)


@given(st.floats(0.2, 20), st.integers(1, 5), small, small)
def test_m3_locus_zeroes_small_determinant(E, N, a, b):
    p = QEParams(3, N, a, b)
    for sign in (1, -1):
        assert abs(secular_det_small(p, sign * E, m3_locus(p, sign * E))) < 1e-9 * (1 + E ** 3)


def test_m1n1_unique():
    p = QEParams(1, 1, 0, 0)
    (s,) = qe_solve(p)
    assert (s.E, s.g2, s.h) == (0.0, 0.0, (1.0,))
    assert p.g4 == -4


@given(st.floats(-1.5, 1.5), st.floats(-1.5, 1.5))
def test_m2n1_closed_form(a, b):
    p = QEParams(2, 1, a, b)
    (s,) = qe_solve(p)
    assert s.E == pytest.approx(-2 * b, abs=1e-10)
    assert s.g2 == pytest.approx(b * b, abs=1e-10)
    assert s.h == (1.0,)


@pytest.mark.parametrize("M", [1, 2, 3, 4])
@pytest.mark.parametrize("N", [1, 2, 4])
def test_solutions_satisfy_full_system(M, N):
    p = QEParams(M, N, 0.5, -1.0)
    for s in qe_solve(p, e_box=30):
        R = recurrence_matrix(p, s.E, s.g2)
        h = np.array(s.h)
        assert np.max(np.abs(R @ h)) <= s.residual + 1e-15
        assert s.residual < 1e-8 * max(1.0, np.abs(R).max())
        assert np.max(np.abs(h)) == pytest.approx(1.0)


@pytest.mark.parametrize("N", [1, 2, 3, 4, 5])
@pytest.mark.parametrize("a, b", [(0, 0), (1, -1), (-1, 1), (1, 1)])
def test_loci(N, a, b):
    for M in (1, 2, 3):
        p = QEParams(M, N, a, b)
        for s in qe_solve(p):
            if M == 1:
                assert s.E == 0
            elif M == 2:
                assert abs(s.g2 - s.E ** 2 / 4) < 1e-10
            elif abs(s.E) > 0.1:
                assert abs(s.g2 - m3_locus(p, s.E)) < 1e-8


@pytest.mark.parametrize("M, N, a, b", [(1, 3, 1, -1), (2, 3, 1, -1), (3, 4, 0, 1), (2, 5, -1, 0)])
def test_ode_residual_on_real_ray(M, N, a, b):
    p = QEParams(M, N, a, b)
    pts = UnwrappedPoint.from_x_angle(np.linspace(0.5, 2.0, 20), np.zeros(20))
    sols = qe_solve(p)
    assert sols
    for s in sols:
        assert ode_residual(s, p, pts) < 1e-8


def test_detuned_energy_has_large_residual():
    p = QEParams(2, 1, 0.3, 0.7)
    (s,) = qe_solve(p)
    pts = UnwrappedPoint.from_x_angle(np.linspace(0.5, 2.0, 20), np.zeros(20))
    bad = QESolution(s.E + 0.1, s.g2, s.h, 0.0)
    assert ode_residual(bad, p, pts) > 1e-3


def test_count_grows_with_box():
    p = QEParams(2, 5, 1, -1)
    counts = [len(qe_solve(p, e_box=b)) for b in (2, 5, 10, 20, 40)]
    assert counts == sorted(counts) and counts[-1] >= 1


def test_wavefunction_values():
    p = QEParams(1, 1, 0, 0)
    (s,) = qe_solve(p)
    psi = qe_wavefunction(s, p)
    one = UnwrappedPoint.from_x_angle(1.0, 0.0)
    assert psi(one) == pytest.approx(np.exp(-1 / 6))
    assert psi(one.wound(1)) == pytest.approx(-np.exp(-1 / 6))


PT_PARAMS = QEParams(2, 3, 1, -1)
PT_SOLUTIONS = qe_solve(PT_PARAMS)


@given(st.floats(0.3, 2.0), st.floats(-3.0, 0.0))
def test_wavefunction_pt_relation(r, phi):
    # half-integer powers pick up the constant phase exp(i*pi*L) under x -> -conj(x)
    p = PT_PARAMS
    assert PT_SOLUTIONS
    for s in PT_SOLUTIONS:
        psi = qe_wavefunction(s, p)
        pt = UnwrappedPoint.from_x_angle(r, phi)
        lhs = psi(pt.pt_image())
        rhs = np.exp(1j * np.pi * float(p.L)) * np.conj(psi(pt))
        assert abs(lhs - rhs) <= 1e-10 * (1 + abs(rhs))


def test_complex_pairs_behind_flag():
    p = QEParams(2, 2, 0, 0)
    real = qe_solve(p)
    both = qe_solve(p, include_complex=True)
    cplx = [s for s in both if not s.is_real]
    assert all(s.is_real for s in real)
    assert len(cplx) == 2
    assert abs(cplx[0].E - np.conj(cplx[1].E)) < 1e-9
    for s in cplx:
        assert s.residual < 1e-8


def test_empty_search_box():
    assert qe_solve(QEParams(2, 1, 0, 5), e_box=1) == []


@pytest.mark.parametrize("M, N", [(0, 1), (1, 0), (1.5, 1)])
def test_invalid_params(M, N):
    with pytest.raises(ValueError):
        QEParams(M, N)
