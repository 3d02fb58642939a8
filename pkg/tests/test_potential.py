import cmath
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from toboggan.potential import (
    SingularityError,
    UnwrappedPoint,
    as_rational,
    basis_convert,
    canonical,
    eval_ix_power,
    eval_potential,
    harmonic,
    make_potential,
    potential_from_dict,
)

exponents = st.fractions(min_value=-6, max_value=12, max_denominator=7)
radii = st.floats(min_value=0.05, max_value=5.0)
angles = st.floats(min_value=-3 * np.pi, max_value=3 * np.pi)


@pytest.mark.parametrize("value, want", [(2, Fraction(2)), ("4/3", Fraction(4, 3)), ((-2, 3), Fraction(-2, 3)),
                                          (6.0, Fraction(6)), (Fraction(1, 2), Fraction(1, 2))])
def test_as_rational(value, want):
    assert as_rational(value) == want


def test_as_rational_rejects_inexact_float():
    with pytest.raises(TypeError):
        as_rational(4 / 3)


def test_duplicate_exponent():
    with pytest.raises(ValueError, match="duplicate exponent"):
        make_potential([(1, 2), (3, "2")])


def test_complex_coupling_rejected():
    with pytest.raises(ValueError):
        make_potential([(1j, 2)])


def test_terms_sorted_descending():
    V = make_potential([(1, "-2/3"), (2, 10), (3, "4/3")])
    assert V.exponents == (10, Fraction(4, 3), Fraction(-2, 3))


def test_principal_branch_matches_cmath():
    # on the sheet -pi < arg(ix) <= pi the unwrapped power is the principal one
    x = 1.3 - 0.7j
    w = 1j * x
    p = UnwrappedPoint(abs(w), cmath.phase(w))
    for b in (Fraction(4, 3), Fraction(-2, 3), Fraction(5, 2), Fraction(3)):
        assert abs(eval_ix_power(p, b) - w ** float(b)) < 1e-12


@given(radii, angles, st.integers(-6, 10), st.integers(-3, 3))
def test_integer_powers_ignore_winding(r, th, b, k):
    p = UnwrappedPoint(r, th)
    a, c = eval_ix_power(p, b), eval_ix_power(p.wound(k), b)
    assert abs(a - c) <= 1e-12 * max(1.0, abs(a))


@given(radii, angles, exponents)
def test_full_period_returns(r, th, b):
    p = UnwrappedPoint(r, th)
    a, c = eval_ix_power(p, b), eval_ix_power(p.wound(b.denominator), b)
    assert abs(a - c) <= 1e-11 * max(1.0, abs(a))


@given(radii, angles)
def test_square_root_flips_sign_per_turn(r, th):
    p = UnwrappedPoint(r, th)
    assert abs(eval_ix_power(p.wound(1), "1/2") + eval_ix_power(p, "1/2")) < 1e-12 * max(1, r)


@given(radii, st.floats(min_value=-np.pi, max_value=np.pi), exponents, exponents)
def test_powers_multiply(r, th, a, b):
    p = UnwrappedPoint(r, th)
    lhs = eval_ix_power(p, a) * eval_ix_power(p, b)
    rhs = eval_ix_power(p, a + b)
    assert abs(lhs - rhs) <= 1e-9 * max(1.0, abs(rhs))


@given(radii, angles, exponents)
def test_pt_image_conjugates(r, th, b):
    p = UnwrappedPoint(r, th)
    a, c = eval_ix_power(p, b), eval_ix_power(p.pt_image(), b)
    assert abs(c - np.conj(a)) <= 1e-10 * max(1.0, abs(a))


def test_pt_image_of_x():
    p = UnwrappedPoint.from_x_angle(2.0, -0.4)
    assert abs(p.pt_image().x - (-np.conj(p.x))) < 1e-14


def test_singular_at_origin():
    with pytest.raises(SingularityError):
        eval_ix_power(UnwrappedPoint(0.0, 0.0), -2)
    assert eval_ix_power(UnwrappedPoint(0.0, 0.0), 2) == 0


def test_vectorised_evaluation():
    p = UnwrappedPoint(np.array([1.0, 2.0]), np.array([0.0, np.pi / 2]))
    np.testing.assert_allclose(eval_ix_power(p, 2), [1.0, -4.0], atol=1e-14)


def test_basis_conversion_signs():
    V = make_potential([(1, 10), (2, 8), (3, 6), (4, 4), (5, 2)], basis="x")
    W = basis_convert(V, "ix")
    assert [t.coupling for t in W.terms] == [-1, 2, -3, 4, -5]
    assert basis_convert(W, "x") == V


def test_basis_conversion_rejects_fractional():
    with pytest.raises(ValueError):
        basis_convert(make_potential([(1, "4/3")]), "x")


def test_harmonic_on_real_axis():
    x = np.linspace(0.3, 3.0, 7)
    p = UnwrappedPoint.from_x_angle(x, np.zeros_like(x))
    np.testing.assert_allclose(eval_potential(harmonic(), p), x ** 2, atol=1e-12)
    V = harmonic(Fraction(3, 4))
    np.testing.assert_allclose(eval_potential(V, p), x ** 2 + (9 / 16 - 1 / 4) / x ** 2, atol=1e-12)


def test_canonical_folds_inverse_square():
    a = make_potential([(-1, 2), (Fraction(-5, 16), -2)])
    b = make_potential([(-1, 2)], centrifugal=Fraction(5, 16))
    assert canonical(a) == canonical(b)


def test_dict_round_trip():
    V = make_potential([(1.5, "4/3"), (-2, -2)], centrifugal=0.75)
    assert potential_from_dict(V.as_dict()) == V
    assert potential_from_dict({"terms": [[1, "10"], {"coupling": 2, "exponent": "2/3"}]}).exponents == (10, Fraction(2, 3))
