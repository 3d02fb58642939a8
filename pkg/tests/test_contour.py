import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from toboggan.contour import ContourError, analyze, bg_line, cut_crossings, liouville_image, wedge_join

contours = st.sampled_from([
    bg_line(0.1), bg_line(0.5), wedge_join(1, 2), wedge_join(3, 2), wedge_join(2, 6, 0.7, 1.5),
    liouville_image(bg_line(0.5), 3), liouville_image(wedge_join(2, 6), Fraction(1, 3)),
])
params = st.floats(min_value=-6, max_value=6)


@given(contours, params)
def test_pt_symmetric(c, s):
    assert abs(c.position(-s) + np.conj(c.position(s))) < 1e-9 * (1 + abs(c.position(s)))


@given(contours, params)
def test_angle_consistent_with_position(c, s):
    x = c.position(s)
    assert abs(c.radius(s) * np.exp(1j * c.angle(s)) - x) < 1e-9 * (1 + abs(x))


@given(contours, st.floats(min_value=-4, max_value=4))
def test_derivatives_match_finite_differences(c, s):
    h = 1e-4
    dx, ddx = c.derivatives(s)
    fd1 = (c.position(s + h) - c.position(s - h)) / (2 * h)
    fd2 = (c.position(s + h) - 2 * c.position(s) + c.position(s - h)) / h ** 2
    assert abs(dx - fd1) < 1e-6 * (1 + abs(dx))
    assert abs(ddx - fd2) < 1e-4 * (1 + abs(ddx))


def test_angle_is_continuous():
    c = wedge_join(3, 2)
    th = c.angle(np.linspace(-10, 10, 2001))
    assert np.max(np.abs(np.diff(th))) < 0.05
    assert th[0] < -1.9 * math.pi and th[-1] > 0.9 * math.pi


def test_liouville_image_principal_values():
    y = bg_line(0.5)
    c = liouville_image(y, Fraction(3, 2))
    s = 0.8
    # no winding here, so the principal power is the right one
    assert abs(c.position(s) - (-1j) * (1j * y.position(s)) ** 1.5) < 1e-12


@pytest.mark.parametrize("contour, D, name, crossings", [
    (bg_line(0.1), 2, "first-first", 0),
    (wedge_join(1, 2), 2, "first-first", 0),
    (wedge_join(2, 2), 2, "second-second", 0),
    (wedge_join(3, 2), 2, "third-third", 2),
    (wedge_join(4, 2), 2, "fourth-fourth", 2),
    (wedge_join(3, 6), 10, "third-third", 0),
    (wedge_join(5, 6), 10, "fifth-fifth", 0),
])
def test_analyze(contour, D, name, crossings):
    rep = analyze(contour, D)
    assert rep.name == name
    assert rep.cut_crossings == crossings
    assert rep.tobogganic == (crossings > 0)


def test_bg_line_sweep():
    rep = analyze(bg_line(0.3), 10)
    assert rep.total_sweep == pytest.approx(math.pi)
    assert rep.left_wedge.label == "third left" and rep.right_wedge.label == "third right"


def test_endpoint_on_stokes_line():
    with pytest.raises(ContourError):
        analyze(wedge_join(1, 4), 2)


def test_cut_crossings():
    assert cut_crossings(-math.pi, 0) == 0
    assert cut_crossings(-2 * math.pi, math.pi) == 2
    assert cut_crossings(0, math.pi / 2) == 0  # endpoint on the cut is not a crossing


@pytest.mark.parametrize("make", [
    lambda: bg_line(0), lambda: bg_line(-1), lambda: wedge_join(0, 2), lambda: wedge_join(1.5, 2),
    lambda: wedge_join(1, 0.5), lambda: wedge_join(1, 2, ell=0), lambda: liouville_image(bg_line(1), -2),
])
def test_invalid_parameters(make):
    with pytest.raises(ContourError):
        make()


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_wedge_index_survives_liouville(n):
    rep = analyze(liouville_image(wedge_join(n, 6), 3), 2)
    assert (rep.left_wedge.index, rep.right_wedge.index) == (n, n)


def test_alpha_one_is_identity():
    c = bg_line(0.2)
    assert liouville_image(c, 1) is c
