import json
from fractions import Fraction

import numpy as np
from hypothesis import given
from hypothesis import strategies as st

from toboggan.serialize import dumps, format_float, to_csv


def test_float_format():
    assert format_float(1.0) == "1.00000000000000e+00"
    assert format_float(-0.0) == "0.00000000000000e+00"
    assert format_float(-1.5e-300) == "-1.50000000000000e-300"


@given(st.floats(min_value=-1e300, max_value=1e300))
def test_fifteen_significant_digits(x):
    # magnitudes within 1e-15 of the largest double would round up to inf
    assert abs(float(format_float(x)) - x) <= 1e-14 * abs(x)


def test_dumps_is_json_and_stable():
    obj = {"b": [1, 2.5, -0.0], "a": {"z": None, "q": True}, "f": Fraction(1, 3), "n": np.float64(2.0), "c": 1 + 2j}
    text = dumps(obj)
    assert text == dumps(obj)
    back = json.loads(text)
    assert list(back) == ["b", "a", "f", "n", "c"]
    assert back["b"] == [1, 2.5, 0.0] and back["f"] == "1/3" and back["c"] == [1.0, 2.0]


def test_csv():
    text = to_csv(["x", "ok"], [[0.5, True], [-0.0, None]])
    assert text == "x,ok\n5.00000000000000e-01,true\n0.00000000000000e+00,\n"
