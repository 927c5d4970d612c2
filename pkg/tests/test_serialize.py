import json
import math

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from inclab.serialize import format_number, to_csv, to_json, to_jsonl


def test_json_deterministic_bytes():
    obj = {"b": 1.0, "a": [True, None, 0.1], "m": np.eye(2)}
    assert to_json(obj) == to_json(obj)


def test_json_preserves_insertion_order():
    text = to_json({"zeta": 1, "alpha": 2})
    assert text.index("zeta") < text.index("alpha")


def test_json_nonfinite_to_null():
    parsed = json.loads(to_json({"v": [float("nan"), float("inf"), -float("inf")]}))
    assert parsed["v"] == [None, None, None]


def test_json_ndarray_nested():
    parsed = json.loads(to_json({"m": np.arange(6, dtype=float).reshape(2, 3)}))
    assert parsed["m"] == [[0, 1, 2], [3, 4, 5]]


@settings(max_examples=200, deadline=None)
@given(st.floats(allow_nan=False, allow_infinity=False))
def test_float_format_is_lossless(x):
    assert float(format_number(x)) == x


def test_jsonl_one_record_per_line():
    text = to_jsonl([{"x": 1}, {"x": 2, "y": "s"}])
    lines = text.splitlines()
    assert len(lines) == 2
    assert json.loads(lines[0]) == {"x": 1}
    assert json.loads(lines[1]) == {"x": 2, "y": "s"}
    assert text.endswith("\n")


def test_csv_quoting():
    out = to_csv(["a", "b"], [["plain", 'quo"te'], ["with,comma", "line\nbreak"]])
    rows = out.split("\r\n") if "\r\n" in out else out.split("\n")
    assert rows[0] == "a,b"
    assert '"quo""te"' in rows[1]
    assert '"with,comma"' in out
    assert '"line\nbreak"' in out


def test_csv_numbers_use_same_float_format():
    out = to_csv(["x"], [[0.1]])
    assert format_number(0.1) in out


def test_format_number_integers_compact():
    assert format_number(2.0) == "2"
    assert not math.isfinite(float("nan")) and format_number(float("nan")) == "null"
