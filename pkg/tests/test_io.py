import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hyperinv.io import (cx_from_json, cx_to_json, matrix_to_csv, matrix_to_json,
                         parse_complex, read_json, seq_from_json, seq_to_json, write_json)

finite = st.complex_numbers(allow_nan=False, allow_infinity=False, max_magnitude=1e100)


@pytest.mark.parametrize("text, expected", [
    ("0.5", 0.5), ("-2", -2), ("1+2j", 1 + 2j), ("0.3-0.1j", 0.3 - 0.1j),
    ("1.5,-2", 1.5 - 2j), (" 3 , 4 ", 3 + 4j), ("2j", 2j),
])
def test_parse_complex(text, expected):
    assert parse_complex(text) == expected


def test_parse_complex_rejects():
    with pytest.raises(ValueError):
        parse_complex("abc")


@given(finite)
def test_cx_round_trip(z):
    assert cx_from_json(json.loads(json.dumps(cx_to_json(z)))) == z


def test_cx_from_alternatives():
    assert cx_from_json([1, 2]) == 1 + 2j
    assert cx_from_json("3-1j") == 3 - 1j
    assert cx_from_json({"re": 2}) == 2


def test_seq_round_trip():
    s = np.array([1 + 1j, -2, 0.5j])
    assert np.array_equal(seq_from_json(seq_to_json(s)), s)
    assert np.array_equal(seq_from_json({"values": seq_to_json(s)}), s)


def test_matrix_exports():
    m = np.array([[1, 0], [2 + 1j, -3]])
    j = matrix_to_json(m)
    assert j["n"] == 2 and len(j["rows"][1]) == 2 and j["rows"][1][0] == {"re": 2.0, "im": 1.0}
    lines = matrix_to_csv(m).splitlines()
    assert lines[0] == '"1.0,0.0"'
    assert lines[1] == '"2.0,1.0","-3.0,0.0"'


def test_write_and_read(tmp_path, capsys):
    path = tmp_path / "x.json"
    write_json(str(path), {"a": 1}, pretty=True)
    assert read_json(str(path)) == {"a": 1}
    write_json("-", [1, 2])
    assert capsys.readouterr().out.strip() == "[1, 2]"
