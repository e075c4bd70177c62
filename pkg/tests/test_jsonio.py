import json
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, strategies as st

from projdyn.errors import SchemaError
from projdyn.jsonio import (SCHEMA, RunManifest, dump_matrix, dump_scalar, dumps, envelope,
                            load_document, parse_matrix, parse_scalar)
from projdyn.scalars import Surd

rationals = st.fractions(max_denominator=50).filter(lambda q: abs(q) < 10 ** 6)


def test_scalar_forms():
    assert parse_scalar(3) == F(3)
    assert parse_scalar("-2/7") == F(-2, 7)
    assert parse_scalar(0.25) == 0.25
    assert parse_scalar({"re": 1, "sqrt": 2, "sre": 1}) == 1 + Surd.sqrt(2)
    assert parse_scalar([1.0, 2.0]) == 1 + 2j
    assert parse_scalar({"re": 0.5, "im": "1/2"}) == 0.5 + 0.5j
    for bad in (True, "x/2", {"foo": 1}, {"sqrt": -1}, [1, 2, 3], None):
        with pytest.raises(SchemaError):
            parse_scalar(bad)


@given(rationals, rationals, rationals, rationals, st.sampled_from([0, 2, 3, 5]))
def test_surd_round_trip(a, b, c, e, d):
    x = Surd(a, b, c, e, d) if d else Surd(a, b)
    assert Surd.coerce(parse_scalar(json.loads(json.dumps(dump_scalar(x))))) == x


def test_matrix_modes():
    M = parse_matrix([[1, "1/2"], [0, {"sqrt": 2, "sre": 1}]])
    assert isinstance(M[0][0], Surd)
    N = parse_matrix([[1.0, 0], [0, 1]])
    assert isinstance(N, np.ndarray) and N.dtype == complex
    assert dump_matrix(M)[0] == [1, "1/2"]
    for bad in ([], [[1, 2], [3]], [1, 2]):
        with pytest.raises(SchemaError):
            parse_matrix(bad)


def test_documents():
    doc = load_document('{"schema": "projdyn/1", "kind": "x", "a": 1}', required=("a",))
    assert doc["a"] == 1
    with pytest.raises(SchemaError):
        load_document('{"a": 1, "b": 2}', required=("a",))
    with pytest.raises(SchemaError):
        load_document('{"schema": "projdyn/2", "a": 1}', required=("a",))
    with pytest.raises(SchemaError):
        load_document('{}', required=("a",))
    with pytest.raises(SchemaError):
        load_document('[1]')
    with pytest.raises(SchemaError):
        load_document('{"a": ')


def test_canonical_dump():
    m = RunManifest("demo", {"b": "2", "a": "1"})
    doc = envelope(m, {"x": F(1, 3), "y": np.float64(float("inf")), "z": np.array([1, 2]),
                       "w": 2j, "flag": np.bool_(True)})
    text = dumps(doc)
    assert text.endswith("\n") and text == dumps(json.loads(text))
    back = json.loads(text)
    assert back["schema"] == SCHEMA
    assert back["result"] == {"x": "1/3", "y": "inf", "z": [1, 2], "w": {"re": 0.0, "im": 2.0},
                              "flag": True}
    assert list(back["manifest"]["inputs"]) == ["a", "b"]
