import json
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from toricmoduli import jsonio
from toricmoduli.degeneration import Family, LaurentSeries
from toricmoduli.moduli_fans import build_lm_fan
from toricmoduli.trees import StableRootedTree, configuration_cycle

TREE = {"d": 1, "n": 3, "components": [{"marked": {"1": ["1/1"]}}, {"marked": {"2": ["1/1"]}}]}


@given(st.fractions())
def test_rational_round_trip(x):
    s = jsonio.rat_str(x)
    assert "/" in s and jsonio.parse_rat(s, "$") == x
    p, q = s.split("/")
    assert int(q) > 0


def test_rat_parsing():
    assert jsonio.parse_rat("-6/4", "$") == Fraction(-3, 2)
    assert jsonio.parse_rat(3, "$") == 3
    for bad in ("1/0", "x", 1.5, True, None):
        with pytest.raises(jsonio.SchemaError):
            jsonio.parse_rat(bad, "$.x")


def test_fan_round_trip():
    f = build_lm_fan(2, 4)
    doc = json.loads(jsonio.dumps(jsonio.fan_to_json(f)))
    assert jsonio.fan_from_json(doc) == f


def test_tree_and_cycle_round_trip():
    t = jsonio.tree_from_json(TREE)
    assert t == StableRootedTree(1, 3, ({1: (1,)}, {2: (1,)}))
    assert jsonio.tree_to_json(t) == TREE
    z = configuration_cycle(t)
    assert jsonio.cycle_from_json(jsonio.cycle_to_json(z)) == z


def test_family_round_trip():
    f = Family(2, 3, ((LaurentSeries.of((0, 1), (2, Fraction(1, 2))), LaurentSeries({})),
                      (LaurentSeries.of((1, -3)), LaurentSeries.of((4, 7)))))
    doc = jsonio.family_to_json(f)
    assert doc["points"][0][0] == [[0, "1/1"], [2, "1/2"]]
    assert jsonio.family_from_json(doc) == f


@pytest.mark.parametrize("doc, where", [
    ({"d": 1, "n": 3}, "$"),
    ({"d": 1, "n": 3, "components": [{"marked": {"1": ["a"]}}]}, "$.components[0].marked['1'][0]"),
    ({"d": 1, "n": 3, "components": [{"marked": {"x": ["1"]}}]}, "$.components[0].marked['x']"),
    ({"d": 2, "n": 3, "components": [{"marked": {"1": ["1"]}}]}, "$.components[0].marked['1']"),
    ({"d": "2", "n": 3, "components": []}, "$.d"),
])
def test_tree_schema_errors_have_locations(doc, where):
    with pytest.raises(jsonio.SchemaError) as e:
        jsonio.tree_from_json(doc)
    assert e.value.path == where


def test_family_schema_errors():
    with pytest.raises(jsonio.SchemaError) as e:
        jsonio.family_from_json({"d": 1, "n": 3, "points": [[[[0, "1"]]], [[[1, "1"], [1, "2"]]]]})
    assert e.value.path == "$.points[1][0][1]"
    with pytest.raises(jsonio.SchemaError) as e:
        jsonio.family_from_json({"d": 1, "n": 3, "points": [[[[0, "1"]]]]})
    assert e.value.path == "$.points"


def test_arrangement_round_trip_and_errors():
    doc = {"m": 3, "forms": [["1", "-1", "0"], ["1", "0", "-1"], ["0", "1", "-1"]]}
    a = jsonio.arrangement_from_json(doc)
    assert jsonio.arrangement_to_json(a) == {"m": 3, "forms": [[f"{x}/1" for x in r] for r in doc["forms"]]}
    with pytest.raises(jsonio.SchemaError) as e:
        jsonio.arrangement_from_json({"m": 2, "forms": [["1", "2"], ["1"]]})
    assert e.value.path == "$.forms[1]"


def test_dumps_is_canonical():
    assert jsonio.dumps({"b": 1, "a": "1/2"}) == '{"a":"1/2","b":1}'
    assert jsonio.to_jsonable({"x": (Fraction(2), frozenset({3, 1}))}) == {"x": ["2/1", [1, 3]]}
