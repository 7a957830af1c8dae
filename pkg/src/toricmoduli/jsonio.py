"""JSON interchange for fans, trees, cycles, families and arrangements.

Rationals are written as "p/q" strings in lowest terms with q > 0 (integers
too, as "p/1").  Parsers report the JSON path of the first offending value.
"""
from __future__ import annotations

import json
import re
from fractions import Fraction
from typing import Any

from .degeneration import Family, LaurentSeries
from .fan import Fan, FanError
from .lct import ArrangementError, CentralArrangement
from .trees import (
    Cycle,
    CycleComponent,
    PointConfiguration,
    ProjectivePoint,
    StableRootedTree,
    TreeComponent,
)


class SchemaError(ValueError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


_RAT = re.compile(r"^\s*(-?\d+)\s*(?:/\s*(\d+))?\s*$")


def rat_str(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_rat(v: Any, path: str) -> Fraction:
    if isinstance(v, bool):
        raise SchemaError(path, "expected a rational, got a boolean")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        m = _RAT.match(v)
        if m:
            q = int(m.group(2) or 1)
            if q == 0:
                raise SchemaError(path, "zero denominator")
            return Fraction(int(m.group(1)), q)
    raise SchemaError(path, f"expected a rational \"p/q\", got {v!r}")


def dumps(obj: Any, pretty: bool = False) -> str:
    """Deterministic serialization: sorted keys, fixed separators."""
    if pretty:
        return json.dumps(obj, sort_keys=True, indent=2)
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def to_jsonable(obj: Any) -> Any:
    """Recursively replace Fractions with "p/q" strings."""
    if isinstance(obj, Fraction):
        return rat_str(obj)
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, (frozenset, set)):
        return sorted(to_jsonable(v) for v in obj)
    return obj


# small field helpers -------------------------------------------------------


def _obj(v: Any, path: str) -> dict:
    if not isinstance(v, dict):
        raise SchemaError(path, "expected an object")
    return v


def _list(v: Any, path: str) -> list:
    if not isinstance(v, list):
        raise SchemaError(path, "expected an array")
    return v


def _int(v: Any, path: str, lo: int | None = None) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise SchemaError(path, "expected an integer")
    if lo is not None and v < lo:
        raise SchemaError(path, f"must be >= {lo}")
    return v


def _field(o: dict, key: str, path: str) -> Any:
    if key not in o:
        raise SchemaError(path, f"missing field {key!r}")
    return o[key]


def _rat_vector(v: Any, path: str, length: int | None = None) -> tuple[Fraction, ...]:
    xs = _list(v, path)
    if length is not None and len(xs) != length:
        raise SchemaError(path, f"expected {length} entries, got {len(xs)}")
    return tuple(parse_rat(x, f"{path}[{k}]") for k, x in enumerate(xs))


# fans ------------------------------------------------------------------------


def fan_to_json(f: Fan) -> dict:
    return f.to_json()


def fan_from_json(o: Any) -> Fan:
    o = _obj(o, "$")
    rank = _int(_field(o, "rank", "$"), "$.rank", 0)
    rays = [tuple(_int(x, f"$.rays[{i}][{k}]") for k, x in enumerate(_list(r, f"$.rays[{i}]")))
            for i, r in enumerate(_list(_field(o, "rays", "$"), "$.rays"))]
    cones = [tuple(_int(x, f"$.max_cones[{i}][{k}]", 0) for k, x in enumerate(_list(c, f"$.max_cones[{i}]")))
             for i, c in enumerate(_list(_field(o, "max_cones", "$"), "$.max_cones"))]
    try:
        return Fan(rank, tuple(rays), tuple(cones))
    except (FanError, ValueError, IndexError) as e:
        raise SchemaError("$", str(e)) from e


# trees -----------------------------------------------------------------------


def tree_to_json(t: StableRootedTree) -> dict:
    return {
        "d": t.d,
        "n": t.n,
        "components": [{"marked": {str(i): [rat_str(x) for x in a] for i, a in c.marked.items()}}
                       for c in t.components],
    }


def tree_from_json(o: Any) -> StableRootedTree:
    o = _obj(o, "$")
    d = _int(_field(o, "d", "$"), "$.d", 1)
    n = _int(_field(o, "n", "$"), "$.n", 2)
    comps = []
    for v, c in enumerate(_list(_field(o, "components", "$"), "$.components")):
        p = f"$.components[{v}]"
        marked = _obj(_field(_obj(c, p), "marked", p), p + ".marked")
        out = {}
        for key, a in marked.items():
            kp = f"{p}.marked[{key!r}]"
            if not re.fullmatch(r"[1-9]\d*", key):
                raise SchemaError(kp, "marked-point keys must be positive integers")
            out[int(key)] = _rat_vector(a, kp, d)
        comps.append(TreeComponent(out))
    return StableRootedTree(d, n, tuple(comps))


# configurations and cycles ------------------------------------------------------


def point_to_json(p: ProjectivePoint) -> list[str]:
    return [rat_str(x) for x in p.coords]


def configuration_to_json(c: PointConfiguration) -> dict:
    return {"d": c.d, "n": c.n, "points": [point_to_json(p) for p in c.points]}


def _points(v: Any, path: str, d: int, n: int) -> tuple[ProjectivePoint, ...]:
    pts = _list(v, path)
    if len(pts) != n - 1:
        raise SchemaError(path, f"expected {n - 1} points, got {len(pts)}")
    out = []
    for i, p in enumerate(pts):
        coords = _rat_vector(p, f"{path}[{i}]", d + 1)
        if not any(coords):
            raise SchemaError(f"{path}[{i}]", "all homogeneous coordinates vanish")
        out.append(ProjectivePoint(coords))
    return tuple(out)


def configuration_from_json(o: Any) -> PointConfiguration:
    o = _obj(o, "$")
    d = _int(_field(o, "d", "$"), "$.d", 1)
    n = _int(_field(o, "n", "$"), "$.n", 2)
    return PointConfiguration(d, n, _points(_field(o, "points", "$"), "$.points", d, n))


def cycle_to_json(z: Cycle) -> dict:
    return {
        "d": z.d,
        "n": z.n,
        "components": [{"J": sorted(c.J), "points": [point_to_json(p) for p in c.config.points]}
                       for c in z.components],
    }


def cycle_from_json(o: Any) -> Cycle:
    o = _obj(o, "$")
    d = _int(_field(o, "d", "$"), "$.d", 1)
    n = _int(_field(o, "n", "$"), "$.n", 2)
    comps = []
    for v, c in enumerate(_list(_field(o, "components", "$"), "$.components")):
        p = f"$.components[{v}]"
        c = _obj(c, p)
        J = frozenset(_int(i, f"{p}.J[{k}]", 1) for k, i in enumerate(_list(_field(c, "J", p), p + ".J")))
        pts = _points(_field(c, "points", p), p + ".points", d, n)
        comps.append(CycleComponent(J, PointConfiguration(d, n, pts)))
    return Cycle(d, n, tuple(comps))


# families ----------------------------------------------------------------------


def series_to_json(s: LaurentSeries) -> list:
    return [[e, rat_str(c)] for e, c in s.terms.items()]


def family_to_json(f: Family) -> dict:
    return {"d": f.d, "n": f.n, "points": [[series_to_json(s) for s in p] for p in f.points]}


def family_from_json(o: Any) -> Family:
    o = _obj(o, "$")
    d = _int(_field(o, "d", "$"), "$.d", 1)
    n = _int(_field(o, "n", "$"), "$.n", 2)
    pts = _list(_field(o, "points", "$"), "$.points")
    if len(pts) != n - 1:
        raise SchemaError("$.points", f"expected {n - 1} points, got {len(pts)}")
    out = []
    for i, p in enumerate(pts):
        pp = f"$.points[{i}]"
        coords = _list(p, pp)
        if len(coords) != d:
            raise SchemaError(pp, f"expected {d} coordinates, got {len(coords)}")
        row = []
        for k, s in enumerate(coords):
            sp = f"{pp}[{k}]"
            terms: dict[int, Fraction] = {}
            for j, term in enumerate(_list(s, sp)):
                tp = f"{sp}[{j}]"
                term = _list(term, tp)
                if len(term) != 2:
                    raise SchemaError(tp, "a term is [exponent, \"p/q\"]")
                e = _int(term[0], tp + "[0]")
                if e in terms:
                    raise SchemaError(tp, f"exponent {e} repeated")
                terms[e] = parse_rat(term[1], tp + "[1]")
            row.append(LaurentSeries(terms))
        out.append(tuple(row))
    return Family(d, n, tuple(out))


# arrangements ------------------------------------------------------------------


def arrangement_to_json(a: CentralArrangement) -> dict:
    return {"m": a.m, "forms": [[rat_str(x) for x in f] for f in a.forms]}


def arrangement_from_json(o: Any) -> CentralArrangement:
    o = _obj(o, "$")
    m = _int(_field(o, "m", "$"), "$.m", 1)
    forms = tuple(_rat_vector(f, f"$.forms[{i}]", m)
                  for i, f in enumerate(_list(_field(o, "forms", "$"), "$.forms")))
    try:
        return CentralArrangement(m, forms)
    except ArrangementError as e:
        raise SchemaError("$.forms", str(e)) from e
