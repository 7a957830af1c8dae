"""One-parameter degenerations of point configurations and their limits."""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .trees import (
    PointConfiguration,
    ProjectivePoint,
    StableRootedTree,
    TreeComponent,
    check_tree,
    phi,
    random_rational,
)


class FamilyError(ValueError):
    pass


@dataclass(frozen=True)
class LaurentSeries:
    """A finitely supported Laurent series in t with rational coefficients."""

    terms: Mapping[int, Fraction]

    def __post_init__(self):
        clean = {}
        for e, c in self.terms.items():
            c = Fraction(c)
            if c != 0:
                clean[int(e)] = c
        object.__setattr__(self, "terms", dict(sorted(clean.items())))

    @classmethod
    def of(cls, *pairs: tuple[int, object]) -> "LaurentSeries":
        out: dict[int, Fraction] = {}
        for e, c in pairs:
            out[e] = out.get(e, Fraction(0)) + Fraction(c)
        return cls(out)

    @classmethod
    def monomial(cls, c, e: int = 0) -> "LaurentSeries":
        return cls({e: Fraction(c)})

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        return isinstance(other, LaurentSeries) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(tuple(self.terms.items()))

    def __add__(self, other: "LaurentSeries") -> "LaurentSeries":
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, Fraction(0)) + c
        return LaurentSeries(out)

    def __neg__(self) -> "LaurentSeries":
        return LaurentSeries({e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "LaurentSeries") -> "LaurentSeries":
        return self + (-other)

    def __mul__(self, other: "LaurentSeries") -> "LaurentSeries":
        out: dict[int, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                out[e1 + e2] = out.get(e1 + e2, Fraction(0)) + c1 * c2
        return LaurentSeries(out)

    def shift(self, k: int) -> "LaurentSeries":
        """Multiply by t^k."""
        return LaurentSeries({e + k: c for e, c in self.terms.items()})

    def rescale(self, c) -> "LaurentSeries":
        """Substitute t -> c*t."""
        c = Fraction(c)
        return LaurentSeries({e: a * c ** e for e, a in self.terms.items()})

    @property
    def order(self) -> int | None:
        """Lowest exponent present, None for the zero series."""
        return next(iter(self.terms), None)

    def coefficient(self, e: int) -> Fraction:
        return self.terms.get(e, Fraction(0))


@dataclass(frozen=True)
class Family:
    """q_i(t) = [1 : x_i1(t) : ... : x_id(t)] for i = 1..n-1; q_n = e0."""

    d: int
    n: int
    points: tuple[tuple[LaurentSeries, ...], ...]

    def __post_init__(self):
        pts = tuple(tuple(s if isinstance(s, LaurentSeries) else LaurentSeries(s) for s in p)
                    for p in self.points)
        object.__setattr__(self, "points", pts)


def validate_family(f: Family) -> list[str]:
    problems = []
    if len(f.points) != f.n - 1:
        problems.append(f"family has {len(f.points)} points, expected {f.n - 1}")
    for i, p in enumerate(f.points, start=1):
        if len(p) != f.d:
            problems.append(f"point {i} has {len(p)} coordinates, expected {f.d}")
        if not any(p):
            problems.append(f"point {i} is identically e0")
        if any(s.order is not None and s.order < 0 for s in p):
            problems.append(f"point {i} has a negative exponent")
    for i in range(len(f.points)):
        for j in range(i + 1, len(f.points)):
            if f.points[i] == f.points[j]:
                problems.append(f"points {i + 1} and {j + 1} coincide identically")
    return problems


def check_family(f: Family) -> Family:
    problems = validate_family(f)
    if problems:
        raise FamilyError("; ".join(problems))
    return f


def level(f: Family, i: int) -> int:
    """Vanishing order of q_i(t) - e0: the least exponent over its coordinates."""
    return min(s.order for s in f.points[i - 1] if s)


def raw_levels(f: Family) -> list[int]:
    return sorted({level(f, i) for i in range(1, f.n)})


def limit_tree(f: Family) -> StableRootedTree:
    """The limit stable rooted tree at t = 0.

    Points sharing a vanishing order land on the same component, ordered by
    increasing order; coordinates are the coefficients of t^order.
    """
    check_family(f)
    comps = []
    for lv in raw_levels(f):
        marked = {i: tuple(s.coefficient(lv) for s in f.points[i - 1])
                  for i in range(1, f.n) if level(f, i) == lv}
        comps.append(TreeComponent(marked))
    return check_tree(StableRootedTree(f.d, f.n, tuple(comps)))


def projective_limit(coords: Sequence[LaurentSeries]) -> ProjectivePoint:
    """lim_{t->0} of a point with Laurent-series homogeneous coordinates."""
    low = min(s.order for s in coords if s)
    return ProjectivePoint(tuple(s.shift(-low).coefficient(0) for s in coords))


def gv_limit(f: Family, twist: int) -> PointConfiguration:
    """lim_{t->0} diag(1, t^-twist, ..., t^-twist) . q(t), point by point."""
    one = LaurentSeries.monomial(1)
    pts = tuple(projective_limit((one,) + tuple(s.shift(-twist) for s in p)) for p in f.points)
    return PointConfiguration(f.d, f.n, pts)


def oracle_check(f: Family) -> bool:
    """Compare the twisted limits with the component configurations of the
    limit tree, one level at a time."""
    t = limit_tree(f)
    return all(gv_limit(f, lv) == phi(t, v) for v, lv in enumerate(raw_levels(f)))


def twist_family(f: Family, k: int) -> Family:
    """Multiply every affine coordinate by t^k."""
    return Family(f.d, f.n, tuple(tuple(s.shift(k) for s in p) for p in f.points))


def reparametrize(f: Family, c) -> Family:
    return Family(f.d, f.n, tuple(tuple(s.rescale(c) for s in p) for p in f.points))


def random_series(rng: random.Random, max_exp: int, max_terms: int = 3) -> LaurentSeries:
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        c = random_rational(rng)
        while c == 0:
            c = random_rational(rng)
        terms[rng.randint(0, max_exp)] = c
    return LaurentSeries(terms)


def random_family(rng: random.Random, d: int, n: int, max_exp: int = 4) -> Family:
    """Random valid family; a coordinate is identically zero with probability 1/4."""
    while True:
        pts = []
        for _ in range(n - 1):
            while True:
                p = tuple(random_series(rng, max_exp) if rng.random() > 0.25 else LaurentSeries({})
                          for _ in range(d))
                if any(p):
                    break
            pts.append(p)
        f = Family(d, n, tuple(pts))
        if not validate_family(f):
            return f
