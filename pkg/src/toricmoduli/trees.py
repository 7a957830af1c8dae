"""Stable rooted trees for LM weights and their configuration cycles.

A tree is a chain of components v_0 (root) < v_1 < ... < v_max.  Each
component records the light points it carries as affine coordinates
a_i in Q^d; the heavy point sits at e_0 = [1:0:...:0] on v_max and is never
stored.  The diagonal torus acts on [x_0 : x_1 : ... : x_d] by scaling the
affine part, so a component is only defined up to a nonzero scalar.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

Rational = Fraction
Coords = tuple[Fraction, ...]


class MalformedCycleError(ValueError):
    pass


class TreeError(ValueError):
    pass


def normalize(coords: Iterable) -> Coords:
    """Scale homogeneous coordinates so the first nonzero entry is 1."""
    c = tuple(Fraction(x) for x in coords)
    lead = next((x for x in c if x != 0), None)
    if lead is None:
        raise ValueError("all homogeneous coordinates vanish")
    return tuple(x / lead for x in c)


@dataclass(frozen=True)
class ProjectivePoint:
    coords: Coords

    def __post_init__(self):
        object.__setattr__(self, "coords", normalize(self.coords))

    @property
    def d(self) -> int:
        return len(self.coords) - 1

    @property
    def is_e0(self) -> bool:
        return all(x == 0 for x in self.coords[1:])

    @property
    def on_hyperplane(self) -> bool:
        return self.coords[0] == 0

    @property
    def is_fixed(self) -> bool:
        return self.is_e0 or self.on_hyperplane

    def __repr__(self) -> str:
        return "[" + ":".join(str(x) for x in self.coords) + "]"


def e0(d: int) -> ProjectivePoint:
    return ProjectivePoint((1,) + (0,) * d)


def affine_point(a: Sequence) -> ProjectivePoint:
    return ProjectivePoint((1,) + tuple(a))


def hyperplane_point(a: Sequence) -> ProjectivePoint:
    return ProjectivePoint((0,) + tuple(a))


@dataclass(frozen=True)
class TreeComponent:
    marked: Mapping[int, Coords]

    def __post_init__(self):
        object.__setattr__(self, "marked", {int(i): tuple(Fraction(x) for x in a)
                                            for i, a in sorted(self.marked.items())})

    @property
    def J(self) -> frozenset[int]:
        return frozenset(self.marked)


@dataclass(frozen=True)
class StableRootedTree:
    d: int
    n: int
    components: tuple[TreeComponent, ...]

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(
            c if isinstance(c, TreeComponent) else TreeComponent(c) for c in self.components))

    def level_of(self, i: int) -> int:
        for v, c in enumerate(self.components):
            if i in c.marked:
                return v
        raise KeyError(i)


@dataclass(frozen=True)
class PointConfiguration:
    d: int
    n: int
    points: tuple[ProjectivePoint, ...]

    def __post_init__(self):
        if len(self.points) != self.n - 1:
            raise ValueError(f"configuration needs {self.n - 1} points, got {len(self.points)}")
        for p in self.points:
            if p.d != self.d:
                raise ValueError(f"point {p} does not live in P^{self.d}")


@dataclass(frozen=True)
class CycleComponent:
    J: frozenset[int]
    config: PointConfiguration


@dataclass(frozen=True)
class Cycle:
    d: int
    n: int
    components: tuple[CycleComponent, ...]


KunnethClass = tuple[int, ...]


# ---------------------------------------------------------------------------


def validate_tree(t: StableRootedTree) -> list[str]:
    """Return the violated invariants (empty list when the tree is valid)."""
    problems = []
    if t.d < 1 or t.n < 2:
        problems.append(f"need d >= 1 and n >= 2, got d={t.d}, n={t.n}")
    if not t.components:
        problems.append("tree has no components")
    seen: dict[int, int] = {}
    for v, comp in enumerate(t.components):
        if not comp.marked:
            problems.append(f"component {v} carries no marked point")
        for i, a in comp.marked.items():
            if i in seen:
                problems.append(f"index {i} appears on components {seen[i]} and {v}")
            seen[i] = v
            if len(a) != t.d:
                problems.append(f"point {i} on component {v} has {len(a)} coordinates, expected {t.d}")
            elif all(x == 0 for x in a):
                problems.append(f"point {i} on component {v} meets the exceptional point e0")
    expected = set(range(1, t.n))
    if set(seen) != expected:
        missing = sorted(expected - set(seen))
        extra = sorted(set(seen) - expected)
        if missing:
            problems.append(f"indices {missing} are not marked on any component")
        if extra:
            problems.append(f"indices {extra} are out of range")
    return problems


def check_tree(t: StableRootedTree) -> StableRootedTree:
    problems = validate_tree(t)
    if problems:
        raise TreeError("; ".join(problems))
    return t


def phi(t: StableRootedTree, v: int) -> PointConfiguration:
    """The v-component configuration: earlier components project to the
    hyperplane, later ones collapse to e0."""
    if not 0 <= v < len(t.components):
        raise IndexError(f"component index {v} out of range")
    pts: list[ProjectivePoint | None] = [None] * (t.n - 1)
    for w, comp in enumerate(t.components):
        for i, a in comp.marked.items():
            if w < v:
                pts[i - 1] = hyperplane_point(a)
            elif w == v:
                pts[i - 1] = affine_point(a)
            else:
                pts[i - 1] = e0(t.d)
    return PointConfiguration(t.d, t.n, tuple(pts))


def component_class(c: CycleComponent, n: int | None = None) -> KunnethClass:
    n = c.config.n if n is None else n
    return tuple(int(i in c.J) for i in range(1, n))


def configuration_cycle(t: StableRootedTree) -> Cycle:
    check_tree(t)
    comps = tuple(CycleComponent(comp.J, phi(t, v)) for v, comp in enumerate(t.components))
    return Cycle(t.d, t.n, comps)


def cycle_class(z: Cycle) -> KunnethClass:
    total = [0] * (z.n - 1)
    for c in z.components:
        for j, x in enumerate(component_class(c, z.n)):
            total[j] += x
    return tuple(total)


def orbit_contains(c: CycleComponent, q: PointConfiguration) -> bool:
    """Is ``q`` on the closure of the torus orbit of ``c.config``?

    Points outside J are fixed.  The J points move together as [1 : s*a_i]
    for a common nonzero s, with limits e0 (s -> 0) and [0 : a_i] (s -> inf).
    """
    cfg = c.config
    if q.d != cfg.d or q.n != cfg.n:
        return False
    for i in range(1, cfg.n):
        if i not in c.J and q.points[i - 1] != cfg.points[i - 1]:
            return False
    J = sorted(c.J)
    if not J:
        return True
    src = [cfg.points[i - 1].coords[1:] for i in J]
    tgt = [q.points[i - 1] for i in J]
    if all(p.is_e0 for p in tgt):
        return True
    if all(p == hyperplane_point(a) for p, a in zip(tgt, src)):
        return True
    if any(p.on_hyperplane for p in tgt):
        return False
    s = None
    for p, a in zip(tgt, src):
        b = p.coords[1:]
        k = next(j for j, x in enumerate(a) if x != 0)
        s_here = b[k] / a[k]
        if s_here == 0 or tuple(s_here * x for x in a) != b:
            return False
        if s is None:
            s = s_here
        elif s != s_here:
            return False
    return True


def _check_cycle(z: Cycle) -> None:
    n = z.n
    seen: set[int] = set()
    for c in z.components:
        if not c.J:
            raise MalformedCycleError("cycle component with empty index set")
        if c.J & seen:
            raise MalformedCycleError(f"indices {sorted(c.J & seen)} lie on two components")
        seen |= c.J
        if c.config.n != n or c.config.d != z.d:
            raise MalformedCycleError("component configuration has the wrong shape")
        for i in range(1, n):
            p = c.config.points[i - 1]
            if (i in c.J) == p.is_fixed:
                raise MalformedCycleError(f"point {i} has the wrong orbit type for J={sorted(c.J)}")
    if seen != set(range(1, n)):
        raise MalformedCycleError("index sets of the components do not partition {1,...,n-1}")


def reconstruct_tree(z: Cycle) -> StableRootedTree:
    """Recover the chain from its configuration cycle.

    The root is the unique component whose orbit closure meets (e0,...,e0).
    Each following component is the unique remaining one containing the
    configuration with assigned points projected to the hyperplane and all
    others at e0.
    """
    _check_cycle(z)
    d, n = z.d, z.n
    remaining = list(z.components)
    assigned: dict[int, Coords] = {}
    chain: list[TreeComponent] = []
    while remaining:
        probe = PointConfiguration(d, n, tuple(
            hyperplane_point(assigned[i]) if i in assigned else e0(d) for i in range(1, n)))
        hits = [c for c in remaining if orbit_contains(c, probe)]
        if len(hits) != 1:
            what = "root" if not chain else f"component {len(chain)}"
            raise MalformedCycleError(f"{len(hits)} candidates for the {what}")
        (c,) = hits
        remaining.remove(c)
        marked = {i: c.config.points[i - 1].coords[1:] for i in sorted(c.J)}
        chain.append(TreeComponent(marked))
        assigned.update(marked)
    return StableRootedTree(d, n, tuple(chain))


def trees_isomorphic(a: StableRootedTree, b: StableRootedTree) -> bool:
    """Equal up to a nonzero rescaling of the coordinates on each component."""
    if (a.d, a.n, len(a.components)) != (b.d, b.n, len(b.components)):
        return False
    for ca, cb in zip(a.components, b.components):
        if ca.J != cb.J:
            return False
        scale = None
        for i in ca.marked:
            x, y = ca.marked[i], cb.marked[i]
            if len(x) != len(y):
                return False
            for u, w in zip(x, y):
                if u == 0 or w == 0:
                    if u != w:
                        return False
                    continue
                r = w / u
                if scale is None:
                    scale = r
                elif r != scale:
                    return False
    return True


def scale_component(t: StableRootedTree, v: int, c) -> StableRootedTree:
    c = Fraction(c)
    comps = list(t.components)
    comps[v] = TreeComponent({i: tuple(c * x for x in a) for i, a in comps[v].marked.items()})
    return StableRootedTree(t.d, t.n, tuple(comps))


# ---------------------------------------------------------------------------
# corpora


def _set_partitions(items: list[int]) -> Iterator[list[list[int]]]:
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        yield [[first]] + part
        for k in range(len(part)):
            yield part[:k] + [[first] + part[k]] + part[k + 1:]


def chain_shapes(n: int) -> Iterator[tuple[frozenset[int], ...]]:
    """All ordered set partitions of {1,...,n-1}: one per chain shape."""
    for part in _set_partitions(list(range(1, n))):
        for perm in itertools.permutations(part):
            yield tuple(frozenset(b) for b in perm)


def random_rational(rng: random.Random, bound: int = 9) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))


def random_nonzero_vector(rng: random.Random, d: int, bound: int = 9) -> Coords:
    while True:
        a = tuple(random_rational(rng, bound) for _ in range(d))
        if any(a):
            return a


def random_tree(rng: random.Random, d: int, n: int,
                shape: Sequence[frozenset[int]] | None = None) -> StableRootedTree:
    if shape is None:
        shapes = list(chain_shapes(n))
        shape = rng.choice(shapes)
    comps = tuple(TreeComponent({i: random_nonzero_vector(rng, d) for i in sorted(block)})
                  for block in shape)
    return StableRootedTree(d, n, comps)
