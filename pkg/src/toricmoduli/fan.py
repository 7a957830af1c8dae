"""Simplicial polyhedral fans: builders, predicates, stellar subdivision,
downgrades and split-fibration certificates."""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

from .exactlinalg import (
    IntMatrix,
    IntVector,
    QuotientPresentation,
    Sublattice,
    cone_coordinates,
    determinant,
    identity,
    invariant_factors,
    is_zero,
    kernel_lattice,
    matvec,
    primitive,
    rank,
    solve,
)

Cone = tuple[int, ...]


class FanError(ValueError):
    pass


@lru_cache(maxsize=500_000)
def _independent(rays: tuple[IntVector, ...]) -> bool:
    if not rays:
        return True
    if len(rays) == len(rays[0]):
        return determinant(rays) != 0
    return rank(rays) == len(rays)


@dataclass(frozen=True)
class Fan:
    """A simplicial fan given by primitive rays and maximal cones.

    The constructor canonicalizes: rays are sorted lexicographically and the
    cones are re-indexed, sorted, and deduplicated.  Equality of two ``Fan``
    objects is therefore equality of fans in a shared lattice.
    """

    rank: int
    rays: tuple[IntVector, ...]
    max_cones: tuple[Cone, ...]

    def __post_init__(self):
        rays = [tuple(int(x) for x in r) for r in self.rays]
        for r in rays:
            if len(r) != self.rank:
                raise FanError(f"ray {r} does not live in rank {self.rank}")
            if is_zero(r) or primitive(r) != r:
                raise FanError(f"ray {r} is not primitive")
        if len(set(rays)) != len(rays):
            raise FanError("rays are not pairwise distinct")
        order = sorted(range(len(rays)), key=lambda i: rays[i])
        new_index = {old: new for new, old in enumerate(order)}
        cones = set()
        for c in self.max_cones:
            if len(set(c)) != len(c):
                raise FanError(f"cone {c} repeats a ray")
            cones.add(tuple(sorted(new_index[i] for i in c)))
        sorted_rays = tuple(rays[i] for i in order)
        for c in cones:
            if not _independent(tuple(sorted_rays[i] for i in c)):
                raise FanError(f"cone {c} is not simplicial")
        object.__setattr__(self, "rays", sorted_rays)
        object.__setattr__(self, "max_cones", tuple(sorted(cones)))

    def cone_rays(self, cone: Cone) -> tuple[IntVector, ...]:
        return tuple(self.rays[i] for i in cone)

    @cached_property
    def ray_index(self) -> dict[IntVector, int]:
        return {r: i for i, r in enumerate(self.rays)}

    @cached_property
    def smooth(self) -> bool:
        return is_smooth(self)

    @cached_property
    def complete(self) -> bool:
        return is_complete(self)

    def picard_proxy(self) -> int:
        return len(self.rays) - self.rank

    def cone_sets(self) -> frozenset[frozenset[IntVector]]:
        return frozenset(frozenset(self.cone_rays(c)) for c in self.max_cones)

    def to_json(self) -> dict:
        return {
            "rank": self.rank,
            "rays": [list(r) for r in self.rays],
            "max_cones": [list(c) for c in self.max_cones],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Fan":
        return cls(int(data["rank"]), tuple(tuple(r) for r in data["rays"]),
                   tuple(tuple(c) for c in data["max_cones"]))

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


@dataclass(frozen=True)
class FanProjection:
    map: IntMatrix
    source: Fan
    target: Fan

    def __post_init__(self):
        m = tuple(tuple(int(x) for x in row) for row in self.map)
        if len(m) != self.target.rank or any(len(row) != self.source.rank for row in m):
            raise FanError("map shape does not match source and target ranks")
        object.__setattr__(self, "map", m)

    def __call__(self, v: Sequence[int]) -> IntVector:
        return tuple(matvec(self.map, v))


# ---------------------------------------------------------------------------
# builders


def projective_space_fan(m: int) -> Fan:
    """Fan of P^m: rays e_1..e_m and -(e_1+...+e_m)."""
    if m < 1:
        raise FanError("projective space needs m >= 1")
    rays = list(identity(m)) + [tuple([-1] * m)]
    cones = list(itertools.combinations(range(m + 1), m))
    return Fan(m, tuple(rays), tuple(cones))


def point_fan() -> Fan:
    return Fan(0, (), ((),))


def product_fan(a: Fan, b: Fan) -> Fan:
    rays = [r + (0,) * b.rank for r in a.rays] + [(0,) * a.rank + r for r in b.rays]
    off = len(a.rays)
    cones = [ca + tuple(off + i for i in cb) for ca in a.max_cones for cb in b.max_cones]
    return Fan(a.rank + b.rank, tuple(rays), tuple(cones))


def containing_cone(f: Fan, v: Sequence[int]) -> Cone | None:
    """The minimal cone of ``f`` containing ``v``, or None outside the support."""
    v = tuple(v)
    for c in f.max_cones:
        coeffs = cone_coordinates(f.cone_rays(c), v)
        if coeffs is None or any(x < 0 for x in coeffs):
            continue
        return tuple(i for i, x in zip(c, coeffs) if x > 0)
    return None


def star_subdivide(f: Fan, v: Sequence[int]) -> Fan:
    """Stellar subdivision of ``f`` at the primitive vector ``v``."""
    v = tuple(int(x) for x in v)
    if is_zero(v) or primitive(v) != v:
        raise FanError(f"{v} is not primitive")
    if v in f.ray_index:
        raise FanError(f"{v} is already a ray")
    tau = containing_cone(f, v)
    if tau is None:
        raise FanError(f"{v} lies outside the support of the fan")
    tau_set = set(tau)
    new = len(f.rays)
    cones = []
    for c in f.max_cones:
        if not tau_set.issubset(c):
            cones.append(c)
            continue
        # cone(v, F) for the facets F of c missing one ray of tau
        for r in tau:
            cones.append(tuple(i for i in c if i != r) + (new,))
    return Fan(f.rank, f.rays + (v,), tuple(cones))


def restrict_cones(f: Fan, keep: Iterable[Cone]) -> Fan:
    """Same rays (those still used), only the given maximal cones."""
    keep = list(keep)
    used = sorted({i for c in keep for i in c})
    idx = {old: new for new, old in enumerate(used)}
    return Fan(f.rank, tuple(f.rays[i] for i in used), tuple(tuple(idx[i] for i in c) for c in keep))


# ---------------------------------------------------------------------------
# predicates


def is_smooth(f: Fan) -> bool:
    """Every maximal cone is generated by part of a lattice basis."""
    for c in f.max_cones:
        rays = f.cone_rays(c)
        if not rays:
            continue
        if len(rays) == f.rank:
            if abs(determinant(rays)) != 1:
                return False
        elif invariant_factors(rays) != (1,) * len(rays):
            return False
    return True


def _walls(f: Fan) -> dict[Cone, list[Cone]]:
    walls: dict[Cone, list[Cone]] = {}
    for c in f.max_cones:
        for i in range(len(c)):
            walls.setdefault(c[:i] + c[i + 1:], []).append(c)
    return walls


def is_complete(f: Fan) -> bool:
    """Closed pseudo-manifold test: every wall lies in exactly two maximal cones.

    Valid for pure, full-dimensional simplicial fans, which is all this
    package builds.
    """
    if f.rank == 0:
        return f.max_cones == ((),)
    if not f.max_cones or any(len(c) != f.rank for c in f.max_cones):
        return False
    return all(len(cs) == 2 for cs in _walls(f).values())


def _generic_point(rank: int, salt: int) -> IntVector:
    return tuple((salt + 2) ** k * (1 if k % 2 else -1) + salt for k in range(rank))


def is_complete_fan_structure(f: Fan) -> bool:
    """Stronger completeness check than :func:`is_complete`.

    Besides the pseudo-manifold condition, the two cones at every wall must
    lie on opposite sides of it, and some generic point must be covered by
    exactly one maximal cone.  Together these force the cones to tile space.
    """
    if not is_complete(f):
        return False
    if f.rank == 0:
        return True
    for wall, (c1, c2) in _walls(f).items():
        (a,) = set(c1) - set(wall)
        (b,) = set(c2) - set(wall)
        # sign of det(wall, a) vs det(wall, b)
        wr = f.cone_rays(wall)
        if determinant(wr + (f.rays[a],)) * determinant(wr + (f.rays[b],)) >= 0:
            return False
    for salt in range(50):
        p = _generic_point(f.rank, salt)
        hits = 0
        on_boundary = False
        for c in f.max_cones:
            co = cone_coordinates(f.cone_rays(c), p)
            if all(x >= 0 for x in co):
                if any(x == 0 for x in co):
                    on_boundary = True
                    break
                hits += 1
        if not on_boundary:
            return hits == 1
    raise FanError("could not find a generic point")


def fans_equal(a: Fan, b: Fan) -> bool:
    """Equality as fans in the same lattice (no unimodular search)."""
    if a.rank != b.rank:
        return False
    return set(a.rays) == set(b.rays) and a.cone_sets() == b.cone_sets()


# ---------------------------------------------------------------------------
# downgrade and fibrations


def downgrade_rays(f: Fan, sub: Sublattice, q: QuotientPresentation) -> tuple[IntVector, ...]:
    """Images of the rays of ``f`` in ``N/sub``, primitive, deduplicated, sorted."""
    if q.ambient_rank != f.rank or sub.ambient_rank != f.rank:
        raise FanError("quotient does not present the fan's lattice")
    for g in sub.generators:
        if not is_zero(q(g)):
            raise FanError("quotient does not kill the sublattice")
    out = set()
    for r in f.rays:
        img = q(r)
        if not is_zero(img):
            out.add(primitive(img))
    return tuple(sorted(out))


@dataclass(frozen=True)
class SplitFibration:
    """Outcome of :func:`split_fibration`.

    On success ``fiber`` is the fiber fan written in ``kernel_basis``
    coordinates; on failure ``clause``, ``cone`` and ``detail`` say what broke.
    """

    ok: bool
    fiber: Fan | None = None
    kernel_basis: tuple[IntVector, ...] = ()
    clause: str | None = None
    cone: tuple[IntVector, ...] | None = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok


def _fail(clause: str, cone, detail: str) -> SplitFibration:
    return SplitFibration(False, clause=clause, cone=cone, detail=detail)


def split_fibration(p: FanProjection, kernel_basis: Sequence[Sequence[int]] | None = None) -> SplitFibration:
    """Certify that ``p`` is a split toric fibration.

    Checks, in order: (a) rays go to zero or onto a positive multiple of a
    target ray; (c) each maximal cone is a fiber cone of full fiber dimension
    plus a lift of a maximal target cone on which the map is unimodular; (b)
    the fiber fan is complete in the kernel lattice; (d) every maximal target
    cone is hit.  ``kernel_basis`` fixes the fiber coordinates; it must be a
    basis of the kernel lattice.
    """
    src, tgt = p.source, p.target
    if tgt.rank and invariant_factors(p.map) != (1,) * tgt.rank:
        raise FanError("lattice map is not surjective")
    kern = kernel_lattice(p.map, src.rank) if tgt.rank else Sublattice(src.rank, identity(src.rank))
    k = src.rank - tgt.rank
    if kernel_basis is None:
        basis = kern.basis()
    else:
        basis = tuple(tuple(int(x) for x in b) for b in kernel_basis)
        if len(basis) != k or not Sublattice(src.rank, basis).same_lattice(kern):
            raise FanError("supplied kernel basis does not span the kernel lattice")

    # (a)
    image: dict[int, int | None] = {}
    for i, r in enumerate(src.rays):
        img = p(r)
        if is_zero(img):
            image[i] = None
            continue
        prim = primitive(img)
        j = tgt.ray_index.get(prim)
        if j is None:
            return _fail("a", (r,), f"ray {r} maps to {img}, not onto a target ray")
        image[i] = j

    def fiber_coords(r: IntVector) -> IntVector:
        if not basis:
            return ()
        c = solve(basis, r)
        if c is None or any(x.denominator != 1 for x in c):
            raise FanError(f"kernel ray {r} is not in the span of the kernel basis")
        return tuple(int(x) for x in c)

    # (c)
    tgt_cones = {frozenset(c): c for c in tgt.max_cones}
    fiber_ray_of = {i: fiber_coords(src.rays[i]) for i, j in image.items() if j is None}
    pairs = set()
    fiber_cones = set()
    for c in src.max_cones:
        rays = src.cone_rays(c)
        fib = tuple(i for i in c if image[i] is None)
        base = tuple(i for i in c if image[i] is not None)
        if len(fib) != k:
            return _fail("c", rays, f"fiber part has dimension {len(fib)}, expected {k}")
        imgs = frozenset(image[i] for i in base)
        if len(imgs) != len(base) or imgs not in tgt_cones:
            return _fail("c", rays, "non-kernel rays do not map bijectively onto a maximal target cone")
        if base and abs(determinant(tuple(p(src.rays[i]) for i in base))) != 1:
            return _fail("c", rays, "lattice map is not unimodular on the lifted base cone")
        fcone = frozenset(fiber_ray_of[i] for i in fib)
        fiber_cones.add(fcone)
        pairs.add((imgs, fcone))
    if len(pairs) != len(src.max_cones):
        return _fail("c", None, "two maximal cones share the same base and fiber cone")

    # (b)
    fray_list = sorted({fiber_ray_of[i] for i in fiber_ray_of})
    fidx = {r: i for i, r in enumerate(fray_list)}
    try:
        fiber = Fan(k, tuple(fray_list), tuple(tuple(fidx[r] for r in fc) for fc in fiber_cones))
    except FanError as exc:
        return _fail("b", None, f"fiber cones do not form a simplicial fan: {exc}")
    if not is_complete(fiber):
        return _fail("b", None, "fiber fan is not complete in the kernel lattice")

    # (d)
    hit = {b for b, _ in pairs}
    missing = [c for fs, c in tgt_cones.items() if fs not in hit]
    if missing:
        return _fail("d", tgt.cone_rays(missing[0]), "maximal target cone is not covered")

    if len(src.max_cones) != len(tgt.max_cones) * len(fiber.max_cones):
        raise AssertionError("split fibration cone count is not multiplicative")
    return SplitFibration(True, fiber=fiber, kernel_basis=basis)


def blowup_is_projective_bundle(m: int, k: int) -> bool:
    """Blow up P^m along the k-dimensional coordinate subspace and test that
    the result is a P^(k+1)-bundle over P^(m-k-1)."""
    if not (m >= 2 and 0 <= k <= m - 2):
        raise FanError("need m >= 2 and 0 <= k <= m-2")
    pm = projective_space_fan(m)
    center = tuple(sum(col) for col in zip(*identity(m)[k:]))  # e_{k+1}+...+e_m
    blown = star_subdivide(pm, center)
    assert blown.smooth and blown.complete
    # kill e_1..e_k and send e_{k+j} to the j-th ray of P^(m-k-1)
    base_rank = m - k - 1
    rows = []
    for j in range(base_rank):
        rows.append(tuple(0 for _ in range(k)) + tuple(
            1 if i == j else (-1 if i == base_rank else 0) for i in range(m - k)))
    proj = FanProjection(tuple(rows), blown, projective_space_fan(base_rank))
    basis = list(identity(m)[:k]) + [center]
    res = split_fibration(proj, basis)
    return bool(res) and res.fiber == projective_space_fan(k + 1)
