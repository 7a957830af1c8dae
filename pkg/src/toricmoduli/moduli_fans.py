"""Toric constructions for the Losev-Manin type spaces T^LM_{d,n}.

Lattice convention: N = Z^{d(n-1)} / (sum of all e^k_i), realized as
Z^{d(n-1)-1} by dropping the last basis vector e^d_{n-1}, whose class is
minus the sum of all the others.  Basis vectors are ordered by (i, k).
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .exactlinalg import (
    IntVector,
    QuotientPresentation,
    Sublattice,
    check_quotient,
    is_zero,
    transpose,
    vec_add,
)
from .fan import (
    Fan,
    FanError,
    FanProjection,
    SplitFibration,
    _walls,
    determinant,
    point_fan,
    product_fan,
    projective_space_fan,
    split_fibration,
    star_subdivide,
)


class WeightError(ValueError):
    pass


# ---------------------------------------------------------------------------
# weights


@dataclass(frozen=True)
class WeightVector:
    a: tuple[Fraction, ...]

    def __post_init__(self):
        a = tuple(Fraction(x) for x in self.a)
        if not all(0 < x <= 1 for x in a):
            raise WeightError("weights must satisfy 0 < a_i <= 1")
        if sum(a) <= 1:
            raise WeightError("weights must sum to more than 1")
        object.__setattr__(self, "a", a)

    @property
    def n(self) -> int:
        return len(self.a)


def lm_weights(n: int, eps: Fraction | None = None) -> WeightVector:
    eps = Fraction(1, n - 1) if eps is None else Fraction(eps)
    return WeightVector((eps,) * (n - 1) + (Fraction(1),))


def collision_set(a: WeightVector) -> set[frozenset[int]]:
    """Index sets I (1-based) with 2 <= |I| <= n-1 whose weights sum past 1."""
    n = a.n
    out = set()
    for size in range(2, n):
        for I in itertools.combinations(range(1, n + 1), size):
            if sum(a.a[i - 1] for i in I) > 1:
                out.add(frozenset(I))
    return out


# ---------------------------------------------------------------------------
# coordinates


def _check_dn(d: int, n: int, min_n: int = 3) -> None:
    if d < 1 or n < min_n:
        raise FanError(f"need d >= 1 and n >= {min_n}, got d={d}, n={n}")


def lattice_rank(d: int, n: int) -> int:
    return d * (n - 1) - 1


def ebar(d: int, n: int, i: int, k: int) -> IntVector:
    """Class of e^k_i (1-based) in the eliminated coordinates of N."""
    r = lattice_rank(d, n)
    pos = d * (i - 1) + (k - 1)
    if pos == r:
        return (-1,) * r
    return tuple(int(j == pos) for j in range(r))


def block_sum(d: int, n: int, I: Iterable[int]) -> IntVector:
    """sum over i in I of (e^1_i + ... + e^d_i), in N."""
    v = (0,) * lattice_rank(d, n)
    for i in I:
        for k in range(1, d + 1):
            v = vec_add(v, ebar(d, n, i, k))
    return v


def _proper_subsets(n: int) -> Iterable[tuple[int, ...]]:
    for size in range(1, n - 1):
        yield from itertools.combinations(range(1, n), size)


def lm_rays(d: int, n: int) -> tuple[IntVector, ...]:
    """Rays of the fan of T^LM_{d,n} from the closed formula."""
    _check_dn(d, n, 2)
    rays = {ebar(d, n, i, k) for i in range(1, n) for k in range(1, d + 1)}
    rays |= {block_sum(d, n, I) for I in _proper_subsets(n)}
    rays.discard(())
    return tuple(sorted(rays))


# ---------------------------------------------------------------------------
# blow-up centers


@dataclass(frozen=True)
class Center:
    """A torus-invariant collision locus delta_{d,I} with n in I."""

    I: frozenset[int]
    rays: tuple[IntVector, ...]

    @property
    def barycenter(self) -> IntVector:
        return tuple(sum(col) for col in zip(*self.rays))


def delta_cone(d: int, n: int, I: Iterable[int]) -> Center:
    I = frozenset(I)
    _check_dn(d, n, 2)
    if n not in I:
        raise FanError(f"delta_{{d,{sorted(I)}}} is not torus invariant: {n} is not in I")
    if not 2 <= len(I) <= n - 1 or not I <= set(range(1, n + 1)):
        raise FanError(f"collision set {sorted(I)} has the wrong size")
    rays = tuple(sorted(ebar(d, n, i, k) for i in sorted(I - {n}) for k in range(1, d + 1)))
    return Center(I, rays)


def lm_centers(n: int) -> list[frozenset[int]]:
    """All I with n in I and 2 <= |I| <= n-1, in the default order.

    The default order is decreasing |I| (smallest strata first), ties broken
    lexicographically.
    """
    out = [frozenset(S) | {n} for S in _proper_subsets(n)]
    return sorted(out, key=lambda I: (-len(I), sorted(I)))


def _blow_up(d: int, n: int, centers: Sequence[frozenset[int]], check: bool) -> Fan:
    r = lattice_rank(d, n)
    if r == 0:
        return point_fan()
    f = projective_space_fan(r)
    for I in centers:
        v = delta_cone(d, n, I).barycenter
        if v in f.ray_index:
            # the center is a divisor (d = 1, |I| = 2); blowing it up does nothing
            continue
        g = star_subdivide(f, v)
        if check:
            _check_step(f, g)
        f = g
    return f


def _check_step(before: Fan, after: Fan) -> None:
    if len(after.rays) != len(before.rays) + 1:
        raise AssertionError("subdivision did not add exactly one ray")
    fresh = set(after.max_cones) - set(before.max_cones)
    for c in fresh:
        if abs(determinant(after.cone_rays(c))) != 1:
            raise AssertionError(f"subdivision produced a singular cone {after.cone_rays(c)}")
    if any(len(cs) != 2 for cs in _walls(after).values()):
        raise AssertionError("subdivision broke completeness")


def order_violation(order: Sequence[frozenset[int]]) -> tuple[frozenset[int], frozenset[int]] | None:
    """First pair (I, J) with |I| >= 3, I a strict subset of J, I before J."""
    seen: list[frozenset[int]] = []
    for J in order:
        for I in seen:
            if len(I) >= 3 and I < J:
                return I, J
        seen.append(J)
    return None


def random_admissible_order(n: int, rng: random.Random) -> list[frozenset[int]]:
    """A uniformly chosen next center among those allowed at each step."""
    todo = lm_centers(n)
    out = []
    while todo:
        avail = [I for I in todo if len(I) == 2 or not any(I < J for J in todo)]
        I = rng.choice(avail)
        out.append(I)
        todo.remove(I)
    return out


def build_lm_fan(d: int, n: int, order: Sequence[Iterable[int]] | None = None, *,
                 check: bool = False, allow_any_order: bool = False) -> Fan:
    """Fan of T^LM_{d,n} as iterated stellar subdivisions of P^{d(n-1)-1}.

    ``order`` lists every collision set I (n in I, 2 <= |I| <= n-1) exactly
    once.  A center with |I| >= 3 must come after every strict superset of
    I; otherwise the stellar subdivision at its barycenter is not the blow-up
    of its total transform and the result depends on the order.
    ``allow_any_order`` skips that check.  ``check`` asserts smoothness and
    completeness after each step.
    """
    _check_dn(d, n, 2)
    default = lm_centers(n)
    if order is None:
        centers = default
    else:
        centers = [frozenset(I) for I in order]
        if len(centers) != len(default) or set(centers) != set(default):
            raise FanError("order must list every collision set exactly once")
        bad = order_violation(centers)
        if bad and not allow_any_order:
            raise FanError(f"center {sorted(bad[0])} is blown up before its superset {sorted(bad[1])}")
    return _blow_up(d, n, centers, check)


def stage1_fan(d: int, n: int) -> Fan:
    """Blow-up along the centers with |I| = 2 only."""
    _check_dn(d, n, 2)
    return _blow_up(d, n, [I for I in lm_centers(n) if len(I) == 2], False)


# ---------------------------------------------------------------------------
# subtorus and the downgrade


def subtorus_lattice(d: int, n: int) -> Sublattice:
    """One-parameter subgroups of the small-diagonal subtorus, inside N."""
    _check_dn(d, n)
    r = lattice_rank(d, n)
    gens = []
    for k in range(1, d + 1):
        v = (0,) * r
        for i in range(1, n):
            v = vec_add(v, ebar(d, n, i, k))
        if not is_zero(v):
            gens.append(v)
    lat = Sublattice(r, tuple(gens))
    return Sublattice(r, lat.basis())


def ehat(d: int, n: int, i: int, k: int) -> IntVector:
    """Class of e^k_i in Z^{d(n-1)} / (sum_i e^k_i for each k), in the
    basis {ehat^k_i : i <= n-2}."""
    size = d * (n - 2)
    if i == n - 1:
        return tuple(-1 if j % d == k - 1 else 0 for j in range(size))
    pos = d * (i - 1) + (k - 1)
    return tuple(int(j == pos) for j in range(size))


def plm_rays(d: int, n: int) -> tuple[IntVector, ...]:
    """Rays of the fan of the space of n+d points in P^d, from the formula."""
    _check_dn(d, n)
    rays = {ehat(d, n, i, k) for i in range(1, n) for k in range(1, d + 1)}
    for I in _proper_subsets(n):
        v = (0,) * (d * (n - 2))
        for i in I:
            for k in range(1, d + 1):
                v = vec_add(v, ehat(d, n, i, k))
        rays.add(v)
    return tuple(sorted(rays))


def plm_quotient(d: int, n: int) -> QuotientPresentation:
    """The quotient N / N' written in the ehat basis."""
    _check_dn(d, n)
    total = (0,) * (d * (n - 2))
    for i in range(1, n):
        for k in range(1, d + 1):
            total = vec_add(total, ehat(d, n, i, k))
    assert is_zero(total), "ehat map is not defined on N"
    # columns: images of the retained basis vectors of N
    cols = [ehat(d, n, i, k) for i in range(1, n) for k in range(1, d + 1)][:-1]
    cmap = transpose(cols)
    sub = subtorus_lattice(d, n)
    q = QuotientPresentation(lattice_rank(d, n), sub.basis(), tuple(cmap), d * (n - 2))
    check_quotient(q)
    return q


# ---------------------------------------------------------------------------
# the fibration over (P^{d-1})^{n-1}


def base_fan(d: int, n: int) -> Fan:
    f = projective_space_fan(d - 1)
    for _ in range(n - 2):
        f = product_fan(f, projective_space_fan(d - 1))
    return f


def base_map(d: int, n: int) -> tuple[IntVector, ...]:
    """Lattice map N -> (+)_i Z^d/(sum_k e^k_i), each factor as the lattice of P^{d-1}."""
    if d < 2:
        raise FanError("d = 1: the base (P^0)^{n-1} is a point")
    _check_dn(d, n)
    tr = (d - 1) * (n - 1)

    def image(i: int, k: int) -> IntVector:
        off = (d - 1) * (i - 1)
        v = [0] * tr
        if k < d:
            v[off + k - 1] = 1
        else:
            for j in range(d - 1):
                v[off + j] = -1
        return tuple(v)

    full = [image(i, k) for i in range(1, n) for k in range(1, d + 1)]
    if not is_zero(tuple(sum(c) for c in zip(*full))):
        raise AssertionError("base map is not defined on N")
    return tuple(transpose(full[:-1]))


def base_projection(d: int, n: int, source: Fan | None = None) -> FanProjection:
    m = base_map(d, n)
    src = build_lm_fan(d, n) if source is None else source
    return FanProjection(m, src, base_fan(d, n))


def fiber_basis(d: int, n: int) -> tuple[IntVector, ...]:
    """Kernel basis sum_k ebar^k_i, i = 1..n-2, matching the d = 1 chart."""
    return tuple(block_sum(d, n, [i]) for i in range(1, n - 1))


@dataclass(frozen=True)
class FibrationReport:
    d: int
    n: int
    ok: bool
    certificate: SplitFibration
    source_cones: int
    expected_cones: int
    fiber_matches: bool
    detail: str = ""

    def to_json(self) -> dict:
        c = self.certificate
        return {
            "d": self.d,
            "n": self.n,
            "ok": self.ok,
            "source_cones": self.source_cones,
            "expected_cones": self.expected_cones,
            "fiber_matches": self.fiber_matches,
            "fiber": c.fiber.to_json() if c.fiber else None,
            "failed_clause": c.clause,
            "failed_cone": [list(r) for r in c.cone] if c.cone else None,
            "detail": self.detail or c.detail,
        }


def _fibration_report(d, n, src, expected_fiber, expected_cones) -> FibrationReport:
    cert = split_fibration(base_projection(d, n, src), fiber_basis(d, n))
    matches = bool(cert) and cert.fiber == expected_fiber
    ok = matches and len(src.max_cones) == expected_cones
    detail = "" if ok or not cert else "fiber fan or cone count differs from the expected one"
    return FibrationReport(d, n, ok, cert, len(src.max_cones), expected_cones, matches, detail)


def expected_cone_count(d: int, n: int) -> int:
    from math import factorial

    return d ** (n - 1) * factorial(n - 1)


def verify_fibration(d: int, n: int) -> FibrationReport:
    """T^LM_{d,n} over (P^{d-1})^{n-1} with fiber T^LM_{1,n}."""
    return _fibration_report(d, n, build_lm_fan(d, n), build_lm_fan(1, n), expected_cone_count(d, n))


def verify_stage1(d: int, n: int) -> FibrationReport:
    """The |I| = 2 blow-up over (P^{d-1})^{n-1} with fiber P^{n-2}."""
    src = stage1_fan(d, n)
    return _fibration_report(d, n, src, projective_space_fan(n - 2), d ** (n - 1) * (n - 1))
