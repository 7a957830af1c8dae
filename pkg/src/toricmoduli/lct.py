"""Central hyperplane arrangements, their flats and log canonical thresholds,
plus the divisor arithmetic on the blow-up T_{d,3} of P^{2d-1}."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from math import gcd
from fractions import Fraction
from typing import Sequence

from .exactlinalg import rref


class ArrangementError(ValueError):
    pass


MAX_FORMS = 24


@dataclass(frozen=True)
class CentralArrangement:
    m: int
    forms: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        forms = tuple(tuple(Fraction(x) for x in f) for f in self.forms)
        for f in forms:
            if len(f) != self.m:
                raise ArrangementError(f"form {f} is not in {self.m} variables")
            if not any(f):
                raise ArrangementError("zero linear form")
        normed = [_projective_key(f) for f in forms]
        if len(set(normed)) != len(normed):
            raise ArrangementError("arrangement repeats a hyperplane")
        object.__setattr__(self, "forms", forms)


def _projective_key(f: Sequence[Fraction]) -> tuple[Fraction, ...]:
    lead = next(x for x in f if x != 0)
    return tuple(x / lead for x in f)


@dataclass(frozen=True)
class Flat:
    codim: int
    s: int
    forms: frozenset[int]  # indices of the hyperplanes containing the flat
    arrangement: CentralArrangement = field(compare=False, repr=False)

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.codim, self.s)

    @cached_property
    def normals(self) -> tuple[tuple[Fraction, ...], ...]:
        """Reduced row echelon basis of the span of the defining forms."""
        red, _ = rref([self.arrangement.forms[i] for i in sorted(self.forms)])
        return red


def _primitive_int(v: Sequence[Fraction]) -> tuple[int, ...]:
    den = 1
    for x in v:
        den = den * x.denominator // gcd(den, x.denominator)
    w = [int(x * den) for x in v]
    g = 0
    for x in w:
        g = gcd(g, x)
    return tuple(x // g for x in w) if g else tuple(w)


def _direction(v: tuple[int, ...]) -> tuple[int, ...]:
    # sign-normalized primitive vector: equal iff v, w are proportional
    lead = next(x for x in v if x)
    return v if lead > 0 else tuple(-x for x in v)


def _reduce(v: tuple[int, ...], by: tuple[int, ...], piv: int) -> tuple[int, ...]:
    a, b = by[piv], v[piv]
    if b == 0:
        return v
    w = [a * x - b * y for x, y in zip(v, by)]
    g = 0
    for x in w:
        g = gcd(g, x)
    return tuple(x // g for x in w) if g else tuple(w)


def flats(a: CentralArrangement) -> list[Flat]:
    """All proper flats (intersections of nonempty sets of hyperplanes).

    Each flat F carries the residues of the forms outside F modulo the span
    of F; the flats covering F are the classes of proportional residues.
    """
    if len(a.forms) > MAX_FORMS:
        raise ArrangementError(f"{len(a.forms)} hyperplanes exceed the enumeration guard of {MAX_FORMS}")
    base = {j: _primitive_int(f) for j, f in enumerate(a.forms)}
    found: dict[frozenset[int], int] = {frozenset(): 0}
    frontier: list[tuple[frozenset[int], dict[int, tuple[int, ...]]]] = [(frozenset(), base)]
    while frontier:
        nxt = []
        for members, residues in frontier:
            groups: dict[tuple[int, ...], list[int]] = {}
            for j, r in residues.items():
                groups.setdefault(_direction(r), []).append(j)
            for direction, js in groups.items():
                child = members | frozenset(js)
                if child in found:
                    continue
                found[child] = found[members] + 1
                piv = next(k for k, x in enumerate(direction) if x)
                rest = {k: _reduce(r, direction, piv) for k, r in residues.items() if k not in js}
                nxt.append((child, rest))
        frontier = nxt
    out = [Flat(codim, len(fs), fs, a) for fs, codim in found.items() if fs]
    return sorted(out, key=lambda f: (f.codim, sorted(f.forms)))


def lct(a: CentralArrangement) -> Fraction:
    """min over proper flats W of codim(W) / #(hyperplanes containing W)."""
    if not a.forms:
        raise ArrangementError("empty arrangement")
    return min(f.ratio for f in flats(a))


# ---------------------------------------------------------------------------
# the arrangement of A_j, B_j, C_j in P^{2d-1}


def tdn3_arrangement(d: int) -> CentralArrangement:
    """Forms x_1j, x_2j, x_1j - x_2j (j = 1..d) in variables x_11..x_1d, x_21..x_2d."""
    if d < 2:
        raise ArrangementError("need d >= 2")
    m = 2 * d

    def form(entries):
        v = [0] * m
        for pos, c in entries:
            v[pos] = c
        return tuple(v)

    A = [form([(j, 1)]) for j in range(d)]
    B = [form([(d + j, 1)]) for j in range(d)]
    C = [form([(j, 1), (d + j, -1)]) for j in range(d)]
    return CentralArrangement(m, tuple(A + B + C))


def _separated(d: int, forms: frozenset[int]) -> bool:
    # all A_j, all B_j or all C_j vanish: the blow-up separates this locus
    return any(set(range(k * d, (k + 1) * d)) <= forms for k in range(3))


# per coordinate index j: (codim, s, which of A, B, C contain the local flat)
_LOCAL = (
    (0, 0, ""),
    (1, 1, "A"),
    (1, 1, "B"),
    (1, 1, "C"),
    (2, 3, "ABC"),
)


def tdn3_min_ratio(d: int, method: str = "factorized") -> Fraction:
    """Least codim/s over flats not separated by the blow-up.

    ``factorized`` uses that the arrangement is a product over j of three
    lines through the origin of C^2; ``flats`` enumerates flats directly.
    """
    if d < 2:
        raise ArrangementError("need d >= 2")
    if method == "flats":
        a = tdn3_arrangement(d)
        return min(f.ratio for f in flats(a) if not _separated(d, f.forms))
    if method != "factorized":
        raise ValueError(f"unknown method {method!r}")
    if 5 ** d > 2 ** 24:
        raise ArrangementError("enumeration guard exceeded")
    best = None
    for combo in itertools.product(_LOCAL, repeat=d):
        codim = sum(c[0] for c in combo)
        if codim == 0:
            continue
        if any(all(letter in c[2] for c in combo) for letter in "ABC"):
            continue
        r = Fraction(codim, sum(c[1] for c in combo))
        if best is None or r < best:
            best = r
    return best


def tdn3_closed_form(d: int) -> Fraction:
    """min over strict subsets J_A, J_B, J_C of [d], not all empty, of
    (|J_A| + |J_B| + |J_C - J_A&J_B|) / (|J_A| + |J_B| + |J_C|)."""
    if d < 2:
        raise ArrangementError("need d >= 2")
    full = (1 << d) - 1
    subsets = [m for m in range(full)]  # strict subsets as bitmasks
    pc = [bin(m).count("1") for m in range(full + 1)]
    best = None
    for ja in subsets:
        for jb in subsets:
            both = ja & jb
            for jc in subsets:
                den = pc[ja] + pc[jb] + pc[jc]
                if den == 0:
                    continue
                num = pc[ja] + pc[jb] + pc[jc & ~both]
                r = Fraction(num, den)
                if best is None or r < best:
                    best = r
    return best


# ---------------------------------------------------------------------------
# divisor classes on T_{d,3}


@dataclass(frozen=True)
class DivisorClassT3:
    """Rational combination of pi^*H, E_12, E_13, E_23."""

    H: Fraction = Fraction(0)
    E12: Fraction = Fraction(0)
    E13: Fraction = Fraction(0)
    E23: Fraction = Fraction(0)

    def __post_init__(self):
        for name in ("H", "E12", "E13", "E23"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))

    def __add__(self, o: "DivisorClassT3") -> "DivisorClassT3":
        return DivisorClassT3(self.H + o.H, self.E12 + o.E12, self.E13 + o.E13, self.E23 + o.E23)

    def __sub__(self, o: "DivisorClassT3") -> "DivisorClassT3":
        return self + o.scale(-1)

    def scale(self, c) -> "DivisorClassT3":
        c = Fraction(c)
        return DivisorClassT3(c * self.H, c * self.E12, c * self.E13, c * self.E23)

    def as_tuple(self) -> tuple[Fraction, ...]:
        return (self.H, self.E12, self.E13, self.E23)


H = DivisorClassT3(H=1)
E12 = DivisorClassT3(E12=1)
E13 = DivisorClassT3(E13=1)
E23 = DivisorClassT3(E23=1)


def exceptional_coefficient(d: int) -> int:
    """Coefficient of E_I in pi^*(hyperplane through delta_{d,I}) - strict transform."""
    return d - 1


def strict_transforms(d: int) -> tuple[list[DivisorClassT3], list[DivisorClassT3], list[DivisorClassT3]]:
    """Classes of the strict transforms of A_j, B_j, C_j.

    A_j contains delta_13, B_j contains delta_23, C_j contains delta_12.
    """
    m = exceptional_coefficient(d)
    A = [H - E13.scale(m) for _ in range(d)]
    B = [H - E23.scale(m) for _ in range(d)]
    C = [H - E12.scale(m) for _ in range(d)]
    return A, B, C


def pullback_and_anticanonical(d: int) -> tuple[DivisorClassT3, DivisorClassT3, DivisorClassT3]:
    """Return (-K, D, -(K + D)) on T_{d,3}."""
    if d < 2:
        raise ArrangementError("need d >= 2")
    third = Fraction(2, 3)
    # -K of P^{2d-1} is 2d H, which also equals 2/3 of the sum of the 3d hyperplanes
    minus_k_p = H.scale(2 * d)
    assert minus_k_p == H.scale(third * 3 * d)
    # discrepancy of a codimension-d blow-up is d - 1; the three centers are disjoint
    minus_k = minus_k_p - (E12 + E13 + E23).scale(d - 1)
    A, B, C = strict_transforms(d)
    total = DivisorClassT3()
    for cls in A + B + C:
        total = total + cls
    D = total.scale(third)
    return minus_k, D, minus_k - D


def log_fano_certificate(d: int) -> dict:
    """Witnesses that (T_{d,3}, (1 - eps) D) is log Fano.

    (i) the least codim/s over unseparated flats is 2/3, so lct(D') >= 2/3
    and lct(D) >= 1; (ii) -(K + D) is a positive combination of the
    exceptional divisors.  Ampleness of such combinations is an external
    criterion, recorded as an assumption.
    """
    ratio = tdn3_min_ratio(d)
    _, _, mkd = pullback_and_anticanonical(d)
    coeffs = (mkd.E12, mkd.E13, mkd.E23)
    klt = ratio == Fraction(2, 3)
    positive = mkd.H == 0 and all(c > 0 for c in coeffs) and len(set(coeffs)) == 1
    return {
        "d": d,
        "pass": klt and positive,
        "min_ratio": ratio,
        "lct_D": ratio * Fraction(3, 2),
        "anticanonical_H": mkd.H,
        "anticanonical_E": coeffs[0] if len(set(coeffs)) == 1 else list(coeffs),
        "witnesses": [ratio, coeffs[0]],
        "klt_witness": klt,
        "ampleness_witness": positive,
        "assumption": "positive combinations of E_12, E_13, E_23 are very ample on T_{d,3}",
    }
