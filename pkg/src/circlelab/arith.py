"""Integer polynomials, reduced rationals, Farey-level exhaustions and arcs.

Everything in here is exact: polynomials are evaluated with arbitrary-width
integers, fractions are `fractions.Fraction` under the hood, and arc
classification only falls back to floating point at the final comparison
against the (irrational) arc width, where ties within 2 ulp of the boundary
are resolved toward Minor.
"""

from __future__ import annotations

import math
from bisect import bisect_left
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Union

from .errors import ParameterError

RealLike = Union[int, float, Fraction]


def _as_fraction(x: RealLike) -> Fraction:
    """Exact rational view of the input (floats are exact dyadic rationals)."""
    if isinstance(x, Fraction):
        return x
    return Fraction(x)


def torus_distance(x: Fraction) -> Fraction:
    """Distance from x to the nearest integer, exactly."""
    f = x - math.floor(x)
    return min(f, 1 - f)


@dataclass(frozen=True)
class IntPoly:
    """P(n) = b_d n^d + ... + b_1 n + b_0 with integer b_j and b_d > 0."""

    coeffs: tuple  # (b_0, b_1, ..., b_d)

    def __init__(self, coeffs):
        cs = tuple(int(c) for c in coeffs)
        if len(cs) < 2:
            raise ParameterError("polynomial must have degree >= 1")
        if cs[-1] <= 0:
            raise ParameterError("leading coefficient must be positive")
        object.__setattr__(self, "coeffs", cs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        return self.coeffs[-1]

    def __call__(self, n: int) -> int:
        return eval_poly(self, n)


def eval_poly(P: IntPoly, n: int) -> int:
    """Exact evaluation of P at an integer (Horner, arbitrary width)."""
    n = int(n)
    acc = 0
    for c in reversed(P.coeffs):
        acc = acc * n + c
    return acc


@dataclass(frozen=True, order=True)
class ReducedFraction:
    """a/q in lowest terms with 0 <= a < q; 0/1 stands for the point 0 == 1."""

    a: int
    q: int

    def __post_init__(self):
        if self.q <= 0:
            raise ParameterError("denominator must be positive")
        if not (0 <= self.a < self.q) and not (self.a == 0 and self.q == 1):
            raise ParameterError("numerator must satisfy 0 <= a < q")
        if math.gcd(self.a, self.q) != 1:
            raise ParameterError(f"{self.a}/{self.q} is not reduced")

    @classmethod
    def make(cls, a: int, q: int) -> "ReducedFraction":
        """Reduce and wrap a/q onto the torus (1/1 collapses to 0/1)."""
        if q == 0:
            raise ParameterError("denominator must be nonzero")
        fr = Fraction(a, q)
        fr -= math.floor(fr)
        return cls(fr.numerator, fr.denominator)

    @property
    def value(self) -> Fraction:
        return Fraction(self.a, self.q)

    @property
    def level(self) -> int:
        """The Farey level s with q in [2^s, 2^(s+1))."""
        return self.q.bit_length() - 1

    def __str__(self) -> str:
        return f"{self.a}/{self.q}"


ZERO_FRACTION = ReducedFraction(0, 1)


@lru_cache(maxsize=None)
def farey_level(s: int) -> tuple:
    """All reduced a/q with q in [2^s, 2^(s+1)); level 0 is just {0/1}.

    Returned sorted by value so callers can bisect for neighbours.
    """
    if s < 0:
        raise ParameterError("level must be non-negative")
    if s == 0:
        return (ZERO_FRACTION,)
    out = []
    for q in range(1 << s, 1 << (s + 1)):
        for a in range(1, q):
            if math.gcd(a, q) == 1:
                out.append(ReducedFraction(a, q))
    out.sort(key=lambda fr: fr.value)
    return tuple(out)


@lru_cache(maxsize=None)
def _farey_values(s: int) -> tuple:
    return tuple(fr.value for fr in farey_level(s))


def fractions_near(s: int, x: Fraction, radius: float) -> list:
    """Level-s fractions within torus distance <= radius of x (x in [0,1))."""
    fracs = farey_level(s)
    vals = _farey_values(s)
    lo = bisect_left(vals, x - Fraction(radius))
    hi = bisect_left(vals, x + Fraction(radius))
    cand = set(fracs[max(lo - 1, 0):hi + 1])
    # wraparound: the torus glues 0 and 1 together
    cand.add(fracs[0])
    cand.add(fracs[-1])
    out = [fr for fr in cand if torus_distance(x - fr.value) <= radius]
    out.sort(key=lambda fr: fr.value)
    return out


def dirichlet_approx(alpha: RealLike, Q: int) -> ReducedFraction:
    """Best rational a/q, q <= Q, with |alpha - a/q| <= 1/(qQ).

    Walks the continued-fraction convergents of alpha (treated exactly)
    and returns the last convergent with denominator <= Q; Dirichlet's
    theorem guarantees the approximation quality.
    """
    if Q < 1:
        raise ParameterError("Q must be >= 1")
    x = _as_fraction(alpha)
    if not 0 <= x < 1:
        x -= math.floor(x)
    p_prev, q_prev = 1, 0
    p_cur, q_cur = math.floor(x), 1  # = 0 for x in [0,1)
    frac = x - math.floor(x)
    while frac != 0:
        a = math.floor(1 / frac)
        frac = 1 / frac - a
        p_nxt, q_nxt = a * p_cur + p_prev, a * q_cur + q_prev
        if q_nxt > Q:
            break
        p_prev, q_prev, p_cur, q_cur = p_cur, q_cur, p_nxt, q_nxt
    return ReducedFraction.make(p_cur, q_cur)


class ArcKind:
    MAJOR = "major"
    MINOR = "minor"


@dataclass(frozen=True)
class ArcParams:
    """Scale exponent n (t ~ 2^n), the width parameter delta, and deg P."""

    n: int
    delta: float
    degree: int

    def __post_init__(self):
        if self.n < 1:
            raise ParameterError("scale exponent n must be positive")
        if not (0 < self.delta <= 0.125):
            raise ParameterError("delta must lie in (0, 1/8]")
        if self.degree < 1:
            raise ParameterError("degree must be >= 1")

    @property
    def width(self) -> float:
        """Arc half-width 2^(-n(d - delta))."""
        return 2.0 ** (-self.n * (self.degree - self.delta))

    @property
    def s_max(self) -> int:
        """Largest admitted Farey level, floor(n * delta)."""
        return int(math.floor(self.n * self.delta))

    @property
    def critical_annulus_index(self) -> float:
        """The distance index l_n = n d / 2 where the two decay regimes meet."""
        return self.n * self.degree / 2.0


@dataclass(frozen=True)
class ArcLabel:
    kind: str
    fraction: Optional[ReducedFraction] = None
    s: Optional[int] = None
    pre_interval: Optional[int] = None
    annulus: Optional[float] = None

    @property
    def is_major(self) -> bool:
        return self.kind == ArcKind.MAJOR


MINOR_LABEL = ArcLabel(ArcKind.MINOR)


def _major_distance(alpha: Fraction, bd: int, frac: ReducedFraction) -> Fraction:
    """Exact torus distance of {b_d alpha} to a/q."""
    x = bd * alpha
    x -= math.floor(x)
    return torus_distance(x - frac.value)


def classify_arc(alpha: RealLike, P: IntPoly, params: ArcParams) -> ArcLabel:
    """Major/Minor classification of alpha at scale n.

    Scans every admitted level s <= floor(n delta); membership within
    2 ulp of the width boundary resolves toward Minor so classification
    is deterministic under float jitter.
    """
    if params.degree != P.degree:
        raise ParameterError("params.degree must match the polynomial degree")
    a = _as_fraction(alpha)
    if not 0 <= a < 1:
        a -= math.floor(a)
    bd = P.leading
    w = params.width
    if w >= 1.0 / (2 * bd):
        raise ParameterError(
            "scale too small for distinct pre-intervals; increase n")
    i = min(int(math.floor(bd * a)), bd - 1)
    tie = 2 * math.ulp(w)
    for s in range(params.s_max + 1):
        for fr in fractions_near(s, bd * a - math.floor(bd * a), w):
            dist = float(_major_distance(a, bd, fr))
            if dist < w and (w - dist) > tie:
                return ArcLabel(ArcKind.MAJOR, fraction=fr, s=s, pre_interval=i)
    return MINOR_LABEL


def annulus_label(alpha: RealLike, P: IntPoly, params: ArcParams,
                  label: ArcLabel) -> float:
    """Dyadic shell index k of the distance |{b_d alpha} - a/q|.

    k is the least integer with 2^(-k) <= distance, so a distance of
    exactly 2^(-21) gets k = 21.  Distance zero returns the +inf sentinel.
    """
    if not label.is_major:
        raise ParameterError("annulus labels only apply to major arcs")
    a = _as_fraction(alpha)
    dist = float(_major_distance(a, P.leading, label.fraction))
    return shell_index(dist)


def shell_index(dist: float) -> float:
    """Least k with 2^(-k) <= dist (i.e. dist in [2^-k, 2^-k+1)); inf at 0."""
    if dist < 0:
        raise ParameterError("distance must be non-negative")
    if dist == 0:
        return math.inf
    m, e = math.frexp(dist)  # dist = m * 2^e, m in [0.5, 1)
    return 1 - e


@dataclass(frozen=True)
class CongruenceData:
    """Least common denominator q_i and numerators (a^i_d, ..., a^i_1)."""

    q_i: int
    numerators: tuple  # (a^i_d, a^i_{d-1}, ..., a^i_1)


def congruence_data(P: IntPoly, frac: ReducedFraction, i: int) -> CongruenceData:
    """Congruence data for the weight S_P^i(a/q), by exact rational arithmetic.

    The component list is (a/q, b_{d-1}/b_d (a/q + i), ..., b_1/b_d (a/q + i));
    q_i is the lcm of the reduced component denominators and the numerators
    are the components rescaled to that common denominator.
    """
    bd = P.leading
    if not 0 <= i < bd:
        raise ParameterError(f"pre-interval index {i} out of [0, {bd})")
    base = frac.value
    shifted = base + i
    comps = [base]
    for j in range(P.degree - 1, 0, -1):
        comps.append(Fraction(P.coeffs[j], bd) * shifted)
    q_i = 1
    for c in comps:
        q_i = q_i * c.denominator // math.gcd(q_i, c.denominator)
    nums = [int(c * q_i) for c in comps]
    g = math.gcd(q_i, *[abs(n) for n in nums]) if nums else q_i
    if g > 1:  # cannot happen for an lcm, kept as a guard
        q_i //= g
        nums = [n // g for n in nums]
    return CongruenceData(q_i, tuple(nums))
