"""Multiplier-side objects: Weyl sums, Gauss weights, oscillatory integrals.

Phase arithmetic is exact: alpha is treated as the exact rational it is
(floats are dyadic rationals), and alpha * P(n) is reduced mod 1 with
integer arithmetic before ever touching floating point, so normalized
sums are correct to machine precision even when P(n) is huge.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache
from typing import Union

import numpy as np
from scipy.special import fresnel

from .arith import (IntPoly, ReducedFraction, congruence_data, eval_poly,
                    farey_level, fractions_near, torus_distance)
from .errors import NumericError, ParameterError, ResourceError

RealLike = Union[int, float, Fraction]

_TWO_PI = 2.0 * math.pi

# vt: switch from panel quadrature to the closed form above this many cycles
_VT_PERIOD_BUDGET = 2000.0
# fast_dyadic_quadratic_weyl: largest tail we are willing to sum directly
# (kept below 2^26 so squared indices stay inside int64)
DIRECT_SUM_BUDGET = 1 << 22


def _exact_phases(P: IntPoly, t: int, alpha: RealLike) -> np.ndarray:
    """Array of frac(alpha * P(n)) for n = 1..t, reduced exactly.

    Uses the finite-difference table of n -> num * P(n): after d forward
    differences the increments are constant integers, so each step is a
    handful of big-int additions and one reduction mod den.
    """
    a = alpha if isinstance(alpha, Fraction) else Fraction(alpha)
    num, den = a.numerator, a.denominator
    d = P.degree
    g = [num * eval_poly(P, n) for n in range(1, d + 2)]
    # forward differences D_0 .. D_d at n = 1
    diffs = list(g)
    for lvl in range(1, d + 1):
        for j in range(d, lvl - 1, -1):
            diffs[j] = diffs[j] - diffs[j - 1]
    out = np.empty(t, dtype=float)
    for n in range(t):
        out[n] = (diffs[0] % den) / den
        for j in range(d):
            diffs[j] += diffs[j + 1]
    return out


def weyl_sum(P: IntPoly, t: int, alpha: RealLike) -> complex:
    """The normalized exponential sum (1/t) sum_{n=1}^t e(-alpha P(n))."""
    if t < 1:
        raise ParameterError("t must be a positive integer")
    ph = _exact_phases(P, int(t), alpha)
    return complex(np.exp(-2j * math.pi * ph).sum() / t)


def weyl_sum_prefix(P: IntPoly, t_max: int, alpha: RealLike) -> np.ndarray:
    """All K_hat_t for t = 1..t_max at once (index t-1), via one phase pass."""
    if t_max < 1:
        raise ParameterError("t_max must be a positive integer")
    ph = _exact_phases(P, int(t_max), alpha)
    sums = np.cumsum(np.exp(-2j * math.pi * ph))
    return sums / np.arange(1, t_max + 1)


def diff_multiplier(P: IntPoly, t: int, n: int, alpha: RealLike) -> complex:
    """C_hat_t = K_hat_t - K_hat_{2^n}, defined for t in [2^n, 2^(n+1))."""
    if not (1 << n) <= t < (1 << (n + 1)):
        raise ParameterError(f"t={t} outside the dyadic block [2^{n}, 2^{n + 1})")
    prefix = weyl_sum_prefix(P, t, alpha)
    return complex(prefix[t - 1] - prefix[(1 << n) - 1])


@lru_cache(maxsize=65536)
def gauss_weight(P: IntPoly, frac: ReducedFraction, i: int) -> complex:
    """Complete normalized sum S_P^i(a/q) over residues mod q_i.

    For monic quadratic P this reduces to (1/q) sum_r e(-a r^2 / q).
    """
    cd = congruence_data(P, frac, i)
    qi = cd.q_i
    r = np.arange(1, qi + 1, dtype=np.int64)
    acc = np.zeros(qi, dtype=np.int64)
    for a_j in cd.numerators:  # Horner mod q_i, highest power first
        acc = (acc * r + a_j) % qi
    acc = (acc * r) % qi  # phases are a_d r^d + ... + a_1 r, no constant term
    return complex(np.exp(-2j * math.pi * (acc / qi)).sum() / qi)


def quadratic_gauss_row(q: int) -> np.ndarray:
    """S(a/q) = (1/q) sum_r e(-a r^2/q) for every a = 0..q-1, via one DFT.

    The sum depends only on the counts of r^2 mod q, and evaluating the
    count vector at all a at once is exactly a length-q DFT.
    """
    if q < 1:
        raise ParameterError("q must be positive")
    counts = np.bincount((np.arange(1, q + 1, dtype=np.int64) ** 2) % q,
                         minlength=q)
    return np.fft.fft(counts) / q


def _vt_quadrature(cycles: float, d: int, tol: float = 1e-10) -> complex:
    """Panel Gauss-Legendre quadrature of int_0^1 e(-cycles s^d) ds.

    Panels resolve the oscillation (>= 8 per period) and the result is
    accepted once doubling the panel count moves it by less than tol.
    """
    nodes, weights = np.polynomial.legendre.leggauss(12)

    def compute(panels: int) -> complex:
        edges = np.linspace(0.0, 1.0, panels + 1)
        mid = 0.5 * (edges[:-1] + edges[1:])[:, None]
        half = 0.5 * (edges[1] - edges[0])
        s = mid + half * nodes[None, :]
        vals = np.exp(-2j * math.pi * cycles * s ** d)
        return complex((vals * weights[None, :]).sum() * half)

    panels = max(8, int(8 * abs(cycles)) + 8)
    prev = compute(panels)
    for _ in range(4):
        panels *= 2
        cur = compute(panels)
        if abs(cur - prev) <= tol:
            return cur
        prev = cur
    raise NumericError(
        f"oscillatory quadrature failed to converge (cycles={cycles})")


def _vt_closed_form(cycles: float, d: int) -> complex:
    """Closed-form evaluation for strongly oscillatory arguments.

    d = 1 integrates directly, d = 2 goes through Fresnel integrals, and
    general d through the lower incomplete gamma function along the
    imaginary axis.
    """
    if cycles < 0:
        return _vt_closed_form(-cycles, d).conjugate()
    if d == 1:
        # (1 - e(-c)) / (2 pi i c)
        return (1.0 - cmath.exp(-2j * math.pi * cycles)) / (2j * math.pi * cycles)
    if d == 2:
        z = 2.0 * math.sqrt(cycles)
        s, c = fresnel(z)
        return complex(c, -s) / z
    import mpmath as mp
    with mp.workdps(30):
        a = 2 * mp.pi * cycles
        g = mp.gammainc(mp.mpf(1) / d, 0, 1j * a)
        val = g * a ** (-mp.mpf(1) / d) * mp.exp(-1j * mp.pi / (2 * d)) / d
    return complex(val)


def vt(beta: float, t: float, d: int) -> complex:
    """The oscillatory pseudo-projection v_t(beta) = int_0^1 e(-beta t^d s^d) ds.

    Adaptive panel quadrature below a cycle budget; beyond it the exact
    closed form takes over (the two paths agree to 1e-9 where they overlap,
    see the test suite).
    """
    if d < 1:
        raise ParameterError("d must be >= 1")
    cycles = float(beta) * float(t) ** d
    if cycles == 0.0:
        return 1.0 + 0.0j
    if abs(cycles) <= _VT_PERIOD_BUDGET:
        return _vt_quadrature(cycles, d)
    return _vt_closed_form(cycles, d)


def smooth_cutoff_eval(x: float) -> float:
    """Smooth bump: 1 on [-0.1, 0.1], 0 outside [-0.2, 0.2].

    The ramp is the standard C^infinity partition-of-unity profile built
    from exp(-1/u).
    """
    u = (abs(float(x)) - 0.1) / 0.1
    if u <= 0.0:
        return 1.0
    if u >= 1.0:
        return 0.0
    h0 = math.exp(-1.0 / (1.0 - u))
    h1 = math.exp(-1.0 / u)
    return h0 / (h0 + h1)


def approx_multiplier(P: IntPoly, t: float, alpha: RealLike, s_max: int) -> complex:
    """The circle-method approximant L_hat_t(alpha), truncated at level s_max.

    L_hat_t = sum_{s <= s_max} sum_{a/q in R_s} S_P^i(a/q) v_t(x - a/q)
    phi(10^s (x - a/q)) with x = {b_d alpha}; only fractions inside the
    cutoff support (distance <= 0.2 * 10^-s) can contribute.
    """
    if s_max < 0:
        raise ParameterError("s_max must be non-negative")
    a = alpha if isinstance(alpha, Fraction) else Fraction(alpha)
    a -= math.floor(a)
    bd = P.leading
    i = min(int(math.floor(bd * a)), bd - 1)
    x = bd * a
    x -= math.floor(x)
    total = 0.0 + 0.0j
    for s in range(s_max + 1):
        radius = 0.2 * 10.0 ** (-s)
        for fr in fractions_near(s, x, radius):
            diff = x - fr.value
            # signed representative of the torus difference
            if diff > Fraction(1, 2):
                diff -= 1
            elif diff < Fraction(-1, 2):
                diff += 1
            beta = float(diff)
            total += (gauss_weight(P, fr, i)
                      * vt(beta, t, P.degree)
                      * smooth_cutoff_eval(10.0 ** s * beta))
    return complex(total)


def complete_dyadic_gauss(m: int) -> complex:
    """The complete sum sum_{n=1}^{2^m} e(n^2 / 2^m), in closed form.

    m = 0 -> 1; m = 1 -> 0; even m >= 2 -> 2^(m/2) (1+i);
    odd m >= 3 -> 2^((m+1)/2) e(1/8).
    """
    if m < 0:
        raise ParameterError("m must be non-negative")
    if m == 0:
        return 1.0 + 0.0j
    if m == 1:
        return 0.0 + 0.0j
    if m % 2 == 0:
        return 2.0 ** (m // 2) * (1.0 + 1.0j)
    return 2.0 ** ((m + 1) // 2) * cmath.exp(1j * math.pi / 4.0)


def complete_dyadic_gauss_direct(m: int) -> complex:
    """Direct-summation oracle for complete_dyadic_gauss (small m only)."""
    T = 1 << m
    n = np.arange(1, T + 1, dtype=np.int64)
    return complex(np.exp(2j * math.pi * ((n * n) % T) / T).sum())


def _dyadic_tail_sum(tail: int, m: int) -> complex:
    """sum_{n=1}^{tail} e(n^2 / 2^m) with tail < 2^m, vectorized in chunks."""
    total = 0.0 + 0.0j
    mask = (1 << m) - 1
    scale = 2.0 ** (-m)
    chunk = 1 << 20
    for start in range(1, tail + 1, chunk):
        n = np.arange(start, min(start + chunk, tail + 1), dtype=np.int64)
        if 2 * int(n[-1]).bit_length() <= 62:
            sq = (n * n) & mask if m <= 62 else n * n
            total += complex(np.exp(2j * math.pi * (sq * scale)).sum())
        else:  # fall back to exact python ints (never hit under the budget)
            total += sum(cmath.exp(2j * math.pi * (((k * k) & mask) * scale))
                         for k in map(int, n))
    return total


def fast_dyadic_quadratic_weyl(k: int, R: int, N: int,
                               budget: int = DIRECT_SUM_BUDGET) -> complex:
    """(1/N) sum_{n=1}^N e(2^(k-R) n^2), exactly, exploiting periodicity.

    The summand has period 2^(R-k) in n: full periods contribute the
    closed-form complete Gauss sum, and the remaining tail (which must fit
    the direct-summation budget) is summed outright.
    """
    if not 0 <= k <= R:
        raise ParameterError("need 0 <= k <= R")
    if N < 1:
        raise ParameterError("N must be a positive integer")
    m = R - k
    if m == 0:
        return 1.0 + 0.0j
    period = 1 << m
    full, tail = divmod(N, period)
    if tail > budget:
        raise ResourceError(
            f"tail of length {tail} exceeds the direct-summation budget "
            f"{budget}; lower N mod 2^(R-k) or raise the budget")
    total = 0.0 + 0.0j
    if full:
        total += float(Fraction(full * period, N)) * \
            (complete_dyadic_gauss(m) / period)
    if tail:
        total += _dyadic_tail_sum(tail, m) * float(Fraction(tail, N)) / tail
    return complex(total)
