"""Lacunary trigonometric polynomials and the 2-variation lower-bound lab.

The averaging frequency is alpha = 2^-R, the test functions are supported
on power-of-two frequencies 2^k with k <= R, and sample points are dyadic
rationals with R + 64 random bits, so every phase 2^k x mod 1 is computed
with exact integer shifts before being rounded once to double precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import ParameterError
from .expsum import DIRECT_SUM_BUDGET, fast_dyadic_quadratic_weyl
from .varnorm import variation_values


@dataclass(frozen=True)
class LacunaryTrigPoly:
    """f(x) = sum over terms of coeff * e(freq * x), frequencies distinct."""

    terms: tuple  # ((freq, coeff), ...) sorted by descending frequency

    def __init__(self, terms):
        items = sorted(((int(k), complex(v)) for k, v in dict(terms).items()),
                       key=lambda kv: -kv[0])
        if any(k < 0 for k, _ in items):
            raise ParameterError("frequencies must be non-negative")
        object.__setattr__(self, "terms", tuple(items))

    @property
    def frequencies(self) -> tuple:
        return tuple(k for k, _ in self.terms)

    @property
    def coefficients(self) -> tuple:
        return tuple(v for _, v in self.terms)

    def l2_norm(self) -> float:
        """Parseval: distinct frequencies are orthonormal in L^2(T)."""
        return math.sqrt(sum(abs(v) ** 2 for _, v in self.terms))

    def eval_dyadic(self, numer: int, bits: int) -> complex:
        """Evaluate at x = numer / 2^bits with exact phase reduction."""
        mask = (1 << bits) - 1
        scale = 2.0 ** (-bits)
        total = 0.0 + 0.0j
        for k, v in self.terms:
            phase = (numer * k) & mask
            total += v * np.exp(2j * math.pi * (phase * scale))
        return total

    def eval_float(self, x: float) -> complex:
        """Plain double-precision evaluation (dense-grid oracle, small freqs)."""
        return complex(sum(v * np.exp(2j * math.pi * ((k * x) % 1.0))
                           for k, v in self.terms))


@dataclass(frozen=True)
class CounterexampleParams:
    """The recursively built exponent ladders k_1 > ... > k_L, j_1 < ... < j_L."""

    L: int
    R: int
    k: tuple
    j: tuple

    def identity_defects(self):
        """(k_{l-1} + j_l - R) for l >= 2 and (k_l + 2 j_l + L - R) for all l."""
        coupling = tuple(self.k[l - 1] + self.j[l] - self.R
                         for l in range(1, self.L))
        closure = tuple(self.k[l] + 2 * self.j[l] + self.L - self.R
                        for l in range(self.L))
        return coupling, closure


def build_sequences(L: int, R: int) -> CounterexampleParams:
    """Top-down recursion k_L = 0, j_l = (R - L - k_l)/2, k_{l-1} = R - j_l.

    Divisions round up so that k_{l-1} + j_l = R stays exact and
    k_l + 2 j_l + L lands in {R, R+1}; when 2^(L+1) divides
    R - (2^(L+1)-1) L everything divides evenly and the closed forms of
    the construction are reproduced exactly.
    """
    if L < 1:
        raise ParameterError("L must be >= 1")
    k = [0] * L
    j = [0] * L
    k[L - 1] = 0
    j[L - 1] = -((L - R) // 2)  # ceil((R - L) / 2)
    for l in range(L - 1, 0, -1):
        k[l - 1] = R - j[l]
        j[l - 1] = -((L + k[l - 1] - R) // 2)  # ceil((R - L - k)/2)
    if any(x < 0 for x in k) or any(x < 1 for x in j):
        raise ParameterError(
            f"R={R} too small for L={L}: sequences leave the admissible range")
    if any(b <= a for a, b in zip(j, j[1:])) or \
            any(b >= a for a, b in zip(k, k[1:])):
        raise ParameterError(
            f"(L={L}, R={R}) yields non-monotone exponent ladders")
    return CounterexampleParams(L, R, tuple(k), tuple(j))


def exact_ladder_radius(L: int, R: int) -> int:
    """Nearest R' >= max(R, minimum) with 2^(L+1) | R' - (2^(L+1)-1) L.

    At such R' the recursion divides evenly and matches the closed forms.
    """
    mod = 1 << (L + 1)
    target = ((mod - 1) * L) % mod
    r = max(R, 1)
    while r % mod != target or not _admissible(L, r):
        r += 1
    return r


def _admissible(L: int, R: int) -> bool:
    try:
        build_sequences(L, R)
        return True
    except ParameterError:
        return False


def average_trigpoly(f: LacunaryTrigPoly, R: int, N: int,
                     budget: int = DIRECT_SUM_BUDGET) -> LacunaryTrigPoly:
    """K_N * f with alpha = 2^-R: each coefficient picks up the Weyl factor.

    Power-of-two frequencies 2^k (k <= R) route through the fast dyadic
    evaluator; any other frequency uses the direct evaluator, which
    requires N itself to fit the summation budget.
    """
    out = {}
    for freq, coeff in f.terms:
        k = freq.bit_length() - 1
        if freq > 0 and freq == 1 << k and k <= R:
            w = fast_dyadic_quadratic_weyl(k, R, N, budget=budget)
        else:
            w = _direct_multiplier(freq, R, N, budget)
        out[freq] = coeff * w
    return LacunaryTrigPoly(out)


def _direct_multiplier(freq: int, R: int, N: int, budget: int) -> complex:
    """(1/N) sum_{n<=N} e(freq * 2^-R * n^2) by exact direct summation."""
    if N > budget:
        raise ParameterError(
            f"direct evaluation of a non-dyadic frequency needs N <= {budget}")
    mask = (1 << R) - 1
    scale = 2.0 ** (-R)
    total = sum(np.exp(2j * math.pi * (((freq * n * n) & mask) * scale))
                for n in range(1, N + 1))
    return complex(total / N)


def partial_sum(f: LacunaryTrigPoly, params: CounterexampleParams,
                m: int) -> LacunaryTrigPoly:
    """S_m f: the terms at frequencies 2^{k_i} with i >= m."""
    if not 1 <= m <= params.L:
        raise ParameterError(f"m={m} out of [1, {params.L}]")
    ladder = [1 << ki for ki in params.k]
    coeffs = dict(f.terms)
    extra = set(coeffs) - set(ladder)
    if extra:
        raise ParameterError(
            f"function carries frequencies outside the ladder: {sorted(extra)}")
    return LacunaryTrigPoly({ladder[i]: coeffs.get(ladder[i], 0.0)
                             for i in range(m - 1, params.L)})


def _ladder_phases(params: CounterexampleParams, sample_count: int,
                   seed: int) -> np.ndarray:
    """(samples, L) phases {2^{k_i} x} at exact dyadic sample points."""
    bits = params.R + 64
    rng = np.random.default_rng(seed)
    mask = (1 << bits) - 1
    scale = 2.0 ** (-bits)
    phases = np.empty((sample_count, params.L), dtype=float)
    for s in range(sample_count):
        numer = int.from_bytes(rng.bytes((bits + 7) // 8), "big") & mask
        for i, ki in enumerate(params.k):
            phases[s, i] = ((numer << ki) & mask) * scale
    return phases


def _ladder_coeffs(f: LacunaryTrigPoly,
                   params: CounterexampleParams) -> np.ndarray:
    coeffs = dict(f.terms)
    extra = set(coeffs) - {1 << ki for ki in params.k}
    if extra:
        raise ParameterError(
            f"function carries frequencies outside the ladder: {sorted(extra)}")
    return np.array([coeffs.get(1 << ki, 0.0) for ki in params.k],
                    dtype=complex)


def eta_error(f: LacunaryTrigPoly, params: CounterexampleParams,
              sample_count: int, seed: int):
    """Monte Carlo sup and RMS of eta(f) = sum_l |S_l f - K_{2^{j_l}} * f|.

    The averaging multipliers W[l, i] are exact; only the spatial supremum
    is estimated by sampling.
    """
    a = _ladder_coeffs(f, params)
    L = params.L
    W = np.array([[fast_dyadic_quadratic_weyl(ki, params.R, 1 << jl)
                   for ki in params.k] for jl in params.j])
    phases = _ladder_phases(params, sample_count, seed)
    z = np.exp(2j * math.pi * phases)          # (samples, L)
    az = z * a[None, :]
    # S_l f(x) = sum_{i >= l} a_i z_i: reversed cumulative sums
    partial = np.cumsum(az[:, ::-1], axis=1)[:, ::-1]
    averaged = az @ W.T                        # (samples, L), column l-1 = K_{2^{j_l}}*f
    eta = np.abs(partial - averaged).sum(axis=1)
    return float(eta.max()), float(np.sqrt(np.mean(eta ** 2)))


def v2_partial_sums_norm(f: LacunaryTrigPoly, params: CounterexampleParams,
                         sample_count: int, seed: int) -> float:
    """Monte Carlo L^2(T) norm of x -> V^2((S_m f(x))_{m=1..L})."""
    a = _ladder_coeffs(f, params)
    phases = _ladder_phases(params, sample_count, seed)
    z = np.exp(2j * math.pi * phases)
    partial = np.cumsum((z * a[None, :])[:, ::-1], axis=1)[:, ::-1]
    v = variation_values(partial, 2.0)
    return float(np.sqrt(np.mean(v ** 2)))


def _independent_phase_matrix(L: int, sample_count: int,
                              seed: int) -> np.ndarray:
    """Per-frequency phase columns, stable in L for fixed seed.

    Column i only depends on (seed, i), so embedding an optimal
    coefficient vector into a longer ladder reuses identical samples and
    the optimizer's objective is exactly monotone in L.
    """
    cols = [np.random.default_rng([seed, i]).random(sample_count)
            for i in range(L)]
    return np.exp(2j * math.pi * np.stack(cols, axis=1))


def _partial_sum_objective(coeffs: np.ndarray, z: np.ndarray) -> float:
    partial = np.cumsum((z * coeffs[None, :])[:, ::-1], axis=1)[:, ::-1]
    v = variation_values(partial, 2.0)
    return float(np.sqrt(np.mean(v ** 2)))


def search_coefficients(L: int, iterations: int, restarts: int, seed: int,
                        sample_count: int = 8192,
                        init: Optional[Sequence[float]] = None):
    """Maximize ||V^2(S_m f)||_2 over unit-norm coefficient vectors.

    Projected random-direction ascent with restarts over non-negative real
    coefficients (the objective is invariant under per-term phase
    rotations since the sampled phases are uniform).  Deterministic given
    the seed; common random numbers are reused across all candidate
    evaluations.
    """
    if L < 2:
        raise ParameterError("L must be >= 2")
    z = _independent_phase_matrix(L, sample_count, seed)
    rng = np.random.default_rng([seed, 999])

    def project(a):
        a = np.abs(np.asarray(a, dtype=float))
        nrm = np.linalg.norm(a)
        if nrm == 0:
            a = np.ones(L)
            nrm = math.sqrt(L)
        return a / nrm

    starts = []
    if init is not None:
        if len(init) > L:
            raise ParameterError("init longer than L")
        padded = np.zeros(L)
        padded[:len(init)] = np.abs(np.asarray(init, dtype=float))
        starts.append(project(padded))
    e1 = np.zeros(L)
    e1[0] = 1.0
    starts.append(e1)
    while len(starts) < max(restarts, 1) + (init is not None) + 1:
        starts.append(project(rng.random(L)))

    best_a, best_val = None, -math.inf
    for start in starts:
        a = start.copy()
        val = _partial_sum_objective(a, z)
        step = 0.3
        for _ in range(max(iterations, 1)):
            cand = project(a + step * rng.standard_normal(L))
            cval = _partial_sum_objective(cand, z)
            if cval > val:
                a, val = cand, cval
            else:
                step *= 0.97
                if step < 1e-4:
                    break
        if val > best_val:
            best_a, best_val = a, val
    return tuple(best_a), best_val
