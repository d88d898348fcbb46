"""Exact variation functionals of finite indexed families of complex values.

The r-variation is the supremum over increasing index subsequences of the
l^r norm of consecutive differences.  For a finite family the supremum is
attained, and the forward dynamic program below (best[j] = best chain
ending at j) explores every candidate, so the result is exact up to
floating-point rounding of |.|^r.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import ParameterError


@dataclass(frozen=True)
class IndexedSeq:
    """Complex values attached to strictly increasing positive indices."""

    indices: tuple
    values: tuple

    def __init__(self, indices: Sequence[int], values: Sequence[complex]):
        idx = tuple(int(i) for i in indices)
        vals = tuple(complex(v) for v in values)
        if len(idx) != len(vals):
            raise ParameterError("indices and values must have equal length")
        if any(b <= a for a, b in zip(idx, idx[1:])):
            raise ParameterError("indices must be strictly increasing")
        if any(i <= 0 for i in idx):
            raise ParameterError("indices must be positive")
        object.__setattr__(self, "indices", idx)
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_values(cls, values: Sequence[complex]) -> "IndexedSeq":
        return cls(range(1, len(tuple(values)) + 1), values)

    def __len__(self) -> int:
        return len(self.indices)


@dataclass(frozen=True)
class VariationResult:
    value: float
    optimal_subsequence: tuple
    r: float
    block_subsequences: Optional[tuple] = None

    def __float__(self) -> float:
        return self.value


def _check_r(r: float) -> float:
    r = float(r)
    if r < 1:
        raise ParameterError("variation exponent r must be >= 1")
    return r


def _power_sum_dp(values: Sequence[complex], r: float):
    """Max over increasing chains of sum |f_j - f_i|^r, with backpointers.

    Returns (best power sum, chain of positions).  A singleton chain has
    power sum 0.
    """
    n = len(values)
    best = [0.0] * n
    back = [-1] * n
    for j in range(1, n):
        for i in range(j):
            cand = best[i] + abs(values[j] - values[i]) ** r
            if cand > best[j]:
                best[j] = cand
                back[j] = i
    j_opt = max(range(n), key=lambda j: best[j])
    chain = []
    j = j_opt
    while j >= 0:
        chain.append(j)
        j = back[j]
    chain.reverse()
    return best[j_opt], chain


def variation(seq: IndexedSeq, r: float) -> VariationResult:
    """The r-variation of the family, with an optimizing subsequence."""
    r = _check_r(r)
    if len(seq) == 0:
        raise ParameterError("sequence must be non-empty")
    power, chain = _power_sum_dp(seq.values, r)
    value = power ** (1.0 / r)
    return VariationResult(value, tuple(seq.indices[j] for j in chain), r)


def long_variation(seq: IndexedSeq, r: float) -> VariationResult:
    """Variation restricted to indices that are exact powers of two."""
    r = _check_r(r)
    keep = [j for j, i in enumerate(seq.indices) if i & (i - 1) == 0]
    if not keep:
        return VariationResult(0.0, (), r)
    sub = IndexedSeq([seq.indices[j] for j in keep],
                     [seq.values[j] for j in keep])
    return variation(sub, r)


def _dyadic_blocks(indices):
    """Closed dyadic blocks [2^n, 2^(n+1)] meeting the index set.

    Endpoint indices belong to two blocks, matching the defining display
    2^n <= i_k <= 2^(n+1).
    """
    lo = indices[0].bit_length() - 1
    hi = indices[-1].bit_length() - 1
    for n in range(max(lo - 1, 0), hi + 1):
        members = [j for j, i in enumerate(indices)
                   if (1 << n) <= i <= (1 << (n + 1))]
        if members:
            yield n, members


def short_variation(seq: IndexedSeq, r: float) -> VariationResult:
    """Blockwise short variation: per-block max power sums, then the 1/r root."""
    r = _check_r(r)
    if len(seq) == 0:
        raise ParameterError("sequence must be non-empty")
    total = 0.0
    blocks = []
    flat = []
    for _, members in _dyadic_blocks(seq.indices):
        if len(members) < 2:
            continue
        power, chain = _power_sum_dp([seq.values[j] for j in members], r)
        if power > 0:
            total += power
            picked = tuple(seq.indices[members[j]] for j in chain)
            blocks.append(picked)
            flat.extend(picked)
    return VariationResult(total ** (1.0 / r), tuple(flat), r,
                           block_subsequences=tuple(blocks))


def sup_variation(seq: IndexedSeq) -> float:
    """V^infinity: the largest pairwise gap |f_i - f_j|."""
    if len(seq) == 0:
        raise ParameterError("sequence must be non-empty")
    vals = np.asarray(seq.values, dtype=complex)
    return float(max(
        (abs(vals[j] - vals[i]) for i in range(len(vals))
         for j in range(i + 1, len(vals))), default=0.0))


def variation_values(values: np.ndarray, r: float) -> np.ndarray:
    """Vectorized r-variation along the last axis (values only, no optimizer).

    `values` has shape (..., S); the DP runs once per trailing slot with
    numpy operations over the leading axes.
    """
    r = _check_r(r)
    v = np.asarray(values)
    S = v.shape[-1]
    best = np.zeros(v.shape, dtype=float)
    for j in range(1, S):
        cand = best[..., :j] + np.abs(v[..., j:j + 1] - v[..., :j]) ** r
        best[..., j] = np.maximum(cand.max(axis=-1), 0.0)
    return best.max(axis=-1) ** (1.0 / r)
