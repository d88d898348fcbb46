"""Lacunary polynomials, the exponent-ladder construction, and the optimizer."""

import cmath
import math

import numpy as np
import pytest

from circlelab import (LacunaryTrigPoly, ParameterError, average_trigpoly,
                       build_sequences, eta_error, exact_ladder_radius,
                       fast_dyadic_quadratic_weyl, partial_sum,
                       search_coefficients, v2_partial_sums_norm)
from circlelab.torus import _independent_phase_matrix, _partial_sum_objective


class TestTrigPoly:
    def test_l2_norm_parseval(self):
        f = LacunaryTrigPoly({1: 3.0, 4: 4.0})
        assert f.l2_norm() == pytest.approx(5.0, abs=1e-12)

    def test_eval_dyadic_matches_float(self):
        f = LacunaryTrigPoly({1: 1.0, 8: 0.5j, 64: -2.0})
        for numer in [0, 1, 12345, (1 << 20) - 1]:
            x = numer / 2.0 ** 20
            assert f.eval_dyadic(numer, 20) == \
                pytest.approx(f.eval_float(x), abs=1e-9)

    def test_negative_frequency_rejected(self):
        with pytest.raises(ParameterError):
            LacunaryTrigPoly({-2: 1.0})

    def test_terms_sorted_descending(self):
        f = LacunaryTrigPoly({4: 1.0, 64: 2.0, 1: 3.0})
        assert f.frequencies == (64, 4, 1)


class TestBuildSequences:
    def test_reference_example(self):
        params = build_sequences(2, 14)
        assert params.k == (8, 0)
        assert params.j == (2, 6)
        coupling, closure = params.identity_defects()
        assert coupling == (0,)
        assert all(c in (0, 1) for c in closure)

    def test_identities_hold_everywhere(self):
        for L in range(1, 9):
            for R in range(1, 4097):
                try:
                    params = build_sequences(L, R)
                except ParameterError:
                    continue
                coupling, closure = params.identity_defects()
                assert all(c == 0 for c in coupling), (L, R)
                assert all(c in (0, 1) for c in closure), (L, R)
                assert params.k[-1] == 0
                assert all(a > b for a, b in zip(params.k, params.k[1:]))
                assert all(a < b for a, b in zip(params.j, params.j[1:]))

    def test_small_R_rejected(self):
        with pytest.raises(ParameterError):
            build_sequences(3, 5)

    def test_exact_ladder_radius_divides_evenly(self):
        for L in [2, 3, 4]:
            R = exact_ladder_radius(L, 30)
            assert (R - ((1 << (L + 1)) - 1) * L) % (1 << (L + 1)) == 0
            params = build_sequences(L, R)
            _, closure = params.identity_defects()
            assert all(c == 0 for c in closure)


class TestAverageTrigPoly:
    def test_matches_direct_summation(self):
        R, N = 10, 32
        f = LacunaryTrigPoly({16: 1.5, 1024: -0.5j})
        out = average_trigpoly(f, R, N)
        for freq, coeff in f.terms:
            w = sum(cmath.exp(2j * math.pi * ((freq * n * n) % (1 << R))
                              / (1 << R)) for n in range(1, N + 1)) / N
            expect = dict(f.terms)[freq] * w
            assert dict(out.terms)[freq] == pytest.approx(expect, abs=1e-12)

    def test_consistent_with_pointwise_average(self):
        # K_N f(x) = (1/N) sum_n f(x + n^2 2^-R) on a dense grid
        R, N, G = 8, 12, 1 << 10
        f = LacunaryTrigPoly({4: 1.0, 32: 2.0j, 7: -1.0})
        out = average_trigpoly(f, R, N)
        xs = np.arange(G) / G
        lhs = np.array([out.eval_float(x) for x in xs])
        rhs = np.zeros(G, dtype=complex)
        for n in range(1, N + 1):
            shift = (n * n) / 2.0 ** R
            rhs += np.array([f.eval_float(x + shift) for x in xs])
        assert np.allclose(lhs, rhs / N, atol=1e-9)


class TestPartialSum:
    def test_selects_tail_frequencies(self):
        params = build_sequences(2, 14)
        f = LacunaryTrigPoly({1 << 8: 0.6, 1 << 0: 0.8})
        s1 = partial_sum(f, params, 1)
        s2 = partial_sum(f, params, 2)
        assert set(s1.frequencies) == {256, 1}
        assert set(s2.frequencies) == {1}

    def test_out_of_range_m(self):
        params = build_sequences(2, 14)
        f = LacunaryTrigPoly({1 << 8: 1.0})
        with pytest.raises(ParameterError):
            partial_sum(f, params, 3)

    def test_foreign_frequency_rejected(self):
        params = build_sequences(2, 14)
        with pytest.raises(ParameterError):
            partial_sum(LacunaryTrigPoly({3: 1.0}), params, 1)


class TestEtaError:
    def test_zero_function(self):
        params = build_sequences(2, 14)
        f = LacunaryTrigPoly({1 << 8: 0.0, 1 << 0: 0.0})
        sup, rms = eta_error(f, params, 64, 0)
        assert sup == 0.0 and rms == 0.0

    def test_matches_dense_grid_oracle(self):
        params = build_sequences(2, 14)
        a = (0.8, 0.6)
        f = LacunaryTrigPoly({1 << k: c for k, c in zip(params.k, a)})
        G = 1 << 16
        xs = np.arange(G) / G
        z = np.exp(2j * np.pi * np.outer(xs, [1 << k for k in params.k]))
        az = z * np.array(a)[None, :]
        partial = np.cumsum(az[:, ::-1], axis=1)[:, ::-1]
        W = np.array([[fast_dyadic_quadratic_weyl(ki, params.R, 1 << jl)
                       for ki in params.k] for jl in params.j])
        eta_grid = np.abs(partial - az @ W.T).sum(axis=1)
        sup_oracle = float(eta_grid.max())
        rms_oracle = float(np.sqrt(np.mean(eta_grid ** 2)))
        sup, rms = eta_error(f, params, 1 << 14, 0)
        assert sup == pytest.approx(sup_oracle, rel=0.05)
        assert rms == pytest.approx(rms_oracle, rel=0.05)

    def test_two_seeds_agree(self):
        params = build_sequences(2, 14)
        f = LacunaryTrigPoly({1 << 8: 0.6, 1 << 0: 0.8})
        _, rms1 = eta_error(f, params, 4096, 1)
        _, rms2 = eta_error(f, params, 4096, 2)
        assert rms1 == pytest.approx(rms2, rel=0.1)


class TestV2PartialSums:
    def test_two_rung_analytic_value(self):
        # With L = 2 the variation of (S_1, S_2) is |S_1 - S_2| = |a_1|
        params = build_sequences(2, 14)
        a1, a2 = 0.8, 0.6
        f = LacunaryTrigPoly({1 << 8: a1, 1 << 0: a2})
        val = v2_partial_sums_norm(f, params, 4096, 0)
        assert val == pytest.approx(a1, abs=1e-10)

    def test_scales_linearly(self):
        params = build_sequences(2, 14)
        f1 = LacunaryTrigPoly({1 << 8: 0.5, 1 << 0: 0.5})
        f2 = LacunaryTrigPoly({1 << 8: 1.5, 1 << 0: 1.5})
        v1 = v2_partial_sums_norm(f1, params, 2048, 3)
        v2 = v2_partial_sums_norm(f2, params, 2048, 3)
        assert v2 == pytest.approx(3 * v1, rel=1e-10)


class TestSearch:
    def test_L2_optimum_is_one(self):
        _, val = search_coefficients(2, iterations=150, restarts=2, seed=0)
        assert val == pytest.approx(1.0, abs=0.01)

    def test_L3_matches_grid_oracle(self):
        z = _independent_phase_matrix(3, 4096, 0)
        best = 0.0
        grid = np.linspace(0, 1, 21)
        for a1 in grid:
            for a2 in grid:
                for a3 in grid:
                    v = np.array([a1, a2, a3])
                    n = np.linalg.norm(v)
                    if n == 0:
                        continue
                    best = max(best, _partial_sum_objective(v / n, z))
        _, val = search_coefficients(3, iterations=400, restarts=3, seed=0,
                                     sample_count=4096)
        assert val >= best - 0.02
        assert val <= best + 0.05

    def test_monotone_in_L_with_warm_start(self):
        prev_coeffs, prev_val = search_coefficients(2, 150, 2, 0)
        for L in [3, 4, 5]:
            coeffs, val = search_coefficients(L, 150, 2, 0, init=prev_coeffs)
            assert val >= prev_val - 1e-12
            prev_coeffs, prev_val = coeffs, val

    def test_deterministic(self):
        a = search_coefficients(2, 50, 1, 7)
        b = search_coefficients(2, 50, 1, 7)
        assert a == b

    def test_L_validation(self):
        with pytest.raises(ParameterError):
            search_coefficients(1, 10, 1, 0)
