"""Cyclic-group diagonalization, arc projections, and variation experiments."""

import math
from fractions import Fraction

import numpy as np
import pytest

from circlelab import (Annulus, ArcParams, CyclicSignal, FrequencyMultiplier,
                       IntPoly, MAJOR, MINOR, ParameterError,
                       arc_projection_multiplier, average_multiplier,
                       classify_arc, dft, idft, polynomial_average,
                       polynomial_average_direct, variation_experiment,
                       weyl_sum)

SQUARES = IntPoly([0, 0, 1])


def random_signal(M, seed):
    rng = np.random.default_rng(seed)
    return CyclicSignal(M, rng.standard_normal(M) + 1j * rng.standard_normal(M))


class TestDFT:
    def test_delta_transforms_flat(self):
        f = CyclicSignal(8, [1] + [0] * 7)
        fhat = dft(f)
        assert np.allclose(fhat.values, np.full(8, 1 / math.sqrt(8)))

    def test_unitary(self):
        f = random_signal(33, 0)
        assert dft(f).norm() == pytest.approx(f.norm(), abs=1e-10)

    def test_roundtrip(self):
        f = random_signal(12, 1)
        assert np.allclose(idft(dft(f)).values, f.values, atol=1e-12)


class TestAverageMultiplier:
    def test_small_example(self):
        # M=4, P=n^2, N=2: hits at 1 and 0 -> multiplier j -> (e(j/4)+1)/2
        mult = average_multiplier(SQUARES, 2, 4)
        expect = [(np.exp(2j * np.pi * j / 4) + 1) / 2 for j in range(4)]
        assert np.allclose(mult, expect, atol=1e-12)

    def test_equals_conjugated_weyl_sum(self):
        M, N = 12, 9
        mult = average_multiplier(SQUARES, N, M)
        for j in range(M):
            expect = np.conj(weyl_sum(SQUARES, N, Fraction(j, M)))
            assert mult[j] == pytest.approx(expect, abs=1e-12)

    def test_dc_component_is_one(self):
        for P in [SQUARES, IntPoly([3, 1, 0, 2])]:
            assert average_multiplier(P, 7, 16)[0] == \
                pytest.approx(1.0, abs=1e-12)

    def test_cache_returns_readonly(self):
        mult = average_multiplier(SQUARES, 3, 8)
        with pytest.raises(ValueError):
            mult[0] = 5


class TestPolynomialAverage:
    @pytest.mark.parametrize("P,M,N", [
        (SQUARES, 16, 4), (SQUARES, 31, 10),
        (IntPoly([1, 2, 0, 1]), 24, 7)])
    def test_diagonalization_matches_direct(self, P, M, N):
        f = random_signal(M, 42)
        fast = polynomial_average(f, P, N)
        direct = polynomial_average_direct(f, P, N)
        assert np.allclose(fast.values, direct.values, atol=1e-12)

    def test_constant_fixed_point(self):
        f = CyclicSignal(9, np.full(9, 2.5 + 1j))
        out = polynomial_average(f, SQUARES, 6)
        assert np.allclose(out.values, f.values, atol=1e-12)

    def test_contractive_in_l2(self):
        f = random_signal(64, 3)
        out = polynomial_average(f, SQUARES, 17)
        assert out.norm() <= f.norm() + 1e-10

    def test_shift_equivariance(self):
        f = random_signal(20, 4)
        shifted = CyclicSignal(20, np.roll(f.values, 3))
        a = polynomial_average(shifted, SQUARES, 5).values
        b = np.roll(polynomial_average(f, SQUARES, 5).values, 3)
        assert np.allclose(a, b, atol=1e-12)


class TestMultipliers:
    def test_modulus_mismatch(self):
        from circlelab.spectral import apply_multiplier
        with pytest.raises(ParameterError):
            apply_multiplier(random_signal(8, 0),
                             FrequencyMultiplier(16, np.ones(16)))

    def test_identity_multiplier(self):
        from circlelab.spectral import apply_multiplier
        f = random_signal(10, 5)
        out = apply_multiplier(f, FrequencyMultiplier(10, np.ones(10)))
        assert np.allclose(out.values, f.values, atol=1e-12)


class TestArcProjections:
    PARAMS = ArcParams(10, 0.05, 2)

    def test_major_minor_partition(self):
        M = 512
        maj = arc_projection_multiplier(SQUARES, self.PARAMS, MAJOR, M)
        mino = arc_projection_multiplier(SQUARES, self.PARAMS, MINOR, M)
        assert np.allclose(maj.samples + mino.samples, np.ones(M), atol=0)

    def test_zero_frequency_is_major(self):
        maj = arc_projection_multiplier(SQUARES, self.PARAMS, MAJOR, 512)
        assert maj.samples[0] == 1.0

    def test_annuli_refine_major(self):
        M = 512
        maj = arc_projection_multiplier(SQUARES, self.PARAMS, MAJOR, M).samples
        total = np.zeros(M, dtype=complex)
        ks = set()
        for j in range(M):
            lab = classify_arc(Fraction(j, M), SQUARES, self.PARAMS)
            if lab.is_major:
                from circlelab.arith import annulus_label
                ks.add(annulus_label(Fraction(j, M), SQUARES, self.PARAMS,
                                     lab))
        for k in ks:
            total += arc_projection_multiplier(
                SQUARES, self.PARAMS, Annulus(0, k), M).samples
        assert np.allclose(total, maj, atol=0)

    def test_idempotent(self):
        from circlelab.spectral import apply_multiplier
        f = random_signal(256, 6)
        m = arc_projection_multiplier(SQUARES, self.PARAMS, MINOR, 256)
        once = apply_multiplier(f, m)
        twice = apply_multiplier(once, m)
        assert np.allclose(once.values, twice.values, atol=1e-12)

    def test_unknown_selector(self):
        with pytest.raises(ParameterError):
            arc_projection_multiplier(SQUARES, self.PARAMS, "everything", 64)


class TestVariationExperiment:
    def test_constant_signal_zero_variation(self):
        f = CyclicSignal(16, np.ones(16))
        val = variation_experiment(f, SQUARES, [1, 2, 4, 8], 2)
        assert val == pytest.approx(0.0, abs=1e-10)

    def test_eigenvector_reduces_to_scalar_variation(self):
        # f = pure frequency j: K_N f = mult_N[j] f, so the experiment equals
        # the scalar variation of the multiplier values
        from circlelab import IndexedSeq, variation
        M, j = 32, 5
        f = CyclicSignal(M, np.exp(2j * np.pi * j * np.arange(M) / M))
        scales = [1, 3, 9, 27]
        mults = [average_multiplier(SQUARES, N, M)[j] for N in scales]
        expect = variation(IndexedSeq.from_values(mults), 2).value
        val = variation_experiment(f, SQUARES, scales, 2)
        assert val == pytest.approx(expect, abs=1e-10)

    def test_phase_invariance(self):
        f = random_signal(64, 7)
        g = CyclicSignal(64, f.values * np.exp(0.7j))
        scales = [1, 2, 4, 8, 16]
        assert variation_experiment(f, SQUARES, scales, 2) == \
            pytest.approx(variation_experiment(g, SQUARES, scales, 2),
                          abs=1e-10)

    def test_scales_validated(self):
        f = random_signal(8, 8)
        with pytest.raises(ParameterError):
            variation_experiment(f, SQUARES, [4, 2], 2)
        with pytest.raises(ParameterError):
            variation_experiment(f, SQUARES, [], 2)
