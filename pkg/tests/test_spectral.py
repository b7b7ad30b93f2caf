import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from monoplex.errors import BudgetError, InputError
from monoplex.graphon import StepKernel, constant, hom_density, random_step_kernel
from monoplex.graphs import complete, cycle
from monoplex.spectral import (
    Spectrum,
    clt_condition_report,
    hadamard_kernel,
    jacobi_eigenvalues,
    measure_weighted_matrix,
    spectrum,
    weighted_chisq_sample,
)


def symmetric(k, seed):
    a = np.random.default_rng(seed).standard_normal((k, k))
    return a + a.T


class TestJacobi:
    @given(st.integers(1, 12), st.integers(0, 2**32 - 1))
    def test_matches_lapack(self, k, seed):
        a = symmetric(k, seed)
        np.testing.assert_allclose(np.sort(jacobi_eigenvalues(a)), np.linalg.eigvalsh(a), atol=1e-10)

    def test_diagonal_input(self):
        np.testing.assert_array_equal(np.sort(jacobi_eigenvalues(np.diag([3.0, -1.0, 2.0]))), [-1, 2, 3])

    def test_two_by_two(self):
        np.testing.assert_allclose(np.sort(jacobi_eigenvalues([[2.0, 1.0], [1.0, 2.0]])), [1.0, 3.0], atol=1e-15)

    def test_degenerate_eigenvalues(self):
        np.testing.assert_allclose(np.sort(jacobi_eigenvalues(np.ones((5, 5)))), [0, 0, 0, 0, 5], atol=1e-12)

    def test_rejects_non_square(self):
        with pytest.raises(InputError):
            jacobi_eigenvalues(np.zeros((2, 3)))


class TestSpectrum:
    def test_ordering(self):
        s = Spectrum(np.array([0.1, -2.0, 1.0]))
        np.testing.assert_array_equal(s.eigenvalues, [-2.0, 1.0, 0.1])
        assert s.max_abs == 2.0 and len(s) == 3

    def test_constant_kernel(self):
        np.testing.assert_allclose(spectrum(constant(0.3)).eigenvalues, [0.3])

    def test_measure_weighting(self):
        # rank one kernel 1 on a two-block partition: eigenvalue is the total measure
        k = StepKernel([0.2, 0.8], np.ones((2, 2)))
        np.testing.assert_allclose(spectrum(k).eigenvalues, [1.0, 0.0], atol=1e-15)
        np.testing.assert_allclose(measure_weighted_matrix(k), np.sqrt(np.outer([0.2, 0.8], [0.2, 0.8])))

    @given(st.integers(1, 12), st.integers(0, 2**32 - 1))
    def test_power_sums(self, k, seed):
        w = random_step_kernel(k, np.random.default_rng(seed))
        s = spectrum(w)
        assert s.power_sum(2) == pytest.approx(w.l2_norm() ** 2, abs=1e-12)
        assert s.power_sum(3) == pytest.approx(hom_density(complete(3), w), abs=1e-12)
        assert s.power_sum(4) == pytest.approx(hom_density(cycle(4), w), abs=1e-12)

    def test_methods_agree(self, rng):
        w = random_step_kernel(20, rng)
        np.testing.assert_allclose(spectrum(w, "jacobi").eigenvalues, spectrum(w, "lapack").eigenvalues, atol=1e-12)
        with pytest.raises(InputError):
            spectrum(w, "qr")

    def test_budget(self):
        with pytest.raises(BudgetError):
            spectrum(StepKernel.uniform(np.zeros((2001, 2001))))

    @pytest.mark.parametrize("m", [1, 2, 4, 8, 16])
    def test_hadamard(self, m):
        s = spectrum(hadamard_kernel(m))
        np.testing.assert_allclose(np.abs(s.eigenvalues), 1 / math.sqrt(m), atol=1e-12)
        assert s.power_sum(2) == pytest.approx(1.0)

    def test_hadamard_rejects_non_power(self):
        with pytest.raises(InputError):
            hadamard_kernel(6)


class TestWeightedChiSquare:
    def test_moments(self):
        w = np.array([0.5, -0.3, 0.2])
        x = weighted_chisq_sample(w, 2, 400_000, seed=5)
        var = 2 * 2 * np.sum(w**2)
        assert abs(x.mean()) < 4 * math.sqrt(var / x.size)
        assert x.var() == pytest.approx(var, rel=0.02)
        # third cumulant of a (chi2_k - k) is 8 k a^3
        assert np.mean((x - x.mean()) ** 3) == pytest.approx(8 * 2 * np.sum(w**3), rel=0.1)

    def test_deterministic(self):
        a = weighted_chisq_sample([1.0, 0.5], 1, 30_000, seed=3, chunk=7000, workers=1)
        b = weighted_chisq_sample([1.0, 0.5], 1, 30_000, seed=3, chunk=7000, workers=3)
        np.testing.assert_array_equal(a, b)

    def test_empty_weights(self):
        np.testing.assert_array_equal(weighted_chisq_sample([], 1, 5), np.zeros(5))

    def test_validation(self):
        with pytest.raises(InputError):
            weighted_chisq_sample([1.0], 0, 5)
        with pytest.raises(InputError):
            weighted_chisq_sample([np.nan], 1, 5)


def test_condition_report():
    rows = clt_condition_report({10: np.full(10, 1 / math.sqrt(10)), 1: [1.0]})
    assert [r.n for r in rows] == [1, 10]
    assert rows[1].max_abs == pytest.approx(1 / math.sqrt(10))
    assert rows[1].sum_squares == pytest.approx(1.0)
