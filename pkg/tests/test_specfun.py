import math

import numpy as np
import pytest
import scipy.special as sp
from hypothesis import given
from hypothesis import strategies as st

from gelfand_contraction.groups import from_euler_zyz, euler_zyz
from gelfand_contraction.specfun import (
    EvalConfig,
    SeriesConvergenceError,
    SpecialFunctionError,
    bessel_j,
    bessel_j_scaled,
    jacobi_p,
    mehler_heine_error,
    small_d_entries,
    wigner_D_matrix,
    wigner_d,
    wigner_small_d_matrix,
)

Z_GRID = np.arange(1, 11) * 0.5

# scipy oracle values of max_z |P_N^(a,a)(cos(z/N)) / N^a - J_a(z) / (z/2)^a| on Z_GRID
MH_FROZEN = {
    (0.0, 50): 0.01640518874931099,
    (0.0, 100): 0.008195182194871531,
    (0.0, 200): 0.004096058490959786,
    (0.5, 50): 0.02278200478938911,
    (0.5, 100): 0.011446253891123477,
    (0.5, 200): 0.005737146568581673,
}

# d^256_{p,q}(beta) from the factorial sum in 300-digit arithmetic
D256_FROZEN = [
    (0, 0, 0.7, -0.059172055646971887017),
    (3, -2, 1.3, 0.015630471862157403643),
    (100, 40, 0.9, -0.02447400974025373953),
    (-17, 5, 2.5, -0.049933262368580855853),
    (200, 200, 0.2, 0.13979085907489794439),
]


def factorial_small_d(j, p, q, beta):
    """Independent float oracle: the explicit sum over k (accurate for small j)."""
    tot = 0.0
    for k in range(max(0, q - p), min(j + q, j - p) + 1):
        tot += (-1) ** (p - q + k) * math.cos(beta / 2) ** (2 * j + q - p - 2 * k) \
            * math.sin(beta / 2) ** (p - q + 2 * k) / (
                math.factorial(j + q - k) * math.factorial(k)
                * math.factorial(p - q + k) * math.factorial(j - p - k))
    return tot * math.sqrt(math.factorial(j + p) * math.factorial(j - p)
                           * math.factorial(j + q) * math.factorial(j - q))


class TestJacobi:
    def test_examples(self):
        assert jacobi_p(7, 0, 0, 1.0) == pytest.approx(1.0)
        assert jacobi_p(2, 0, 0, 0.0) == pytest.approx(-0.5)
        a, b, x = 0.3, 1.7, 0.2
        assert jacobi_p(1, a, b, x) == pytest.approx((a + 1) + (a + b + 2) * (x - 1) / 2)

    @given(st.integers(0, 50), st.floats(-0.9, 3), st.floats(-0.9, 3), st.floats(-1, 1))
    def test_against_scipy(self, N, a, b, x):
        ref = sp.eval_jacobi(N, a, b, x)
        assert jacobi_p(N, a, b, x) == pytest.approx(ref, rel=1e-10, abs=1e-10)

    @given(st.integers(2, 50), st.floats(-0.9, 3), st.floats(-0.9, 3), st.floats(-1, 1))
    def test_recurrence_residual(self, n, a, b, x):
        c = 2 * n + a + b
        lhs = 2 * n * (n + a + b) * (c - 2) * jacobi_p(n, a, b, x)
        rhs = (c - 1) * (c * (c - 2) * x + a * a - b * b) * jacobi_p(n - 1, a, b, x) \
            - 2 * (n + a - 1) * (n + b - 1) * c * jacobi_p(n - 2, a, b, x)
        scale = max(1.0, abs(lhs), abs(rhs))
        assert abs(lhs - rhs) / scale < 1e-12

    def test_vectorised(self):
        x = np.linspace(-1, 1, 7)
        np.testing.assert_allclose(jacobi_p(4, 0, 0, x), sp.eval_legendre(4, x), atol=1e-14)

    @pytest.mark.parametrize("args", [(-1, 0, 0, 0.1), (2, -1, 0, 0.1), (2, 0, -1.5, 0.1),
                                      (2, 0, 0, 1.5), (1.5, 0, 0, 0.1)])
    def test_domain_errors(self, args):
        with pytest.raises(SpecialFunctionError):
            jacobi_p(*args)


class TestBessel:
    def test_examples(self):
        assert bessel_j(0, 0.0) == 1.0
        for m in (1, 2, 5):
            assert bessel_j(m, 0.0) == 0.0

    def test_first_zero_by_bisection(self):
        lo, hi = 2.0, 3.0
        for _ in range(80):
            mid = (lo + hi) / 2
            if bessel_j(0, lo) * bessel_j(0, mid) <= 0:
                hi = mid
            else:
                lo = mid
        assert abs(lo - 2.404825557695773) < 1e-10
        assert abs(bessel_j(0, 2.404825557695773)) < 1e-10

    @given(st.sampled_from([0, 0.5, 1, 1.5, 2, 3, 4.5, 8]), st.floats(0, 10))
    def test_against_scipy(self, order, z):
        assert bessel_j(order, z) == pytest.approx(sp.jv(order, z), abs=1e-12)

    def test_envelope_at_20(self):
        z = np.linspace(10, 20, 21)
        err = np.max(np.abs(bessel_j(0, z) - sp.j0(z)))
        assert err < 1e-7

    def test_half_integer_closed_form(self):
        z = np.linspace(0.1, 10, 50)
        np.testing.assert_allclose(bessel_j(0.5, z), np.sqrt(2 / (np.pi * z)) * np.sin(z), atol=1e-12)

    def test_scaled_continuity(self):
        assert bessel_j_scaled(1.5, 0.0) == pytest.approx(1 / math.gamma(2.5))

    def test_nonconvergence(self):
        with pytest.raises(SeriesConvergenceError):
            bessel_j(0, 400.0, EvalConfig(max_terms=50))

    def test_config_validation(self):
        with pytest.raises(ValueError):
            EvalConfig(series_tol=0)
        with pytest.raises(ValueError):
            EvalConfig(max_terms=10)

    @pytest.mark.parametrize("m", range(9))
    def test_jacobi_anger(self, m):
        phi = 2 * np.pi * np.arange(512) / 512
        for z in (0.3, 2.0, 5.5, 10.0):
            lhs = np.mean(np.exp(1j * z * np.cos(phi)) * np.exp(-1j * m * phi))
            assert abs(lhs - 1j ** m * bessel_j(m, z)) < 1e-10


class TestMehlerHeine:
    @pytest.mark.parametrize("key", sorted(MH_FROZEN))
    def test_frozen_oracle(self, key):
        a, N = key
        assert mehler_heine_error(N, a, a, Z_GRID) == pytest.approx(MH_FROZEN[key], abs=1e-12)

    def test_decreasing(self):
        e = [mehler_heine_error(N, 0, 0, Z_GRID) for N in (50, 100, 200)]
        assert e[0] > e[1] > e[2] and e[2] < 0.01

    def test_zero_endpoint(self):
        assert mehler_heine_error(10, 0, 0, [0.0]) == 0.0
        assert mehler_heine_error(100, 0, 0, [1e-6]) < 1e-6
        # unnormalised Jacobi side at z = 0 is binom(N + a, N) / N^a, off by O(1/N)
        N, a = 100, 0.5
        gap = abs(sp.binom(N + a, N) / N ** a - 1 / math.gamma(a + 1))
        assert mehler_heine_error(N, a, a, [0.0]) == pytest.approx(gap, rel=1e-10)

    def test_errors(self):
        with pytest.raises(SpecialFunctionError):
            mehler_heine_error(10, 0, 0, [])
        with pytest.raises(SpecialFunctionError):
            mehler_heine_error(0, 0, 0, [1.0])


class TestWigner:
    def test_j1_entries(self):
        b = 0.83
        assert wigner_d(1, 0, 0, 0, b, 0) == pytest.approx(math.cos(b))
        assert wigner_d(1, 1, 0, 0, b, 0) == pytest.approx(-math.sin(b) / math.sqrt(2))
        assert wigner_d(1, 1, 1, 0, b, 0) == pytest.approx((1 + math.cos(b)) / 2)

    def test_phase_convention(self):
        a, b, g = 0.4, 1.1, -0.7
        assert wigner_d(2, 1, -2, a, b, g) == pytest.approx(
            np.exp(-1j * a) * factorial_small_d(2, 1, -2, b) * np.exp(2j * g))

    def test_identity(self):
        for j in range(5):
            np.testing.assert_allclose(wigner_D_matrix(j, 0, 0, 0), np.eye(2 * j + 1), atol=1e-15)

    def test_row_orthonormal(self):
        d = wigner_small_d_matrix(2, 0.7)
        np.testing.assert_allclose(np.sum(d ** 2, axis=1), 1, atol=1e-12)

    @pytest.mark.parametrize("j", range(0, 13))
    def test_against_factorial_sum(self, j):
        for beta in (0.0, 0.3, 1.7, np.pi, 3.0):
            d = wigner_small_d_matrix(j, beta)
            ref = np.array([[factorial_small_d(j, p, q, beta) for q in range(-j, j + 1)]
                            for p in range(-j, j + 1)])
            np.testing.assert_allclose(d, ref, atol=1e-12)

    @pytest.mark.parametrize("p,q,beta,ref", D256_FROZEN)
    def test_high_degree_frozen(self, p, q, beta, ref):
        assert float(small_d_entries(256, p, q, beta)) == pytest.approx(ref, rel=1e-9)

    def test_high_degree_orthogonal(self):
        d = wigner_small_d_matrix(256, 1.234)
        assert np.max(np.abs(d @ d.T - np.eye(513))) < 1e-9

    def test_unitarity_random(self):
        rng = np.random.default_rng(1)
        for j in range(5):
            for _ in range(100):
                D = wigner_D_matrix(j, *rng.uniform(0, 2 * np.pi, 3))
                assert np.max(np.abs(D @ D.conj().T - np.eye(2 * j + 1))) < 1e-12

    def test_composition(self):
        rng = np.random.default_rng(2)
        for j in range(4):
            for _ in range(20):
                e1, e2 = rng.uniform(0, 2 * np.pi, 3), rng.uniform(0, 2 * np.pi, 3)
                e1[1] /= 2
                e2[1] /= 2
                e12 = euler_zyz(from_euler_zyz(*e1) @ from_euler_zyz(*e2))
                lhs = wigner_D_matrix(j, *e1) @ wigner_D_matrix(j, *e2)
                assert np.max(np.abs(lhs - wigner_D_matrix(j, *e12))) < 1e-10

    def test_character_of_z_rotation(self):
        th = 0.9
        assert np.trace(wigner_D_matrix(1, th, 0, 0)) == pytest.approx(1 + 2 * math.cos(th))

    def test_vector_shape(self):
        out = small_d_entries(3, np.array([[0, 1]]), np.array([[1, -1]]), np.linspace(0, 1, 4))
        assert out.shape == (1, 2, 4)

    def test_index_errors(self):
        with pytest.raises(SpecialFunctionError):
            wigner_d(1, 2, 0, 0, 0, 0)
        with pytest.raises(SpecialFunctionError):
            wigner_d(-1, 0, 0, 0, 0, 0)
