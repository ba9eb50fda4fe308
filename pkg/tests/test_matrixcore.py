import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from buresgeo.errors import NotHermitian, NotPositive, WrongDimension
from buresgeo.matrixcore import (
    char_poly_coeffs,
    char_poly_deriv_eval,
    char_poly_eval,
    companion_matrix,
    density_matrix,
    elementary_invariants,
    hermitian_basis,
    require_hermitian,
    spectral_decompose,
    tangent_vector,
)
from buresgeo.sampling import haar_unitary

from conftest import rand_state


class TestSpectralDecompose:
    def test_diagonal_input_is_fixed_point(self):
        spec = spectral_decompose(np.diag([0.5, 1 / 3, 1 / 6]))
        np.testing.assert_allclose(spec.eigenvalues, [0.5, 1 / 3, 1 / 6], atol=1e-14)
        np.testing.assert_allclose(spec.eigenvectors, np.eye(3), atol=1e-14)

    def test_scalar_matrix(self):
        spec = spectral_decompose(0.5 * np.eye(2))
        np.testing.assert_allclose(spec.eigenvalues, [0.5, 0.5], atol=1e-15)
        U = spec.eigenvectors
        np.testing.assert_allclose(U @ U.conj().T, np.eye(2), atol=1e-12)

    def test_recovers_known_factors(self):
        # fixed unitary, rotate a known spectrum, ask for it back
        U0 = haar_unitary(2, np.random.default_rng(42))
        rho = (U0 * np.array([0.7, 0.3])) @ U0.conj().T
        spec = spectral_decompose(rho)
        np.testing.assert_allclose(spec.eigenvalues, [0.7, 0.3], atol=1e-12)
        np.testing.assert_allclose(spec.matrix, rho, atol=1e-12)

    def test_descending_order_and_determinism(self):
        rho = rand_state(4, seed=7).matrix
        a = spectral_decompose(rho)
        b = spectral_decompose(rho)
        assert np.all(np.diff(a.eigenvalues) <= 0)
        np.testing.assert_array_equal(a.eigenvalues, b.eigenvalues)
        np.testing.assert_array_equal(a.eigenvectors, b.eigenvectors)

    def test_phase_fixing_leading_component(self):
        spec = spectral_decompose(rand_state(3, seed=3).matrix)
        for k in range(3):
            col = spec.eigenvectors[:, k]
            lead = col[np.argmax(np.abs(col) > 1e-12 * np.abs(col).max())]
            assert lead.real > 0
            assert abs(lead.imag) < 1e-12

    def test_rejects_non_hermitian(self):
        M = np.array([[1.0, 1.0], [0.0, 1.0]])
        with pytest.raises(NotHermitian):
            spectral_decompose(M)

    def test_rejects_non_positive(self):
        with pytest.raises(NotPositive):
            spectral_decompose(np.diag([1.0, -0.1]))
        with pytest.raises(NotPositive):
            spectral_decompose(np.diag([1.0, 0.0]))

    def test_sweep_budget_exhaustion(self):
        from buresgeo.errors import NoConvergence

        rho = rand_state(3, seed=8).matrix
        with pytest.raises(NoConvergence):
            spectral_decompose(rho, max_sweeps=0)

    def test_agrees_with_numpy(self):
        for seed in range(5):
            rho = rand_state(5, seed=seed).matrix
            spec = spectral_decompose(rho)
            np.testing.assert_allclose(
                spec.eigenvalues, np.linalg.eigvalsh(rho)[::-1], atol=1e-11
            )

    @settings(max_examples=30, deadline=None)
    @given(seed=st.integers(0, 10**6), n=st.sampled_from([2, 3, 4, 6]))
    def test_reconstruction_property(self, seed, n):
        rho = rand_state(n, seed=seed).matrix
        spec = spectral_decompose(rho)
        scale = np.max(np.abs(rho))
        assert np.max(np.abs(spec.matrix - rho)) <= 1e-9 * scale
        U = spec.eigenvectors
        assert np.max(np.abs(U @ U.conj().T - np.eye(n))) <= 1e-9


class TestValidation:
    def test_density_matrix_symmetrizes_rounding(self):
        M = np.diag([0.6, 0.4]).astype(complex)
        M[0, 1] = 1e-12
        rho = density_matrix(M, normalized=True)
        np.testing.assert_allclose(rho.matrix, rho.matrix.conj().T)

    def test_density_matrix_trace_check(self):
        from buresgeo.errors import ValidationError

        with pytest.raises(ValidationError):
            density_matrix(np.diag([0.6, 0.6]), normalized=True)

    def test_tangent_vector_traceless_check(self):
        from buresgeo.errors import ValidationError

        tangent_vector(np.diag([1.0, -1.0]), traceless=True)
        with pytest.raises(ValidationError):
            tangent_vector(np.diag([1.0, 1.0]), traceless=True)

    def test_require_hermitian_rejects_rectangular(self):
        with pytest.raises(WrongDimension):
            require_hermitian(np.zeros((2, 3)))


class TestElementaryInvariants:
    def test_equal_eigenvalues(self):
        inv = elementary_invariants(np.array([1 / 3, 1 / 3, 1 / 3]))
        np.testing.assert_allclose(inv.e, [1, 1, 1 / 3, 1 / 27], atol=1e-15)

    def test_hand_expanded_cubic(self):
        inv = elementary_invariants(np.array([0.5, 1 / 3, 1 / 6]))
        np.testing.assert_allclose(inv.e, [1, 1, 11 / 36, 1 / 36], atol=1e-15)

    def test_binomial_quartic(self):
        inv = elementary_invariants(np.array([0.25] * 4))
        np.testing.assert_allclose(inv.e, [1, 1, 3 / 8, 1 / 16, 1 / 256], atol=1e-15)

    @settings(max_examples=30, deadline=None)
    @given(seed=st.integers(0, 10**6), n=st.sampled_from([2, 3, 4, 5]))
    def test_newton_identity_endpoints(self, seed, n):
        lam = np.sort(np.random.default_rng(seed).uniform(0.1, 2.0, size=n))[::-1]
        inv = elementary_invariants(lam)
        assert abs(inv.e[1] - lam.sum()) <= 1e-10 * max(1, lam.sum())
        assert abs(inv.e[n] - np.prod(lam)) <= 1e-10 * max(1, np.prod(lam))

    @settings(max_examples=25, deadline=None)
    @given(seed=st.integers(0, 10**6), n=st.sampled_from([2, 3, 4]))
    def test_char_poly_matches_determinant(self, seed, n):
        rho = rand_state(n, seed=seed).matrix
        spec = spectral_decompose(rho)
        inv = elementary_invariants(spec)
        coeffs = char_poly_coeffs(inv)
        rng = np.random.default_rng(seed + 1)
        for t in rng.uniform(-2.0, 2.0, size=5):
            # chi(t) = det(rho - t I) = (-1)^n det(t I - rho)
            expect = np.linalg.det(rho - t * np.eye(n)).real
            got = float(np.polyval(coeffs, t))
            assert abs(got - expect) <= 1e-8 * max(1.0, abs(expect))


class TestCompanionMatrix:
    def test_n3_layout(self):
        inv = elementary_invariants(np.array([0.5, 1 / 3, 1 / 6]))
        E = companion_matrix(inv)
        e2, e3 = inv.e[2], inv.e[3]
        expect = np.array([[0, 1, 0], [0, 0, 1], [e3, -e2, 1.0]])
        np.testing.assert_allclose(E, expect, atol=1e-15)

    def test_n2_layout(self):
        inv = elementary_invariants(np.array([0.7, 0.3]))
        E = companion_matrix(inv)
        expect = np.array([[0, 1], [-inv.e[2], inv.e[1]]])
        np.testing.assert_allclose(E, expect, atol=1e-15)

    def test_degenerate_pair(self):
        inv = elementary_invariants(np.array([1.0, 1.0]))
        np.testing.assert_allclose(companion_matrix(inv), [[0, 1], [-1, 2]], atol=1e-15)

    def test_needs_degree_two(self):
        with pytest.raises(WrongDimension):
            companion_matrix(elementary_invariants(np.array([1.0])))

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_shares_characteristic_polynomial(self, n):
        rho = rand_state(n, seed=100 + n).matrix
        spec = spectral_decompose(rho)
        E = companion_matrix(elementary_invariants(spec))
        for t in (-1.0, 0.5, 2.0):
            d_rho = np.linalg.det(t * np.eye(n) - rho).real
            d_E = np.linalg.det(t * np.eye(n) - E).real
            assert abs(d_E - d_rho) <= 1e-8 * max(1.0, abs(d_rho))


class TestCharPolyEval:
    def test_half_identity(self):
        inv = elementary_invariants(np.array([0.5, 0.5]))
        rho = 0.5 * np.eye(2)
        np.testing.assert_allclose(char_poly_eval(inv, rho), np.eye(2), atol=1e-14)

    def test_derivative_matches_product_rule(self):
        lam = np.array([0.5, 1 / 3, 1 / 6])
        inv = elementary_invariants(lam)
        rho = np.diag(lam)
        got = char_poly_deriv_eval(inv, rho)
        # chi'(t) = -sum_j prod_{i != j} (lambda_i - t), evaluated at -lambda_k
        expect = np.zeros(3)
        for k in range(3):
            t = -lam[k]
            expect[k] = -sum(
                np.prod([lam[i] - t for i in range(3) if i != j]) for j in range(3)
            )
        np.testing.assert_allclose(np.diag(got).real, expect, atol=1e-12)

    def test_companion_n3_worked_example(self):
        # trace-one invariants e2 = 11/36, e3 = 1/36
        inv = elementary_invariants(np.array([0.5, 1 / 3, 1 / 6]))
        E = companion_matrix(inv)
        e2, e3 = inv.e[2], inv.e[3]
        chi = char_poly_eval(inv, E)
        expect = 2.0 * np.array(
            [[e3, 0, 1], [e3, e3 - e2, 1], [e3, e3 - e2, 1 + e3 - e2]]
        )
        np.testing.assert_allclose(chi, expect, atol=1e-13)
        chi_p = char_poly_deriv_eval(inv, E)
        expect_p = np.array(
            [
                [-e2, -2, -3],
                [-3 * e3, 2 * e2, -5],
                [-5 * e3, 5 * e2 - 3 * e3, 2 * e2 - 5],
            ]
        )
        np.testing.assert_allclose(chi_p, expect_p, atol=1e-13)

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_det_of_chi_is_product_of_sums(self, n):
        spec = spectral_decompose(rand_state(n, seed=200 + n).matrix)
        inv = elementary_invariants(spec)
        det = np.linalg.det(char_poly_eval(inv, spec.matrix)).real
        lam = spec.eigenvalues
        expect = np.prod([lam[i] + lam[j] for i in range(n) for j in range(n)])
        assert expect > 0
        assert abs(det - expect) <= 1e-8 * expect


class TestHermitianBasis:
    @pytest.mark.parametrize("n", [2, 3, 4])
    @pytest.mark.parametrize("traceless", [False, True])
    def test_orthonormal(self, n, traceless):
        basis = hermitian_basis(n, traceless=traceless)
        assert len(basis) == (n * n - 1 if traceless else n * n)
        gram = np.array([[np.trace(A @ B).real for B in basis] for A in basis])
        np.testing.assert_allclose(gram, np.eye(len(basis)), atol=1e-13)
        for B in basis:
            np.testing.assert_allclose(B, B.conj().T, atol=1e-15)
            if traceless:
                assert abs(np.trace(B)) < 1e-14
