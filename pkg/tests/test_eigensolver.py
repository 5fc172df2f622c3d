import numpy as np
import pytest

from spectral.eigensolver import IndefiniteGramError, gen_eigensolve


def random_pencil(seed, n=8):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    Y = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    A = X + X.conj().T
    G = Y @ Y.conj().T + n * np.eye(n)
    return A, G


class TestOrdering:
    def test_toeplitz_by_modulus(self):
        result = gen_eigensolve(np.diag([1.0, -3.0, 2.0]), np.eye(3))
        assert np.allclose(result.eigenvalues, [-3.0, 2.0, 1.0])
        assert result.to_json()["ordering"] == "descending"

    def test_hamiltonian_ascending(self):
        result = gen_eigensolve(np.diag([1.0, -3.0, 2.0]), np.eye(3), hamiltonian=True)
        assert np.allclose(result.eigenvalues, [-3.0, 1.0, 2.0])
        assert result.to_json()["ordering"] == "ascending"


class TestSolutions:
    def test_pencil_of_gram_with_itself(self):
        _, G = random_pencil(0)
        assert np.allclose(gen_eigensolve(G, G).eigenvalues, 1.0)

    def test_residuals(self):
        A, G = random_pencil(1)
        result = gen_eigensolve(A, G)
        for value, vector in zip(result.eigenvalues, result.eigenvectors.T):
            residual = A @ vector - value * (G @ vector)
            assert np.linalg.norm(residual) < 1e-10 * np.linalg.norm(A)

    def test_congruence_invariance(self):
        A, G = random_pencil(2)
        T = np.diag(np.geomspace(1.0, 1e3, A.shape[0]))
        original = gen_eigensolve(A, G).eigenvalues
        scaled = gen_eigensolve(T @ A @ T, T @ G @ T).eigenvalues
        assert np.allclose(original, scaled, rtol=1e-6)

    def test_metadata_is_kept(self):
        result = gen_eigensolve(np.eye(2), np.eye(2), metadata={"q": 1})
        assert result.metadata == {"q": 1}
        assert result.basis_size == 2


class TestDeflation:
    def test_near_null_direction(self):
        result = gen_eigensolve(np.diag([2.0, 3.0, 5.0]), np.diag([1.0, 1.0, 1e-14]))
        assert result.deflated == 1
        assert np.allclose(result.eigenvalues, [3.0, 2.0])

    def test_indefinite_gram(self):
        with pytest.raises(IndefiniteGramError):
            gen_eigensolve(np.eye(3), np.diag([1.0, 1.0, -0.5]))

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            gen_eigensolve(np.eye(3), np.eye(2))


class TestTrust:
    def test_floor(self):
        result = gen_eigensolve(np.diag([1.0, 1e-15]), np.eye(2))
        assert result.trust_floor == pytest.approx(1e-12)
        assert list(result.trusted) == [True, False]
        assert np.allclose(result.trusted_eigenvalues(), [1.0])
        assert result.to_json()["trusted"] == [True, False]
