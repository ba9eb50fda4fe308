"""Random states and tangent vectors for sweeps and tests.

The sampling scheme is fixed and versioned in CLI reports: eigenvalues are
uniform on the simplex (normalized unit exponentials), the eigenbasis is
Haar-distributed (unitary factor of the QR decomposition of a complex
Gaussian matrix, phases fixed so R has positive diagonal).
"""

from __future__ import annotations

import numpy as np

from .matrixcore import DensityMatrix, SpectralDecomposition, hermitian_part

SCHEME = "eigenvalues: normalized unit exponentials; basis: haar (qr phase-fixed)"


def haar_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary from the QR factorization of a complex Gaussian."""
    G = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    Q, R = np.linalg.qr(G)
    d = np.diag(R)
    return Q * (d / np.abs(d))


def simplex_eigenvalues(n: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform point of the open probability simplex, sorted descending."""
    x = rng.exponential(scale=1.0, size=n)
    lam = x / x.sum()
    return np.sort(lam)[::-1]


def random_spectral(n: int, rng: np.random.Generator) -> SpectralDecomposition:
    """A random trace-one state, returned directly as its decomposition."""
    lam = simplex_eigenvalues(n, rng)
    U = haar_unitary(n, rng)
    return SpectralDecomposition(eigenvalues=lam, eigenvectors=U)


def random_density_matrix(n: int, rng: np.random.Generator, normalized: bool = True) -> DensityMatrix:
    """A random state; unnormalized draws are rescaled by Uniform(0.5, 2)."""
    spec = random_spectral(n, rng)
    M = spec.matrix
    if not normalized:
        M = M * rng.uniform(0.5, 2.0)
    return DensityMatrix(matrix=hermitian_part(M), normalized=normalized)


def random_tangent(n: int, rng: np.random.Generator, traceless: bool = False) -> np.ndarray:
    """Gaussian Hermitian matrix, optionally projected onto traceless."""
    G = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    X = hermitian_part(G)
    if traceless:
        X = X - (np.trace(X).real / n) * np.eye(n)
    return X
