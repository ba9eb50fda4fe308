"""Field operators on matrix space.

Operators acting on n x n matrices are materialized as n^2 x n^2 arrays in
the standard basis E_ij with row-major vectorization (i, j) -> i*n + j.
Elements of the tensor square of matrix space are kept as 4-index arrays
t[i, j, k, l]; the flat index convention is ((i*n + j)*n + k)*n + l, which
is exactly ``t.reshape(n*n, n*n)`` with the first factor on rows.

Provided here: left/right multiplication by the state, the commutator
operator ad V, the Lyapunov-type solve (L+R)^-1 and the companion operator
LR/(L+R) (both diagonal in the eigenbasis of the state), multiplication /
opposite-multiplication maps on the tensor square, comultiplication, and
operator traces.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotPositive, ValidationError
from .matrixcore import EPS_POS, DensityMatrix, SpectralDecomposition, as_spectral


def vec(X: np.ndarray) -> np.ndarray:
    """Row-major vectorization of a matrix."""
    return np.asarray(X, dtype=complex).reshape(-1)


def unvec(v: np.ndarray, n: int) -> np.ndarray:
    return np.asarray(v, dtype=complex).reshape(n, n)


@dataclass(frozen=True)
class SuperOperator:
    """Linear map on matrix space, stored as its n^2 x n^2 action."""

    dim: int
    action: np.ndarray

    def __call__(self, X: np.ndarray) -> np.ndarray:
        return unvec(self.action @ vec(X), self.dim)

    def compose(self, other: "SuperOperator") -> "SuperOperator":
        return SuperOperator(self.dim, self.action @ other.action)


def identity_super(n: int) -> SuperOperator:
    return SuperOperator(n, np.eye(n * n, dtype=complex))


def _matrix_of(rho) -> np.ndarray:
    if isinstance(rho, DensityMatrix):
        return rho.matrix
    if isinstance(rho, SpectralDecomposition):
        return rho.matrix
    return np.asarray(rho, dtype=complex)


def left_mul(rho) -> SuperOperator:
    """Operator X -> rho X."""
    M = _matrix_of(rho)
    n = M.shape[0]
    return SuperOperator(n, np.kron(M, np.eye(n, dtype=complex)))


def right_mul(rho) -> SuperOperator:
    """Operator X -> X rho."""
    M = _matrix_of(rho)
    n = M.shape[0]
    return SuperOperator(n, np.kron(np.eye(n, dtype=complex), M.T))


def ad_op(V) -> SuperOperator:
    """Commutator operator W -> [V, W]."""
    M = np.asarray(V, dtype=complex)
    n = M.shape[0]
    eye = np.eye(n, dtype=complex)
    return SuperOperator(n, np.kron(M, eye) - np.kron(eye, M.T))


def _sum_weights(spec: SpectralDecomposition, eps_pos: float) -> np.ndarray:
    lam = spec.eigenvalues
    P = np.add.outer(lam, lam)
    if float(P.min()) <= 2.0 * eps_pos:
        raise NotPositive(
            f"eigenvalue sum {P.min():.3e} <= 2*{eps_pos:.1e}; state too close to singular"
        )
    return P


def inv_lplusr(spec, Y, eps_pos: float = EPS_POS) -> np.ndarray:
    """Solve rho G + G rho = Y for G.

    Works in the eigenbasis, where the solution is entrywise division by
    lambda_i + lambda_j.  Hermitian Y gives Hermitian G.
    """
    spec = as_spectral(spec)
    P = _sum_weights(spec, eps_pos)
    U = spec.eigenvectors
    Yh = U.conj().T @ np.asarray(Y, dtype=complex) @ U
    return U @ (Yh / P) @ U.conj().T


def lr_over_lplusr(spec, X, eps_pos: float = EPS_POS) -> np.ndarray:
    """Apply the operator LR/(L+R): eigenbasis weights lambda_i lambda_j / (lambda_i + lambda_j)."""
    spec = as_spectral(spec)
    P = _sum_weights(spec, eps_pos)
    lam = spec.eigenvalues
    W = np.multiply.outer(lam, lam) / P
    U = spec.eigenvectors
    Xh = U.conj().T @ np.asarray(X, dtype=complex) @ U
    return U @ (Xh * W) @ U.conj().T


def _diagonal_super(spec: SpectralDecomposition, weights: np.ndarray) -> SuperOperator:
    # conjugation by U x conj(U) carries the eigenbasis-diagonal action back
    U = spec.eigenvectors
    P = np.kron(U, U.conj())
    return SuperOperator(spec.dim, (P * weights.reshape(-1)) @ P.conj().T)


def inv_lplusr_super(spec, eps_pos: float = EPS_POS) -> SuperOperator:
    """Materialized (L+R)^-1."""
    spec = as_spectral(spec)
    P = _sum_weights(spec, eps_pos)
    return _diagonal_super(spec, 1.0 / P)


def lr_over_lplusr_super(spec, eps_pos: float = EPS_POS) -> SuperOperator:
    """Materialized LR/(L+R)."""
    spec = as_spectral(spec)
    P = _sum_weights(spec, eps_pos)
    lam = spec.eigenvalues
    return _diagonal_super(spec, np.multiply.outer(lam, lam) / P)


def tensor_pair(X, Y) -> np.ndarray:
    """The element X tensor Y of the tensor square, as a 4-index array."""
    A = np.asarray(X, dtype=complex)
    B = np.asarray(Y, dtype=complex)
    return np.einsum("ij,kl->ijkl", A, B)


def comultiplication(X) -> np.ndarray:
    """Comultiplication of a matrix: E_ij -> sum_k E_ik tensor E_kj.

    Returns the 4-index tensor t[a, b, c, d] = X[a, d] * delta[b, c].
    """
    A = np.asarray(X, dtype=complex)
    n = A.shape[0]
    return np.einsum("ad,bc->abcd", A, np.eye(n, dtype=complex))


def apply_tensor_factors(S1: SuperOperator, S2: SuperOperator, tensor: np.ndarray) -> np.ndarray:
    """Apply S1 on the first tensor factor and S2 on the second."""
    n = tensor.shape[0]
    view = tensor.reshape(n * n, n * n)
    out = S1.action @ view @ S2.action.T
    return out.reshape(n, n, n, n)


@dataclass(frozen=True)
class ProductMap:
    """Multiplication (XY) or opposite multiplication (YX) on the tensor square."""

    dim: int
    kind: str  # "multiply" or "opposite"

    def __post_init__(self):
        if self.kind not in ("multiply", "opposite"):
            raise ValidationError(f"unknown product map kind {self.kind!r}")

    def __call__(self, tensor: np.ndarray) -> np.ndarray:
        if self.kind == "multiply":
            return np.einsum("ijjl->il", tensor)
        return np.einsum("ijki->kj", tensor)

    @property
    def matrix(self) -> np.ndarray:
        """The n^2 x n^4 matrix of the map in the standard tensor basis."""
        n = self.dim
        eye = np.eye(n)
        if self.kind == "multiply":
            M = np.einsum("ai,jk,bl->abijkl", eye, eye, eye)
        else:
            M = np.einsum("ak,bj,il->abijkl", eye, eye, eye)
        return M.reshape(n * n, n ** 4).astype(complex)


def multiply_map(tensor: np.ndarray) -> np.ndarray:
    """Contract a tensor-square element through matrix multiplication."""
    return np.einsum("ijjl->il", tensor)


def opposite_map(tensor: np.ndarray) -> np.ndarray:
    """Contract a tensor-square element through opposite multiplication."""
    return np.einsum("ijki->kj", tensor)


def superop_trace(S: SuperOperator) -> complex:
    """Trace of an operator on matrix space (sum over the E_ij basis)."""
    return complex(np.trace(S.action))
