"""Complex Hermitian matrix algebra underpinning the geometry.

Spectral decomposition (a cyclic Jacobi eigensolver with complex rotations),
elementary symmetric invariants of the spectrum, the companion matrix built
from those invariants, and characteristic-polynomial evaluation at matrix
arguments.  All curvature formulas downstream run through the decomposition
produced here, so this module owns the tolerances for Hermiticity,
positivity and reconstruction quality.

Conventions:
  * eigenvalues are sorted descending; eigenvector phases are fixed so the
    first non-negligible component of each column is real positive,
  * the characteristic polynomial is chi(t) = prod_i (lambda_i - t), i.e.
    chi(t) = sum_i e_{n-i} (-t)^i with e_i the elementary symmetric
    polynomials of the eigenvalues and e_0 = 1.  With this convention
    chi(-t) = prod_i (lambda_i + t) is positive for t >= 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import (
    NoConvergence,
    NotHermitian,
    NotPositive,
    ValidationError,
    WrongDimension,
)

HERMITICITY_TOL = 1e-10
TRACE_ONE_TOL = 1e-10
EPS_POS = 1e-10
JACOBI_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100
RECONSTRUCTION_TOL = 1e-9


def _as_square_array(M, name: str = "matrix") -> np.ndarray:
    A = np.asarray(M, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise WrongDimension(f"{name} must be square, got shape {A.shape}")
    return A


def hermitian_part(M) -> np.ndarray:
    """Return (M + M^dagger) / 2."""
    A = _as_square_array(M)
    return 0.5 * (A + A.conj().T)


def require_hermitian(M, tol: float = HERMITICITY_TOL, name: str = "matrix") -> np.ndarray:
    """Symmetrize M if its Hermiticity residual is within tol, else reject.

    The residual is max|M - M^dagger| measured against max(1, max|M|), so
    order-one matrices are held to the absolute tolerance.
    """
    A = _as_square_array(M, name)
    scale = max(1.0, float(np.max(np.abs(A))) if A.size else 1.0)
    residual = float(np.max(np.abs(A - A.conj().T)))
    if residual > tol * scale:
        raise NotHermitian(
            f"{name} has Hermiticity residual {residual:.3e} > {tol:.1e} * {scale:.3g}"
        )
    return hermitian_part(A)


@dataclass(frozen=True)
class DensityMatrix:
    """A strictly positive Hermitian matrix, optionally trace-normalized.

    ``normalized=True`` marks a point of the trace-one manifold; tangent
    vectors there are traceless.
    """

    matrix: np.ndarray
    normalized: bool = False

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class TangentVector:
    """A Hermitian matrix, traceless when tangent to the trace-one manifold."""

    matrix: np.ndarray
    traceless: bool = False

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues (descending) and unitary eigenbasis of a positive matrix."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[0]

    @cached_property
    def matrix(self) -> np.ndarray:
        """Reconstruct U diag(lambda) U^dagger."""
        U = self.eigenvectors
        return (U * self.eigenvalues) @ U.conj().T


@dataclass(frozen=True)
class InvariantVector:
    """Elementary symmetric polynomials e_0=1, e_1, ..., e_n of the spectrum."""

    e: np.ndarray

    @property
    def degree(self) -> int:
        return self.e.shape[0] - 1


def density_matrix(entries, normalized: bool = False, eps_pos: float = EPS_POS) -> DensityMatrix:
    """Validate and build a DensityMatrix from raw entries.

    Symmetrizes within the Hermiticity tolerance, requires the smallest
    eigenvalue to exceed ``eps_pos``, and when ``normalized`` checks the
    trace is 1 within 1e-10.
    """
    A = require_hermitian(entries, name="density matrix")
    if normalized and abs(np.trace(A).real - 1.0) > TRACE_ONE_TOL:
        raise ValidationError(
            f"normalized flag set but trace is {np.trace(A).real!r}, not 1"
        )
    w, _ = _jacobi_eigh(A)
    lam_min = float(np.min(w))
    if lam_min <= eps_pos:
        raise NotPositive(f"smallest eigenvalue {lam_min:.3e} <= floor {eps_pos:.1e}")
    return DensityMatrix(matrix=A, normalized=normalized)


def tangent_vector(entries, traceless: bool = False) -> TangentVector:
    """Validate and build a TangentVector; enforces |Tr| <= 1e-10 if traceless."""
    A = require_hermitian(entries, name="tangent vector")
    if traceless:
        scale = max(1.0, float(np.max(np.abs(A))) if A.size else 1.0)
        if abs(np.trace(A).real) > TRACE_ONE_TOL * scale:
            raise ValidationError(
                f"traceless flag set but trace is {np.trace(A).real:.3e}"
            )
    return TangentVector(matrix=A, traceless=traceless)


def _jacobi_eigh(
    H: np.ndarray,
    tol: float = JACOBI_TOL,
    max_sweeps: int = JACOBI_MAX_SWEEPS,
) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic Jacobi diagonalization of a Hermitian matrix.

    Each rotation strips the phase of the pivot entry and then applies the
    classical symmetric Schur 2x2 rotation; sweeps run until the
    off-diagonal Frobenius mass drops below tol relative to the matrix
    norm.  Deterministic for a fixed input.
    """
    A = np.array(H, dtype=complex)
    n = A.shape[0]
    U = np.eye(n, dtype=complex)
    norm = float(np.linalg.norm(A))
    if n == 1 or norm == 0.0:
        return np.real(np.diag(A)).copy(), U

    threshold = tol * norm
    off_mask = ~np.eye(n, dtype=bool)
    for _ in range(max_sweeps):
        # direct off-diagonal mass; norm(A)^2 - norm(diag)^2 cancels below sqrt(eps)*norm
        off = float(np.linalg.norm(A[off_mask]))
        if off <= threshold:
            return np.real(np.diag(A)).copy(), U
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                absg = abs(apq)
                if absg <= 0.1 * threshold / n:
                    continue
                phase = apq / absg
                alpha = A[p, p].real
                beta = A[q, q].real
                tau = (beta - alpha) / (2.0 * absg)
                sign = 1.0 if tau >= 0.0 else -1.0
                t = sign / (abs(tau) + math.hypot(1.0, tau))
                c = 1.0 / math.hypot(1.0, t)
                s = t * c
                phc = phase.conjugate()
                # column update A <- A V, with V_pp=c, V_pq=s, V_qp=-s*conj(phase), V_qq=c*conj(phase)
                col_p = A[:, p].copy()
                col_q = A[:, q].copy()
                A[:, p] = c * col_p - s * phc * col_q
                A[:, q] = s * col_p + c * phc * col_q
                # row update A <- V^dagger A
                row_p = A[p, :].copy()
                row_q = A[q, :].copy()
                A[p, :] = c * row_p - s * phase * row_q
                A[q, :] = s * row_p + c * phase * row_q
                A[p, q] = 0.0
                A[q, p] = 0.0
                A[p, p] = A[p, p].real
                A[q, q] = A[q, q].real
                u_p = U[:, p].copy()
                u_q = U[:, q].copy()
                U[:, p] = c * u_p - s * phc * u_q
                U[:, q] = s * u_p + c * phc * u_q
    off = float(np.linalg.norm(A[off_mask]))
    if off <= threshold:
        return np.real(np.diag(A)).copy(), U
    raise NoConvergence(
        f"Jacobi sweeps exhausted ({max_sweeps}), off-diagonal mass {off:.3e}"
    )


def _fix_phases(U: np.ndarray) -> np.ndarray:
    """Rotate each column so its first non-negligible component is real positive."""
    V = U.copy()
    n = V.shape[0]
    for k in range(V.shape[1]):
        col = V[:, k]
        mags = np.abs(col)
        lead = int(np.argmax(mags > 1e-12 * max(1.0, mags.max())))
        pivot = col[lead]
        if abs(pivot) > 0.0:
            V[:, k] = col * (pivot.conjugate() / abs(pivot))
    assert V.shape == (n, n)
    return V


def spectral_decompose(
    rho,
    eps_pos: float = EPS_POS,
    tol: float = JACOBI_TOL,
    max_sweeps: int = JACOBI_MAX_SWEEPS,
) -> SpectralDecomposition:
    """Diagonalize a positive Hermitian matrix.

    Accepts a DensityMatrix or raw entries.  Eigenvalues come back sorted
    descending with deterministically phase-fixed eigenvectors; unitarity
    and reconstruction residuals are verified to 1e-9 before returning.

    Raises NotHermitian, NotPositive or NoConvergence.
    """
    if isinstance(rho, DensityMatrix):
        A = rho.matrix
    else:
        A = require_hermitian(rho, name="matrix to decompose")
    w, U = _jacobi_eigh(A, tol=tol, max_sweeps=max_sweeps)
    order = np.argsort(-w, kind="stable")
    w = w[order]
    U = _fix_phases(U[:, order])
    lam_min = float(w[-1])
    if lam_min <= eps_pos:
        raise NotPositive(f"smallest eigenvalue {lam_min:.3e} <= floor {eps_pos:.1e}")
    n = A.shape[0]
    unit_res = float(np.max(np.abs(U @ U.conj().T - np.eye(n))))
    if unit_res > 1e-9:
        raise NoConvergence(f"eigenbasis unitarity residual {unit_res:.3e}")
    recon = (U * w) @ U.conj().T
    scale = max(float(np.max(np.abs(A))), 1e-300)
    recon_res = float(np.max(np.abs(recon - A))) / scale
    if recon_res > RECONSTRUCTION_TOL:
        raise NoConvergence(f"reconstruction residual {recon_res:.3e}")
    return SpectralDecomposition(eigenvalues=w, eigenvectors=U)


def as_spectral(point) -> SpectralDecomposition:
    """Coerce a DensityMatrix, raw matrix or SpectralDecomposition to the latter."""
    if isinstance(point, SpectralDecomposition):
        return point
    return spectral_decompose(point)


def elementary_invariants(spec) -> InvariantVector:
    """Elementary symmetric polynomials of the eigenvalues.

    Expands prod_i (t + lambda_i) by the usual stable recursion; all
    intermediate additions are of positive terms for a positive spectrum.
    Accepts a SpectralDecomposition or a bare eigenvalue array.
    """
    if isinstance(spec, SpectralDecomposition):
        lam = spec.eigenvalues
    else:
        lam = np.asarray(spec, dtype=float)
    n = lam.shape[0]
    e = np.zeros(n + 1)
    e[0] = 1.0
    for k, val in enumerate(lam, start=1):
        for j in range(k, 0, -1):
            e[j] += val * e[j - 1]
    return InvariantVector(e=e)


def companion_matrix(inv: InvariantVector) -> np.ndarray:
    """Sparse companion matrix sharing the state's characteristic polynomial.

    Superdiagonal ones; last row carries (-1)^(n-j) e_{n+1-j} in column j
    (1-based).  Defined for n >= 2.
    """
    n = inv.degree
    if n < 2:
        raise WrongDimension(f"companion matrix needs degree >= 2, got {n}")
    E = np.zeros((n, n), dtype=complex)
    for i in range(n - 1):
        E[i, i + 1] = 1.0
    for c in range(n):
        E[n - 1, c] = (-1.0) ** (n - 1 - c) * inv.e[n - c]
    return E


def char_poly_eval(inv: InvariantVector, A) -> np.ndarray:
    """Evaluate chi(-A) as a matrix polynomial by Horner.

    chi(-t) = prod_i (lambda_i + t) = sum_k e_{n-k} t^k, so the result is
    A^n + e_1 A^(n-1) + ... + e_n and is invertible whenever A has
    eigenvalues in the closed right half plane and the state is positive.
    """
    M = _as_square_array(A)
    n = inv.degree
    if M.shape[0] != n:
        raise WrongDimension(f"matrix of size {M.shape[0]} vs invariants of degree {n}")
    eye = np.eye(n, dtype=complex)
    out = eye * inv.e[0]
    for k in range(1, n + 1):
        out = out @ M + inv.e[k] * eye
    return out


def char_poly_deriv_eval(inv: InvariantVector, A) -> np.ndarray:
    """Evaluate chi'(-A), the derivative polynomial at -A, by Horner.

    d/dt chi(t) evaluated at -A equals -(n A^(n-1) + (n-1) e_1 A^(n-2)
    + ... + e_{n-1}).
    """
    M = _as_square_array(A)
    n = inv.degree
    if M.shape[0] != n:
        raise WrongDimension(f"matrix of size {M.shape[0]} vs invariants of degree {n}")
    eye = np.eye(n, dtype=complex)
    out = eye * (n * inv.e[0])
    for k in range(1, n):
        out = out @ M + (n - k) * inv.e[k] * eye
    return -out


def char_poly_coeffs(inv: InvariantVector) -> np.ndarray:
    """Coefficients of chi(t), highest power first (for numpy.polyval)."""
    n = inv.degree
    return np.array([(-1.0) ** (n - k) * inv.e[k] for k in range(n + 1)])


def hermitian_basis(n: int, traceless: bool = False) -> list[np.ndarray]:
    """Orthonormal Hermitian basis under the pairing <A,B> = Tr(A B).

    Enumeration order is fixed for reproducibility: for each index pair
    j < k (lexicographic) the symmetric element (E_jk + E_kj)/sqrt2 then the
    antisymmetric element (-i E_jk + i E_kj)/sqrt2; next the n-1 diagonal
    generators; finally identity/sqrt(n) unless ``traceless``.
    """
    basis: list[np.ndarray] = []
    for j in range(n):
        for k in range(j + 1, n):
            S = np.zeros((n, n), dtype=complex)
            S[j, k] = S[k, j] = 1.0 / math.sqrt(2.0)
            basis.append(S)
            A = np.zeros((n, n), dtype=complex)
            A[j, k] = -1j / math.sqrt(2.0)
            A[k, j] = 1j / math.sqrt(2.0)
            basis.append(A)
    for l in range(1, n):
        D = np.zeros((n, n), dtype=complex)
        coeff = 1.0 / math.sqrt(l * (l + 1.0))
        for m in range(l):
            D[m, m] = coeff
        D[l, l] = -l * coeff
        basis.append(D)
    if not traceless:
        basis.append(np.eye(n, dtype=complex) / math.sqrt(n))
    return basis
