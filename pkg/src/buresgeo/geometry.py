"""Bures metric, Levi-Civita connection and Riemann curvature.

The manifold is the open cone of strictly positive Hermitian matrices; the
trace-one submanifold is selected by ``normalized=True`` throughout.  The
metric is

    g(X, Y) = Tr(X G) / 2   with   rho G + G rho = Y,

the solve written f = (L+R)^-1 below.  The position field N(rho) = rho is
g-perpendicular to the trace-one submanifold and g(N, X) = Tr(X)/4.

Covariant derivative (constant extensions differentiate to zero):

    nabla_X Y = flat derivative of Y along X  -  f(X) rho f(Y)  -  f(Y) rho f(X)

with ``+ 2 g(X, Y) N`` added on the trace-one submanifold.  Curvature uses
the three-commutator form

    R(W,Z,X,Y) = 2 g(i rho [fX, fY] rho, i [fW, fZ])
               +   g(i rho [fZ, fY] rho, i [fW, fX])
               -   g(i rho [fZ, fX] rho, i [fW, fY])

(the explicit i factors keep both metric arguments Hermitian), plus the
Gauss-equation correction g(Y,Z) g(X,W) - g(X,Z) g(Y,W) on the trace-one
submanifold.  Sectional curvature of the plane (X, Y) divides R(X,Y,X,Y)
by the Gram determinant; on the trace-one submanifold it exceeds the
ambient value by exactly 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import BuresError, DegeneratePlane, StepUnderflow, ValidationError
from .matrixcore import (
    DensityMatrix,
    TangentVector,
    as_spectral,
    require_hermitian,
    spectral_decompose,
)
from .superops import inv_lplusr, lr_over_lplusr

IMAG_RESIDUE_TOL = 1e-12
FLAT_STEP_SCALE = 1e-5
MIN_FLAT_STEP = 1e-12


def _tangent_matrix(X, normalized: bool = False, check_traceless: bool = False) -> np.ndarray:
    if isinstance(X, TangentVector):
        A = X.matrix
    else:
        A = require_hermitian(X, name="tangent vector")
    if check_traceless and normalized:
        scale = max(1.0, float(np.max(np.abs(A))) if A.size else 1.0)
        if abs(np.trace(A).real) > 1e-8 * scale:
            raise ValidationError(
                f"tangent vector on the trace-one manifold must be traceless, got Tr = {np.trace(A).real:.3e}"
            )
    return A


def _real_scalar(value: complex, what: str = "metric value") -> float:
    scale = max(1.0, abs(value.real))
    if abs(value.imag) > IMAG_RESIDUE_TOL * scale:
        raise BuresError(f"{what} has imaginary residue {value.imag:.3e}")
    return float(value.real)


def metric(point, X, Y) -> float:
    """Bures metric g(X, Y) = Tr(X (L+R)^-1 Y) / 2 at the given point."""
    spec = as_spectral(point)
    A = _tangent_matrix(X)
    B = _tangent_matrix(Y)
    G = inv_lplusr(spec, B)
    return _real_scalar(complex(np.trace(A @ G)) / 2.0)


def metric_gram(point, basis) -> np.ndarray:
    """Gram matrix of g over a list of Hermitian matrices."""
    spec = as_spectral(point)
    solved = [inv_lplusr(spec, _tangent_matrix(B)) for B in basis]
    H = np.stack([_tangent_matrix(B) for B in basis])
    Gs = np.stack(solved)
    gram = 0.5 * np.einsum("aij,bji->ab", H, Gs)
    gram = 0.5 * (gram + gram.T.conj())
    return np.real(gram)


def normal_field(point) -> np.ndarray:
    """The normal field N(rho) = rho."""
    if isinstance(point, DensityMatrix):
        return point.matrix
    return as_spectral(point).matrix


def normal_split(point, X) -> tuple[np.ndarray, float]:
    """Split Hermitian X = X0 + alpha * rho with X0 traceless.

    X0 is tangent to the trace-one submanifold and g-orthogonal to the
    normal direction, since g(N, X0) = Tr(X0)/4 = 0.
    """
    rho = normal_field(point)
    A = _tangent_matrix(X)
    alpha = float(np.trace(A).real / np.trace(rho).real)
    return A - alpha * rho, alpha


@dataclass(frozen=True)
class VectorField:
    """Tangent-vector-valued field on the cone.

    ``value`` maps a point (Hermitian ndarray) to a Hermitian matrix;
    ``derivative``, when given, maps (point, direction) to the exact
    directional derivative and replaces finite differencing.
    """

    value: Callable[[np.ndarray], np.ndarray]
    derivative: Optional[Callable[[np.ndarray, np.ndarray], np.ndarray]] = None


def constant_field(X) -> VectorField:
    A = np.asarray(X, dtype=complex)
    zero = np.zeros_like(A)
    return VectorField(value=lambda rho: A, derivative=lambda rho, V: zero)


def position_field() -> VectorField:
    """The field N(rho) = rho; its flat derivative along X is X."""
    return VectorField(value=lambda rho: rho, derivative=lambda rho, V: V)


def _min_eig(M: np.ndarray) -> float:
    return float(np.min(spectral_decompose(M, eps_pos=-np.inf).eigenvalues))


def flat_derivative(field: VectorField, rho: np.ndarray, direction: np.ndarray, step: float | None = None) -> np.ndarray:
    """Directional derivative of a field along ``direction`` at ``rho``.

    Uses the analytic rule when the field carries one; otherwise a central
    difference with step 1e-5 * (1 + |rho|), halved while rho +- h*direction
    leaves the positive cone, StepUnderflow below 1e-12.
    """
    if field.derivative is not None:
        return field.derivative(rho, direction)
    h = step if step is not None else FLAT_STEP_SCALE * (1.0 + float(np.linalg.norm(rho)))
    dir_norm = float(np.linalg.norm(direction))
    if dir_norm == 0.0:
        return np.zeros_like(np.asarray(rho, dtype=complex))
    while h >= MIN_FLAT_STEP:
        plus = rho + h * direction
        minus = rho - h * direction
        if _min_eig(plus) > 0.0 and _min_eig(minus) > 0.0:
            return (field.value(plus) - field.value(minus)) / (2.0 * h)
        h *= 0.5
    raise StepUnderflow(
        f"cannot stay inside the positive cone along this direction (|direction| = {dir_norm:.3g})"
    )


def _as_field(Y) -> VectorField:
    if isinstance(Y, VectorField):
        return Y
    return constant_field(_tangent_matrix(Y))


def covariant_derivative(point, X, Y, normalized: bool = False, step: float | None = None) -> np.ndarray:
    """Levi-Civita covariant derivative of the field Y along X at a point.

    X may be a field or a single Hermitian matrix (only its value at the
    point enters).  With ``normalized`` the trace-one correction
    2 g(X, Y) N is added.
    """
    spec = as_spectral(point)
    rho = spec.matrix
    Xval = X.value(rho) if isinstance(X, VectorField) else _tangent_matrix(X)
    Yfield = _as_field(Y)
    Yval = Yfield.value(rho)
    flat = flat_derivative(Yfield, rho, Xval, step=step)
    fX = inv_lplusr(spec, Xval)
    fY = inv_lplusr(spec, Yval)
    out = flat - fX @ rho @ fY - fY @ rho @ fX
    if normalized:
        out = out + 2.0 * metric(spec, Xval, Yval) * rho
    return out


def lie_bracket(X: VectorField, Y: VectorField, rho: np.ndarray, step: float | None = None) -> np.ndarray:
    """Lie bracket [X, Y](rho) = DY[X(rho)] - DX[Y(rho)] of two fields."""
    Xv = X.value(rho)
    Yv = Y.value(rho)
    return flat_derivative(Y, rho, Xv, step=step) - flat_derivative(X, rho, Yv, step=step)


def riemann(point, W, Z, X, Y, normalized: bool = False) -> float:
    """Riemann curvature R(W, Z, X, Y) of the Bures metric.

    Evaluates the three-commutator form; with ``normalized`` the
    Gauss-equation terms for the trace-one submanifold are added.
    """
    spec = as_spectral(point)
    rho = spec.matrix
    Wm = _tangent_matrix(W, normalized, check_traceless=True)
    Zm = _tangent_matrix(Z, normalized, check_traceless=True)
    Xm = _tangent_matrix(X, normalized, check_traceless=True)
    Ym = _tangent_matrix(Y, normalized, check_traceless=True)
    fW = inv_lplusr(spec, Wm)
    fZ = inv_lplusr(spec, Zm)
    fX = inv_lplusr(spec, Xm)
    fY = inv_lplusr(spec, Ym)

    def comm(A, B):
        return A @ B - B @ A

    def lr(M):
        return rho @ M @ rho

    val = 2.0 * metric(spec, 1j * lr(comm(fX, fY)), 1j * comm(fW, fZ))
    val += metric(spec, 1j * lr(comm(fZ, fY)), 1j * comm(fW, fX))
    val -= metric(spec, 1j * lr(comm(fZ, fX)), 1j * comm(fW, fY))
    if normalized:
        val += metric(spec, Ym, Zm) * metric(spec, Xm, Wm)
        val -= metric(spec, Xm, Zm) * metric(spec, Ym, Wm)
    return val


def curvature_map(point, X, Y, Z, normalized: bool = False) -> np.ndarray:
    """Curvature mapping R(X, Y)Z, satisfying g(R(X,Y)Z, W) = R(W,Z,X,Y).

    Three commutator terms through LR/(L+R); with ``normalized`` the
    correction g(Y,Z) X - g(X,Z) Y is added.
    """
    spec = as_spectral(point)
    Xm = _tangent_matrix(X, normalized, check_traceless=True)
    Ym = _tangent_matrix(Y, normalized, check_traceless=True)
    Zm = _tangent_matrix(Z, normalized, check_traceless=True)
    fX = inv_lplusr(spec, Xm)
    fY = inv_lplusr(spec, Ym)
    fZ = inv_lplusr(spec, Zm)

    def comm(A, B):
        return A @ B - B @ A

    def K(M):
        return lr_over_lplusr(spec, M)

    out = 2.0 * comm(fZ, K(comm(fY, fX)))
    out += comm(fX, K(comm(fY, fZ)))
    out += comm(fY, K(comm(fZ, fX)))
    if normalized:
        out = out + metric(spec, Ym, Zm) * Xm - metric(spec, Xm, Zm) * Ym
    return 0.5 * (out + out.conj().T)


def sectional(point, X, Y, normalized: bool = False) -> float:
    """Sectional curvature of the plane spanned by X and Y.

    Refuses nearly degenerate planes (Gram determinant below 1e-12 of its
    natural scale) instead of regularizing.  With ``normalized`` the value
    is computed on the trace-one submanifold and verified to exceed the
    ambient value by exactly 1.
    """
    spec = as_spectral(point)
    Xm = _tangent_matrix(X, normalized, check_traceless=True)
    Ym = _tangent_matrix(Y, normalized, check_traceless=True)
    gxx = metric(spec, Xm, Xm)
    gyy = metric(spec, Ym, Ym)
    gxy = metric(spec, Xm, Ym)
    det = gxx * gyy - gxy * gxy
    scale = max(gxx * gyy, 1e-300)
    if det <= 1e-12 * scale:
        raise DegeneratePlane(
            f"Gram determinant {det:.3e} below 1e-12 of scale {scale:.3e}"
        )
    plain = riemann(spec, Xm, Ym, Xm, Ym, normalized=False) / det
    if not normalized:
        return plain
    one = riemann(spec, Xm, Ym, Xm, Ym, normalized=True) / det
    if abs(one - plain - 1.0) > 1e-10 * max(1.0, abs(one)):
        raise BuresError(
            f"trace-one sectional curvature violates the +1 relation by {one - plain - 1.0:.3e}"
        )
    return one
