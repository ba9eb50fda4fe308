"""Ricci tensor, Ricci mapping and scalar curvature in every closed form.

All routes compute the same scalar; they differ in the machinery and in
their conditioning, which is the point of shipping them together:

  * ``eigen_sum``  - the plain eigenvalue sum
        S = 6 sum_k lambda_k (sum_i 1/(lambda_i+lambda_k))^2 - 3/2 Tr rho^-1.
    All denominators are sums of positive eigenvalues, so this is the
    unconditionally stable route and the reference for the others.
  * ``charpoly``   - 6 Tr rho chi'(-rho)^2 chi(-rho)^-2 - 3/2 Tr rho^-1, with
    chi the characteristic polynomial; cross-checked internally against the
    resolvent form Tr h_rho(rho), h_rho(t) = 6 t (Tr (rho + t)^-1)^2 - 3/(2t).
  * ``companion``  - the same polynomial expression evaluated on the sparse
    companion matrix built from the elementary invariants alone; exact in
    exact arithmetic, ill-conditioned near eigenvalue collisions (warned).
  * ``closed_n3`` / ``closed_n4`` - rational functions of the invariants on
    the trace-one manifold (e_1 = 1): 2(28 e3 - 49 e2 - 9)/(e3 - e2) and
    6(63 e4 + 35 e3^2 - 43 e2 e3 - 7 e3 - 3 e2^2)/(e4 + e3^2 - e2 e3).
  * ``trace_f``    - operator trace of the materialized Ricci mapping, plus
    a reduced variant where the conjugation by (L+R) has been cancelled.

Normalization conventions (explicit everywhere, never implied): the Ricci
form on the trace-one manifold adds (n^2-2) g(Y, Z); the scalar adds
(n^2-1)(n^2-2).  The trace-one scalar is bounded below by
(5 n^2 - 4)(n^2 - 1)/2 with equality exactly at the maximally mixed state,
and diverges as the next-to-last elementary invariant goes to zero.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    BuresError,
    DegenerateSpectrumWarning,
    DenominatorNearZero,
    NotPositive,
    SingularMatrix,
    ValidationError,
    WrongDimension,
)
from .geometry import _tangent_matrix, metric, metric_gram, riemann
from .matrixcore import (
    EPS_POS,
    InvariantVector,
    SpectralDecomposition,
    as_spectral,
    char_poly_coeffs,
    char_poly_deriv_eval,
    char_poly_eval,
    companion_matrix,
    elementary_invariants,
    hermitian_basis,
)
from .superops import (
    SuperOperator,
    apply_tensor_factors,
    comultiplication,
    inv_lplusr_super,
    lr_over_lplusr_super,
    multiply_map,
    opposite_map,
    right_mul,
    unvec,
    vec,
)

CONDITION_LIMIT = 1e12
ROUTE_TOL = 1e-8
GAP_WARN = 1e-6


def ricci_bracket(n: int) -> float:
    """Constant added to the Ricci form on the trace-one manifold."""
    return float(n * n - 2)


def scalar_bracket(n: int) -> float:
    """Constant added to the scalar curvature on the trace-one manifold."""
    return float((n * n - 1) * (n * n - 2))


def scalar_lower_bound(n: int) -> float:
    """Lower bound (5 n^2 - 4)(n^2 - 1)/2 for the trace-one scalar curvature."""
    return (5.0 * n * n - 4.0) * (n * n - 1.0) / 2.0


def _eig_weights(spec: SpectralDecomposition):
    lam = spec.eigenvalues
    P = np.add.outer(lam, lam)
    if float(P.min()) <= 2.0 * EPS_POS:
        raise NotPositive(f"eigenvalue sum {P.min():.3e} too close to zero")
    inv_sum = 1.0 / P
    # C[i, j] = sum_k lambda_k / ((lambda_i + lambda_k)(lambda_k + lambda_j))
    C = (inv_sum * lam[None, :]) @ inv_sum
    return lam, inv_sum, C


def ricci_eigenbasis(point, Y, Z, normalized: bool = False) -> float:
    """Ricci form evaluated through the eigenbasis double sum.

    Rotates Y and Z into the eigenbasis of the state and evaluates

        3 sum_{ijk} Y_ji lambda_k Z_ij / ((li+lj)(li+lk)(lk+lj))
        - 3/2 sum_{ij} Y_ii Z_jj / (li+lj)^2,

    plus (n^2-2) g(Y, Z) on the trace-one manifold.
    """
    spec = as_spectral(point)
    Ym = _tangent_matrix(Y, normalized, check_traceless=True)
    Zm = _tangent_matrix(Z, normalized, check_traceless=True)
    lam, inv_sum, C = _eig_weights(spec)
    U = spec.eigenvectors
    Yh = U.conj().T @ Ym @ U
    Zh = U.conj().T @ Zm @ U
    term1 = 3.0 * np.sum(Yh.T * Zh * C * inv_sum)
    yd = np.real(np.diag(Yh))
    zd = np.real(np.diag(Zh))
    term2 = 1.5 * (yd @ (inv_sum * inv_sum) @ zd)
    value = complex(term1 - term2)
    scale = max(1.0, abs(value.real))
    if abs(value.imag) > 1e-10 * scale:
        raise BuresError(f"Ricci value has imaginary residue {value.imag:.3e}")
    out = float(value.real)
    if normalized:
        out += ricci_bracket(spec.dim) * metric(spec, Ym, Zm)
    return out


def ricci_mapping_eigen(point, Z, normalized: bool = False) -> np.ndarray:
    """Ricci mapping F(Z) evaluated entrywise in the eigenbasis.

    F(Z)_ij = 6 C_ij Z_ij off the trace correction, minus the diagonal
    resummation 6 sum_j lambda_i Z_jj / (lambda_i + lambda_j)^2 E_ii; the
    g-pairing with Y reproduces the eigenbasis Ricci form.
    """
    spec = as_spectral(point)
    Zm = _tangent_matrix(Z, normalized, check_traceless=True)
    lam, inv_sum, C = _eig_weights(spec)
    U = spec.eigenvectors
    Zh = U.conj().T @ Zm @ U
    F = 6.0 * C * Zh
    diag_term = 6.0 * ((lam[:, None] * inv_sum * inv_sum) @ np.real(np.diag(Zh)))
    F[np.diag_indices_from(F)] -= diag_term
    out = U @ F @ U.conj().T
    out = 0.5 * (out + out.conj().T)
    if normalized:
        out = out + ricci_bracket(spec.dim) * Zm
    return out


def _ricci_map_tensor_raw(spec: SpectralDecomposition, Zm: np.ndarray) -> np.ndarray:
    """Tensor-algebra Ricci mapping without the trace-one constant.

    Composes, in the original basis,
        6 (m - m_opp) o (LR/(L+R) x (L+R)^-1 + (L+R)^-1 x LR/(L+R)) o Delta o (L+R)^-1
    with m the multiplication and Delta the comultiplication on matrix space.
    """
    Mf = inv_lplusr_super(spec)
    MK = lr_over_lplusr_super(spec)
    fZ = unvec(Mf.action @ vec(Zm), spec.dim)
    T = comultiplication(fZ)
    mixed = apply_tensor_factors(MK, Mf, T) + apply_tensor_factors(Mf, MK, T)
    return 6.0 * (multiply_map(mixed) - opposite_map(mixed))


def ricci_mapping_tensor(point, Z, normalized: bool = False) -> np.ndarray:
    """Ricci mapping through the multiplication/comultiplication algebra.

    Unitarily equivariant by construction; must agree with the eigenbasis
    mapping to 1e-10 (the two are compared in the test suite, not here).
    """
    spec = as_spectral(point)
    Zm = _tangent_matrix(Z, normalized, check_traceless=True)
    out = _ricci_map_tensor_raw(spec, Zm)
    out = 0.5 * (out + out.conj().T)
    if normalized:
        out = out + ricci_bracket(spec.dim) * Zm
    return out


def ricci_mapping_super(point, normalized: bool = False) -> SuperOperator:
    """Materialize the Ricci mapping as an operator on matrix space.

    Column (i, j) holds vec(F(E_ij)) from the tensor-algebra route.  The
    trace-one variant adds (n^2-2) Id; note its trace over all complex
    matrices is then not the trace-one scalar curvature, because the
    constant belongs on the (n^2-1)-dimensional traceless space.
    """
    spec = as_spectral(point)
    n = spec.dim
    cols = np.zeros((n * n, n * n), dtype=complex)
    E = np.zeros((n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            E[i, j] = 1.0
            cols[:, i * n + j] = vec(_ricci_map_tensor_raw(spec, E))
            E[i, j] = 0.0
    if normalized:
        cols = cols + ricci_bracket(n) * np.eye(n * n)
    return SuperOperator(n, cols)


@dataclass(frozen=True)
class RicciForm:
    """Ricci data at a fixed point: bilinear values and the mapping."""

    spec: SpectralDecomposition
    normalized: bool = False

    def bilinear(self, Y, Z) -> float:
        return ricci_eigenbasis(self.spec, Y, Z, normalized=self.normalized)

    def mapping(self, Z) -> np.ndarray:
        return ricci_mapping_tensor(self.spec, Z, normalized=self.normalized)

    def mapping_eigen(self, Z) -> np.ndarray:
        return ricci_mapping_eigen(self.spec, Z, normalized=self.normalized)


def g_orthonormal_basis(point, normalized: bool = False) -> list[np.ndarray]:
    """Gram-orthonormalize the Hermitian basis against the Bures metric.

    Returns a basis of the tangent space (traceless when ``normalized``)
    orthonormal under g at the given point.
    """
    spec = as_spectral(point)
    basis = hermitian_basis(spec.dim, traceless=normalized)
    gram = metric_gram(spec, basis)
    Wmat = np.linalg.inv(np.linalg.cholesky(gram))
    return [
        sum(Wmat[a, b] * basis[b] for b in range(len(basis)))
        for a in range(len(basis))
    ]


def ricci_contraction(point, Y, Z, normalized: bool = False) -> float:
    """Ricci form as the trace of X -> R(X, Y)Z over a g-orthonormal basis.

    Sums R(B_a, Z, B_a, Y) over the orthonormalized tangent basis; the
    normal direction never contributes because the curvature mapping kills
    the position field.
    """
    spec = as_spectral(point)
    Ym = _tangent_matrix(Y, normalized, check_traceless=True)
    Zm = _tangent_matrix(Z, normalized, check_traceless=True)
    total = 0.0
    for B in g_orthonormal_basis(spec, normalized=normalized):
        total += riemann(spec, B, Zm, B, Ym, normalized=normalized)
    return total


def scalar_eigen_sum(point, normalized: bool = False) -> float:
    """Scalar curvature as the eigenvalue sum (the stable reference route).

    Accepts a state, a spectral decomposition, or a bare eigenvalue array.
    """
    if isinstance(point, SpectralDecomposition):
        lam = point.eigenvalues
    elif isinstance(point, np.ndarray) and point.ndim == 1:
        lam = np.asarray(point, dtype=float)
    else:
        lam = as_spectral(point).eigenvalues
    if float(lam.min()) <= EPS_POS:
        raise NotPositive(f"eigenvalue {lam.min():.3e} at or below floor {EPS_POS:.1e}")
    n = lam.shape[0]
    inv_sum = 1.0 / np.add.outer(lam, lam)
    col = inv_sum.sum(axis=0)
    value = 6.0 * float(np.sum(lam * col * col)) - 1.5 * float(np.sum(1.0 / lam))
    if normalized:
        value += scalar_bracket(n)
    return value


def scalar_trace_h(point, normalized: bool = False) -> float:
    """Scalar curvature via resolvent traces: Tr h_rho(rho).

    h_rho(t) = 6 t (Tr (rho + t I)^-1)^2 - 3/(2t), summed over the
    eigenvalues, with each resolvent trace taken by direct matrix
    inversion rather than from the spectrum.
    """
    spec = as_spectral(point)
    rho = spec.matrix
    n = spec.dim
    eye = np.eye(n)
    total = 0.0
    for t in spec.eigenvalues:
        r = float(np.trace(np.linalg.inv(rho + t * eye)).real)
        total += 6.0 * t * r * r - 1.5 / t
    if normalized:
        total += scalar_bracket(n)
    return total


def _charpoly_scalar(M: np.ndarray, inv: InvariantVector, what: str) -> float:
    """6 Tr M chi'(-M)^2 chi(-M)^-2 - 3/2 Tr M^-1 for M with chi's spectrum.

    chi'(-M) and chi(-M) commute, so the ratio is formed once by a linear
    solve and then squared; inverting chi(-M) before multiplying would
    square its condition number instead.
    """
    Q = char_poly_eval(inv, M)
    cond = float(np.linalg.cond(Q))
    if not np.isfinite(cond) or cond > CONDITION_LIMIT:
        raise SingularMatrix(f"chi(-{what}) condition number {cond:.3e} exceeds {CONDITION_LIMIT:.0e}")
    P = char_poly_deriv_eval(inv, M)
    W = np.linalg.solve(Q, P)
    first = 6.0 * float(np.trace(M @ W @ W).real)
    second = 1.5 * float(np.trace(np.linalg.inv(M)).real)
    return first - second


def scalar_charpoly(point, normalized: bool = False) -> float:
    """Scalar curvature from the characteristic polynomial of the state.

    Evaluates 6 Tr rho chi'(-rho)^2 chi(-rho)^-2 - 3/2 Tr rho^-1 and
    cross-checks it against the resolvent form Tr h_rho(rho); the two must
    agree to 1e-8 relative.
    """
    spec = as_spectral(point)
    inv = elementary_invariants(spec)
    value = _charpoly_scalar(spec.matrix, inv, "rho")
    check = scalar_trace_h(spec, normalized=False)
    if abs(value - check) > ROUTE_TOL * max(1.0, abs(value)):
        raise BuresError(
            f"characteristic-polynomial and resolvent scalars disagree: {value!r} vs {check!r}"
        )
    if normalized:
        value += scalar_bracket(spec.dim)
    return value


def _min_gap(inv: InvariantVector) -> float:
    roots = np.roots(char_poly_coeffs(inv))
    roots = np.sort(roots.real)
    if roots.shape[0] < 2:
        return np.inf
    return float(np.min(np.diff(roots)))


def scalar_companion(inv: InvariantVector, normalized: bool = False) -> float:
    """Scalar curvature from the companion matrix of the invariants.

    Uses only the elementary invariants; warns when the spectrum implied by
    them has an eigenvalue gap below 1e-6, where this non-normal route
    loses accuracy.
    """
    n = inv.degree
    if n < 2:
        raise WrongDimension("companion route needs degree >= 2")
    gap = _min_gap(inv)
    if gap < GAP_WARN:
        warnings.warn(
            f"eigenvalue gap {gap:.3e} below {GAP_WARN:.0e}; companion route is ill-conditioned",
            DegenerateSpectrumWarning,
            stacklevel=2,
        )
    E = companion_matrix(inv)
    value = _charpoly_scalar(E, inv, "companion")
    if normalized:
        value += scalar_bracket(n)
    return value


def scalar_closed_form(inv: InvariantVector) -> float:
    """Trace-one scalar curvature as a rational function of the invariants.

    Defined for n = 3 and n = 4 with e_1 = 1 enforced; raises
    DenominatorNearZero when the state is nearly rank deficient (where the
    curvature genuinely diverges).
    """
    n = inv.degree
    if n not in (3, 4):
        raise WrongDimension(f"closed forms exist for n in (3, 4), got {n}")
    if abs(inv.e[1] - 1.0) > 1e-10:
        raise ValidationError(f"closed form requires e_1 = 1, got {inv.e[1]!r}")
    if n == 3:
        e2, e3 = float(inv.e[2]), float(inv.e[3])
        den = e3 - e2
        if abs(den) < 1e-14:
            raise DenominatorNearZero(f"e3 - e2 = {den:.3e}")
        return 2.0 * (28.0 * e3 - 49.0 * e2 - 9.0) / den
    e2, e3, e4 = float(inv.e[2]), float(inv.e[3]), float(inv.e[4])
    den = e4 + e3 * e3 - e2 * e3
    if abs(den) < 1e-14:
        raise DenominatorNearZero(f"e4 + e3^2 - e2 e3 = {den:.3e}")
    num = 63.0 * e4 + 35.0 * e3 * e3 - 43.0 * e2 * e3 - 7.0 * e3 - 3.0 * e2 * e2
    return 6.0 * num / den


def _reduced_trace(spec: SpectralDecomposition) -> float:
    """Operator trace 6 Tr {m o (R x Id) - m_opp o (Id x R)} o (f x f) o Delta.

    The conjugation by (L+R) present in the materialized Ricci mapping has
    been cancelled here, which is why this variant is worth checking
    separately.
    """
    n = spec.dim
    Mf = inv_lplusr_super(spec)
    MR = right_mul(spec.matrix)
    ident = SuperOperator(n, np.eye(n * n, dtype=complex))
    total = 0.0 + 0.0j
    E = np.zeros((n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            E[i, j] = 1.0
            T = comultiplication(E)
            E[i, j] = 0.0
            sigma = apply_tensor_factors(Mf, Mf, T)
            a = multiply_map(apply_tensor_factors(MR, ident, sigma))
            b = opposite_map(apply_tensor_factors(ident, MR, sigma))
            total += 6.0 * (a[i, j] - b[i, j])
    return float(total.real)


def scalar_trace_f(point, normalized: bool = False, route: str = "materialized") -> float:
    """Scalar curvature as the operator trace of the Ricci mapping.

    ``route="materialized"`` traces the assembled mapping; ``"reduced"``
    uses the variant with the (L+R) conjugation cancelled.  Both trace the
    curvature part over all complex matrices and then add the trace-one
    constant (n^2-1)(n^2-2), which lives on the traceless subspace only.
    """
    spec = as_spectral(point)
    if route == "materialized":
        value = float(np.trace(ricci_mapping_super(spec, normalized=False).action).real)
    elif route == "reduced":
        value = _reduced_trace(spec)
    else:
        raise ValidationError(f"unknown trace route {route!r}")
    if normalized:
        value += scalar_bracket(spec.dim)
    return value


SCALAR_METHODS = ("eigen_sum", "charpoly", "trace_h", "companion", "closed_form", "trace_f", "trace_f_reduced")


def scalar_by_method(point, method: str, normalized: bool = False) -> float:
    """Dispatch a scalar-curvature computation by route name."""
    spec = as_spectral(point)
    if method == "eigen_sum":
        return scalar_eigen_sum(spec, normalized=normalized)
    if method == "charpoly":
        return scalar_charpoly(spec, normalized=normalized)
    if method == "trace_h":
        return scalar_trace_h(spec, normalized=normalized)
    if method == "companion":
        return scalar_companion(elementary_invariants(spec), normalized=normalized)
    if method == "closed_form":
        value = scalar_closed_form(elementary_invariants(spec))
        if not normalized:
            value -= scalar_bracket(spec.dim)
        return value
    if method == "trace_f":
        return scalar_trace_f(spec, normalized=normalized, route="materialized")
    if method == "trace_f_reduced":
        return scalar_trace_f(spec, normalized=normalized, route="reduced")
    raise ValidationError(f"unknown scalar method {method!r}")


@dataclass(frozen=True)
class ScalarReport:
    """One scalar-curvature evaluation with its bound check."""

    S_unnormalized: float
    S_normalized: float
    method: str
    lower_bound: float
    attained: bool


@dataclass(frozen=True)
class BoundCheck:
    bound: float
    value: float
    attained: bool


def bound_check(point, tol: float = 1e-6) -> BoundCheck:
    """Check the trace-one scalar curvature against its lower bound."""
    spec = as_spectral(point)
    trace = float(np.sum(spec.eigenvalues))
    if abs(trace - 1.0) > 1e-8:
        raise ValidationError(f"bound check needs a trace-one state, got trace {trace!r}")
    bound = scalar_lower_bound(spec.dim)
    value = scalar_eigen_sum(spec, normalized=True)
    return BoundCheck(bound=bound, value=value, attained=value - bound <= tol * bound)


def scalar_report(point, method: str = "eigen_sum") -> ScalarReport:
    spec = as_spectral(point)
    s_un = scalar_by_method(spec, method, normalized=False)
    s_norm = scalar_by_method(spec, method, normalized=True)
    bound = scalar_lower_bound(spec.dim)
    return ScalarReport(
        S_unnormalized=s_un,
        S_normalized=s_norm,
        method=method,
        lower_bound=bound,
        attained=s_norm - bound <= 1e-6 * bound,
    )


@dataclass(frozen=True)
class DivergenceReport:
    """Trace-one scalar curvature along a path approaching rank deficiency."""

    n: int
    ts: np.ndarray
    values: np.ndarray
    strictly_increasing: bool
    first_t_above: dict = field(default_factory=dict)


def divergence_probe(
    n: int,
    ts: np.ndarray | None = None,
    thresholds: tuple[float, ...] = (),
    monotone_below: float = 1e-2,
) -> DivergenceReport:
    """Scalar curvature along lambda(t) = (1 - (n-1) t, t, ..., t) as t drops.

    The next-to-last elementary invariant goes to zero with t, so the
    trace-one scalar must blow up; the probe asserts strict growth for
    t below ``monotone_below`` and records where each threshold is first
    exceeded.
    """
    if ts is None:
        ts = np.geomspace(1e-1, 1e-6, 26)
    ts = np.asarray(sorted(ts, reverse=True), dtype=float)
    if ts[0] > 1.0 / (n - 1):
        raise ValidationError(f"path leaves the simplex at t = {ts[0]!r}")
    values = []
    for t in ts:
        lam = np.full(n, t)
        lam[0] = 1.0 - (n - 1) * t
        if lam[0] <= EPS_POS or t <= EPS_POS:
            raise NotPositive(f"path parameter t = {t!r} leaves the positive cone")
        values.append(scalar_eigen_sum(lam, normalized=True))
    values = np.asarray(values)
    in_tail = ts < monotone_below
    tail = values[in_tail]
    increasing = bool(np.all(np.diff(tail) > 0.0))
    if not increasing:
        raise BuresError("trace-one scalar curvature failed to grow along the rank-deficiency path")
    first = {}
    for M in thresholds:
        above = np.nonzero(values > M)[0]
        first[M] = float(ts[above[0]]) if above.size else None
    return DivergenceReport(n=n, ts=ts, values=values, strictly_increasing=increasing, first_t_above=first)
