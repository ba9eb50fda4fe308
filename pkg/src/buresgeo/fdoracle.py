"""Independent finite-difference geometry engine.

Builds an explicit chart around a base state, differentiates the metric
numerically to get Christoffel symbols, and assembles the coordinate
Riemann tensor, Ricci tensor and scalar curvature from them.  Nothing here
touches the closed-form connection or curvature code paths: the only
shared ingredient is the metric evaluation itself, so agreement between
this module and the closed forms is a genuine cross-check.

Chart: rho(x) = rho0 + sum_a x_a H_a over an orthonormal Hermitian basis
(Hilbert-Schmidt pairing), restricted to the traceless generators on the
trace-one manifold.  Derivatives are central differences with step h,
nested once for the Christoffel derivatives; curvature quantities are
optionally Richardson-extrapolated from h and h/2.

Index conventions (d = basis size): Gamma[c, a, b] is the upper-index
symbol, R_low[a, b, c, d] pairs with the closed-form slots (W, Z, X, Y),
Ricci[y, z] contracts the first chart index against the coordinate trace.

Accuracy: this engine targets about 1e-3 relative after Richardson at
generic states.  Near the boundary of the cone the metric scale grows like
1/lambda_min and the nested differences lose digits faster than the
shrinking default step can recover; treat residuals there accordingly or
supply a larger step explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import StepUnderflow
from .matrixcore import DensityMatrix, SpectralDecomposition, as_spectral, hermitian_basis, spectral_decompose
from .superops import inv_lplusr

DEFAULT_STEP_SCALE = 1e-3
GRAM_TOL = 1e-12


@dataclass(frozen=True)
class Chart:
    """Affine chart around a base state with an orthonormal tangent basis."""

    base: DensityMatrix
    basis: tuple[np.ndarray, ...]
    step: float
    normalized: bool

    @property
    def dim(self) -> int:
        return len(self.basis)


def make_chart(rho, normalized: bool | None = None, step: float | None = None) -> Chart:
    """Build a chart at ``rho``; step defaults to 1e-3 * smallest eigenvalue.

    Verifies basis orthonormality to 1e-12 and that every stencil point
    within two steps of the base stays inside the positive cone (the
    perturbation operator norm is bounded by the number of touched
    coordinates times the step).
    """
    if isinstance(rho, DensityMatrix):
        base = rho
    else:
        spec = as_spectral(rho)
        trace = float(np.sum(spec.eigenvalues))
        base = DensityMatrix(matrix=spec.matrix, normalized=abs(trace - 1.0) <= 1e-10)
    if normalized is None:
        normalized = base.normalized
    n = base.dim
    basis = tuple(hermitian_basis(n, traceless=normalized))
    gram = np.array([[np.trace(A @ B).real for B in basis] for A in basis])
    gram_res = float(np.max(np.abs(gram - np.eye(len(basis)))))
    if gram_res > GRAM_TOL:
        raise StepUnderflow(f"chart basis Gram residual {gram_res:.3e}")
    spec0 = spectral_decompose(base.matrix)
    lam_min = float(spec0.eigenvalues[-1])
    h = step if step is not None else DEFAULT_STEP_SCALE * lam_min
    # stencils move at most two coordinates by at most h each; sqrt(2) slack doubled
    if lam_min <= 4.0 * h:
        raise StepUnderflow(
            f"positivity margin {lam_min:.3e} too small for step {h:.3e}; decrease the step"
        )
    return Chart(base=base, basis=basis, step=h, normalized=normalized)


def _spec_at(chart: Chart, x: np.ndarray) -> SpectralDecomposition:
    M = chart.base.matrix
    for coeff, H in zip(x, chart.basis):
        if coeff != 0.0:
            M = M + coeff * H
    return spectral_decompose(M)


def metric_components(chart: Chart, x: np.ndarray | None = None) -> np.ndarray:
    """Metric Gram matrix g_ab(x) over the chart basis."""
    d = chart.dim
    if x is None:
        x = np.zeros(d)
    spec = _spec_at(chart, np.asarray(x, dtype=float))
    solved = np.stack([inv_lplusr(spec, H) for H in chart.basis])
    H = np.stack(chart.basis)
    gram = 0.5 * np.einsum("aij,bji->ab", H, solved)
    gram = np.real(0.5 * (gram + gram.conj().T))
    return gram


def _metric_derivatives(chart: Chart, x: np.ndarray, h: float) -> tuple[np.ndarray, np.ndarray]:
    """g and its first derivatives dg[a, b, c] = d_a g_bc at chart point x."""
    d = chart.dim
    g0 = metric_components(chart, x)
    dg = np.zeros((d, d, d))
    for a in range(d):
        e = np.zeros(d)
        e[a] = h
        dg[a] = (metric_components(chart, x + e) - metric_components(chart, x - e)) / (2.0 * h)
    return g0, dg


def christoffel(chart: Chart, x: np.ndarray | None = None, step: float | None = None) -> np.ndarray:
    """Christoffel symbols Gamma[c, a, b] from central metric differences."""
    d = chart.dim
    if x is None:
        x = np.zeros(d)
    h = step if step is not None else chart.step
    g0, dg = _metric_derivatives(chart, np.asarray(x, dtype=float), h)
    ginv = np.linalg.inv(g0)
    # T[a, b, e] = d_a g_be + d_b g_ae - d_e g_ab
    T = dg + np.transpose(dg, (1, 0, 2)) - np.transpose(dg, (1, 2, 0))
    return 0.5 * np.einsum("ce,abe->cab", ginv, T)


def _curvature_arrays(chart: Chart, h: float):
    """Raw (not extrapolated) g, Gamma, lowered Riemann, Ricci and scalar at step h."""
    d = chart.dim
    zero = np.zeros(d)
    g0 = metric_components(chart, zero)
    ginv = np.linalg.inv(g0)
    gam0 = christoffel(chart, zero, step=h)
    dgam = np.zeros((d, d, d, d))  # dgam[a] = d_a Gamma
    for a in range(d):
        e = np.zeros(d)
        e[a] = h
        dgam[a] = (christoffel(chart, e, step=h) - christoffel(chart, -e, step=h)) / (2.0 * h)
    # R_up[e, b, c, d] = d_c Gamma^e_db - d_d Gamma^e_cb + Gamma^e_cf Gamma^f_db - Gamma^e_df Gamma^f_cb
    r_up = (
        np.einsum("cedb->ebcd", dgam[:, :, :, :])
        - np.einsum("decb->ebcd", dgam[:, :, :, :])
        + np.einsum("ecf,fdb->ebcd", gam0, gam0)
        - np.einsum("edf,fcb->ebcd", gam0, gam0)
    )
    r_low = np.einsum("ae,ebcd->abcd", g0, r_up)
    ricci = np.einsum("xzxy->yz", r_up)
    scalar = float(np.einsum("yz,yz->", ginv, ricci))
    return g0, ginv, gam0, r_low, ricci, scalar


def _richardson(v_h, v_half):
    return (4.0 * v_half - v_h) / 3.0


def riemann_fd(chart: Chart, richardson: bool = True, step: float | None = None) -> np.ndarray:
    """Lowered coordinate Riemann tensor R[a, b, c, d] by finite differences."""
    h = step if step is not None else chart.step
    _, _, _, r_h, _, _ = _curvature_arrays(chart, h)
    if not richardson:
        return r_h
    _, _, _, r_half, _, _ = _curvature_arrays(chart, h / 2.0)
    return _richardson(r_h, r_half)


def ricci_fd(chart: Chart, richardson: bool = True, step: float | None = None) -> np.ndarray:
    """Coordinate Ricci tensor Ricci[y, z] by finite differences."""
    h = step if step is not None else chart.step
    _, _, _, _, ric_h, _ = _curvature_arrays(chart, h)
    if not richardson:
        return ric_h
    _, _, _, _, ric_half, _ = _curvature_arrays(chart, h / 2.0)
    return _richardson(ric_h, ric_half)


def scalar_fd(chart: Chart, richardson: bool = True, step: float | None = None) -> float:
    """Scalar curvature by finite differences (Richardson over h and h/2)."""
    h = step if step is not None else chart.step
    *_, s_h = _curvature_arrays(chart, h)
    if not richardson:
        return s_h
    *_, s_half = _curvature_arrays(chart, h / 2.0)
    return float(_richardson(s_h, s_half))


@dataclass(frozen=True)
class OracleReport:
    """Deviations between finite-difference and closed-form geometry."""

    dim: int
    chart_dim: int
    normalized: bool
    step: float
    richardson: bool
    metric_abs: float
    connection_abs: float
    connection_rel: float
    riemann_abs: float
    riemann_rel: float
    ricci_abs: float
    ricci_rel: float
    scalar_fd: float
    scalar_closed: float
    scalar_abs: float
    scalar_rel: float


def oracle_report(
    rho,
    normalized: bool | None = None,
    step: float | None = None,
    richardson: bool = True,
    n_riemann_tuples: int = 10,
    rng: np.random.Generator | None = None,
) -> OracleReport:
    """Run the full comparison of this engine against the closed forms.

    Closed-form values are imported lazily so the numerical engine itself
    never depends on them.
    """
    from .geometry import covariant_derivative, constant_field, metric as metric_closed, riemann as riemann_closed
    from .ricciscalar import ricci_eigenbasis, scalar_eigen_sum

    chart = make_chart(rho, normalized=normalized, step=step)
    d = chart.dim
    spec0 = spectral_decompose(chart.base.matrix)
    h = chart.step
    g_fd = metric_components(chart)
    g_closed = np.array(
        [[metric_closed(spec0, A, B) for B in chart.basis] for A in chart.basis]
    )
    metric_abs = float(np.max(np.abs(g_fd - g_closed)))

    gam = christoffel(chart)
    connection_abs = 0.0
    for a in range(d):
        Ha = chart.basis[a]
        for b in range(a, d):
            nab = covariant_derivative(
                spec0, constant_field(Ha), constant_field(chart.basis[b]), normalized=chart.normalized
            )
            coeffs = np.array([np.trace(nab @ H).real for H in chart.basis])
            connection_abs = max(connection_abs, float(np.max(np.abs(coeffs - gam[:, a, b]))))
    connection_rel = connection_abs / max(1.0, float(np.max(np.abs(gam))))

    if richardson:
        _, _, _, r_h, ric_h, s_h = _curvature_arrays(chart, h)
        _, _, _, r_2, ric_2, s_2 = _curvature_arrays(chart, h / 2.0)
        r_low = _richardson(r_h, r_2)
        ricci = _richardson(ric_h, ric_2)
        scalar_val = float(_richardson(s_h, s_2))
    else:
        _, _, _, r_low, ricci, scalar_val = _curvature_arrays(chart, h)

    gen = rng if rng is not None else np.random.default_rng(0)
    tuples = gen.integers(0, d, size=(n_riemann_tuples, 4))
    riemann_scale = max(float(np.max(np.abs(r_low))), 1e-300)
    riemann_abs = 0.0
    for a, b, c, dd in tuples:
        closed = riemann_closed(
            spec0, chart.basis[a], chart.basis[b], chart.basis[c], chart.basis[dd],
            normalized=chart.normalized,
        )
        riemann_abs = max(riemann_abs, abs(float(r_low[a, b, c, dd]) - closed))

    ricci_closed = np.array(
        [
            [ricci_eigenbasis(spec0, chart.basis[y], chart.basis[z], normalized=chart.normalized) for z in range(d)]
            for y in range(d)
        ]
    )
    ricci_abs = float(np.max(np.abs(ricci - ricci_closed)))
    ricci_scale = max(float(np.max(np.abs(ricci_closed))), 1e-300)

    scalar_closed = scalar_eigen_sum(spec0, normalized=chart.normalized)
    scalar_abs = abs(scalar_val - scalar_closed)
    return OracleReport(
        dim=chart.base.dim,
        chart_dim=d,
        normalized=chart.normalized,
        step=h,
        richardson=richardson,
        metric_abs=metric_abs,
        connection_abs=connection_abs,
        connection_rel=connection_rel,
        riemann_abs=riemann_abs,
        riemann_rel=riemann_abs / riemann_scale,
        ricci_abs=ricci_abs,
        ricci_rel=ricci_abs / ricci_scale,
        scalar_fd=scalar_val,
        scalar_closed=scalar_closed,
        scalar_abs=scalar_abs,
        scalar_rel=scalar_abs / max(1.0, abs(scalar_closed)),
    )


def gauss_defect(rho, step: float | None = None, richardson: bool = True) -> tuple[float, float]:
    """Measure the Gauss-equation constant between the two manifolds.

    Returns (measured, expected): the trace-one scalar minus the ambient
    Riemann tensor contracted over the traceless chart directions only,
    against the same contraction of the metric wedge terms.  Both sides are
    computed numerically; for an (n^2-1)-dimensional submanifold the
    expected value is (n^2-1)(n^2-2).
    """
    chart1 = make_chart(rho, normalized=True, step=step)
    s1 = scalar_fd(chart1, richardson=richardson)

    chart_full = make_chart(rho, normalized=False, step=step)
    m = chart1.dim  # traceless generators come first in the full basis
    h = chart_full.step
    if richardson:
        _, _, _, r_h, _, _ = _curvature_arrays(chart_full, h)
        _, _, _, r_2, _, _ = _curvature_arrays(chart_full, h / 2.0)
        r_low = _richardson(r_h, r_2)
    else:
        _, _, _, r_low, _, _ = _curvature_arrays(chart_full, h)
    g_full = metric_components(chart_full)
    g_res = g_full[:m, :m]
    ginv_res = np.linalg.inv(g_res)
    r_res = r_low[:m, :m, :m, :m]
    s_restricted = float(np.einsum("ac,bd,abcd->", ginv_res, ginv_res, r_res))
    measured = s1 - s_restricted
    # contraction of g(Y,Z)g(X,W) - g(X,Z)g(Y,W) over the restricted chart,
    # computed from the numerical metric (equals m^2 - m in exact arithmetic)
    gg = ginv_res @ g_res
    expected = float(np.trace(gg) ** 2 - np.trace(gg @ gg))
    return measured, expected
