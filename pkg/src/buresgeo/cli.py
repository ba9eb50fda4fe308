"""Command line interface: file- and sample-driven curvature computation.

Subcommands: scalar, curvature, ricci, sweep-bound, oracle, random.  Input
states are JSON documents

    {"n": 3, "normalized": true, "entries": [[[re, im], ...], ...]}

row-major with complex entries as [re, im] pairs; "-" reads standard
input.  Reports are JSON on standard output (or --output PATH) with floats
at full precision, so identical inputs and seed give byte-identical
output.  Exit codes: 0 success, 1 input/validation failure (with a
machine-readable error object), 2 numerical-consistency gate failure.

The default seed comes from the BURES_SEED environment variable, else 0.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import warnings

import numpy as np

from . import __version__
from .errors import BuresError, DegeneratePlane, DegenerateSpectrumWarning, StepUnderflow, ValidationError
from .fdoracle import oracle_report
from .geometry import metric, riemann, sectional
from .matrixcore import (
    DensityMatrix,
    density_matrix,
    elementary_invariants,
    hermitian_basis,
    require_hermitian,
    spectral_decompose,
)
from .ricciscalar import (
    bound_check,
    divergence_probe,
    g_orthonormal_basis,
    ricci_mapping_eigen,
    ricci_mapping_tensor,
    scalar_by_method,
    scalar_lower_bound,
)
from .sampling import SCHEME, random_spectral, random_tangent

ROUTE_GATE = 1e-6
GAP_LIMIT = 1e-6

CONVENTION = (
    "trace-one manifold adds (n^2-2) g(Y,Z) to the Ricci form and "
    "(n^2-1)(n^2-2) to the scalar curvature"
)

METHOD_NAMES = {
    "eigen": ("eigen_sum",),
    "charpoly": ("charpoly", "trace_h"),
    "companion": ("companion",),
    "closed": ("closed_form",),
    "trace-f": ("trace_f", "trace_f_reduced"),
}


def _complex_pairs(M: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(M, dtype=complex)]


def _matrix_from_pairs(entries, n: int) -> np.ndarray:
    A = np.asarray(entries, dtype=float)
    if A.shape != (n, n, 2):
        raise ValidationError(f"entries must be shaped {n}x{n}x2, got {A.shape}")
    return A[..., 0] + 1j * A[..., 1]


def load_matrix_file(path: str) -> DensityMatrix:
    """Parse a state from a JSON file ('-' for standard input)."""
    try:
        text = sys.stdin.read() if path == "-" else open(path, "r", encoding="utf-8").read()
    except OSError as exc:
        raise ValidationError(f"cannot read {path!r}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"invalid JSON in {path!r}: {exc}") from exc
    for key in ("n", "normalized", "entries"):
        if key not in doc:
            raise ValidationError(f"matrix file missing field {key!r}")
    n = int(doc["n"])
    M = _matrix_from_pairs(doc["entries"], n)
    return density_matrix(M, normalized=bool(doc["normalized"]))


def matrix_file_dict(rho: DensityMatrix) -> dict:
    return {
        "n": rho.dim,
        "normalized": rho.normalized,
        "entries": _complex_pairs(rho.matrix),
    }


def _resolve_seed(args) -> int:
    if getattr(args, "seed", None) is not None:
        return int(args.seed)
    env = os.environ.get("BURES_SEED")
    return int(env) if env else 0


def _emit(doc: dict, output: str | None) -> None:
    text = json.dumps(doc, sort_keys=True, indent=2)
    if output and output != "-":
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def _base_report(command: str, seed: int | None) -> dict:
    return {
        "tool": "buresgeo",
        "version": __version__,
        "command": command,
        "seed": seed,
        "constants_convention": CONVENTION,
    }


def _gather_points(args, seed: int):
    """Yield (label, SpectralDecomposition, normalized flag) for a subcommand."""
    if getattr(args, "random", None) is not None:
        n = int(args.random)
        rng = np.random.default_rng(seed)
        samples = int(getattr(args, "samples", 1) or 1)
        normalized = True if args.normalized is None else bool(args.normalized)
        for k in range(samples):
            spec = random_spectral(n, rng)
            yield k, spec, normalized
    else:
        rho = load_matrix_file(args.input)
        normalized = rho.normalized if args.normalized is None else bool(args.normalized)
        yield 0, spectral_decompose(rho), normalized


def _add_input_options(p: argparse.ArgumentParser, samples: bool = True) -> None:
    p.add_argument("input", nargs="?", default=None, help="state file (JSON), '-' for stdin")
    p.add_argument("--random", type=int, metavar="N", help="sample random trace-one states of size N instead of reading a file")
    if samples:
        p.add_argument("--samples", type=int, default=1, help="number of random samples (with --random)")
    p.add_argument("--seed", type=int, default=None, help="RNG seed (default: BURES_SEED or 0)")
    norm = p.add_mutually_exclusive_group()
    norm.add_argument("--normalized", dest="normalized", action="store_true", default=None,
                      help="compute on the trace-one manifold")
    norm.add_argument("--unnormalized", dest="normalized", action="store_false",
                      help="compute on the full positive cone")
    p.add_argument("--output", default=None, help="write the report here instead of stdout")


def _require_input(args) -> None:
    if args.random is None and args.input is None:
        raise ValidationError("provide a state file or --random N")


def cmd_scalar(args) -> int:
    _require_input(args)
    seed = _resolve_seed(args)
    if args.method == "all":
        wanted = None  # every applicable route
    else:
        wanted = METHOD_NAMES[args.method]
    report = _base_report("scalar", seed if args.random is not None else None)
    samples = []
    worst = 0.0
    for label, spec, normalized in _gather_points(args, seed):
        n = spec.dim
        inv = elementary_invariants(spec)
        gaps = np.diff(np.sort(spec.eigenvalues))
        gap = float(np.min(np.abs(gaps))) if gaps.size else float("inf")
        degenerate = gap < GAP_LIMIT
        methods = list(wanted) if wanted is not None else [
            "eigen_sum", "charpoly", "trace_h", "companion", "trace_f", "trace_f_reduced",
        ] + (["closed_form"] if n in (3, 4) else [])
        if "closed_form" in methods and (n not in (3, 4) or not normalized):
            methods.remove("closed_form")
        if not methods:
            raise ValidationError(
                f"method {args.method!r} is not applicable to n={n}, normalized={normalized}"
            )
        values = {}
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", DegenerateSpectrumWarning)
            for m in methods:
                values[m] = scalar_by_method(spec, m, normalized=normalized)
        compare = {
            m: v for m, v in values.items()
            if not (degenerate and m in ("companion", "closed_form"))
        }
        vals = np.array(list(compare.values()))
        scale = max(1.0, float(np.max(np.abs(vals))))
        deviation = float((vals.max() - vals.min()) / scale) if vals.size > 1 else 0.0
        worst = max(worst, deviation)
        entry = {
            "index": int(label),
            "n": n,
            "normalized": normalized,
            "eigenvalues": [float(v) for v in spec.eigenvalues],
            "invariants": [float(v) for v in inv.e],
            "scalar": values,
            "cross_route_max_rel_deviation": deviation,
            "degenerate_gap": degenerate,
        }
        if normalized:
            bc = bound_check(spec)
            entry["bound"] = {"bound": bc.bound, "value": bc.value, "attained": bc.attained}
        samples.append(entry)
    report["samples"] = samples
    report["max_rel_deviation"] = worst
    report["routes_agree"] = worst <= ROUTE_GATE
    _emit(report, args.output)
    return 0 if report["routes_agree"] else 2


def _load_vectors(path: str, n: int) -> list[np.ndarray]:
    text = sys.stdin.read() if path == "-" else open(path, "r", encoding="utf-8").read()
    doc = json.loads(text)
    if "vectors" not in doc:
        raise ValidationError("vectors file missing field 'vectors'")
    out = [require_hermitian(_matrix_from_pairs(v, n), name="plane vector") for v in doc["vectors"]]
    if len(out) < 2 or len(out) % 2:
        raise ValidationError("vectors file must hold an even number (pairs spanning planes)")
    return out


def cmd_curvature(args) -> int:
    _require_input(args)
    seed = _resolve_seed(args)
    report = _base_report("curvature", seed)
    points = list(_gather_points(args, seed))
    label, spec, normalized = points[0]
    n = spec.dim
    rng = np.random.default_rng(seed + 1)
    if args.vectors and args.random_plane:
        raise ValidationError("--vectors and --random-plane are mutually exclusive")
    if args.vectors:
        vecs = _load_vectors(args.vectors, n)
        pairs = [(vecs[2 * k], vecs[2 * k + 1]) for k in range(len(vecs) // 2)]
    else:
        pairs = [
            (random_tangent(n, rng, traceless=normalized), random_tangent(n, rng, traceless=normalized))
            for _ in range(int(args.planes))
        ]
    planes = []
    for k, (X, Y) in enumerate(pairs):
        entry = {"plane": k}
        try:
            K = sectional(spec, X, Y, normalized=False)
            entry["sectional"] = K
            num = riemann(spec, X, Y, X, Y)
            entry["zero_numerator"] = bool(abs(num) <= 1e-12)
            if normalized:
                K1 = sectional(spec, X, Y, normalized=True)
                entry["sectional_trace_one"] = K1
                entry["plus_one_residual"] = K1 - K - 1.0
            entry["degenerate"] = False
        except DegeneratePlane as exc:
            entry["degenerate"] = True
            entry["reason"] = str(exc)
        planes.append(entry)
    # Riemann symmetry residuals on one random 4-tuple set
    vs = [random_tangent(n, rng, traceless=normalized) for _ in range(4)]
    W, Z, X, Y = vs
    r = lambda a, b, c, d: riemann(spec, a, b, c, d, normalized=normalized)
    base = r(W, Z, X, Y)
    scale = max(1.0, abs(base))
    residuals = {
        "antisymmetry_last_pair": abs(r(W, Z, X, Y) + r(W, Z, Y, X)) / scale,
        "antisymmetry_first_pair": abs(r(W, Z, X, Y) + r(Z, W, X, Y)) / scale,
        "pair_exchange": abs(r(W, Z, X, Y) - r(X, Y, W, Z)) / scale,
        "first_bianchi": abs(r(W, Z, X, Y) + r(W, X, Y, Z) + r(W, Y, Z, X)) / scale,
    }
    basis = hermitian_basis(n, traceless=normalized)
    gram = [[metric(spec, A, B) for B in basis] for A in basis]
    report.update(
        {
            "n": n,
            "normalized": normalized,
            "eigenvalues": [float(v) for v in spec.eigenvalues],
            "invariants": [float(v) for v in elementary_invariants(spec).e],
            "metric_gram": gram,
            "planes": planes,
            "riemann_symmetry_residuals": residuals,
        }
    )
    gate = max(residuals.values()) <= 1e-9
    bad_plus_one = any(
        abs(p.get("plus_one_residual", 0.0)) > 1e-10 for p in planes if not p["degenerate"]
    )
    report["consistent"] = bool(gate and not bad_plus_one)
    _emit(report, args.output)
    return 0 if report["consistent"] else 2


def cmd_ricci(args) -> int:
    _require_input(args)
    seed = _resolve_seed(args)
    report = _base_report("ricci", seed)
    label, spec, normalized = next(iter(_gather_points(args, seed)))
    n = spec.dim
    basis = g_orthonormal_basis(spec, normalized=normalized)
    d = len(basis)
    M = np.zeros((d, d))
    for b, Bb in enumerate(basis):
        FB = ricci_mapping_tensor(spec, Bb, normalized=normalized)
        for a, Ba in enumerate(basis):
            M[a, b] = metric(spec, Ba, FB)
    selfadj = float(np.max(np.abs(M - M.T)))
    spectrum = np.sort(np.linalg.eigvalsh(0.5 * (M + M.T)))[::-1]
    scalar_ref = scalar_by_method(spec, "eigen_sum", normalized=normalized)
    trace_dev = abs(float(spectrum.sum()) - scalar_ref) / max(1.0, abs(scalar_ref))
    rng = np.random.default_rng(seed + 2)
    Z = random_tangent(n, rng, traceless=normalized)
    map_dev = float(
        np.max(
            np.abs(
                ricci_mapping_tensor(spec, Z, normalized=normalized)
                - ricci_mapping_eigen(spec, Z, normalized=normalized)
            )
        )
    )
    report.update(
        {
            "n": n,
            "normalized": normalized,
            "eigenvalues": [float(v) for v in spec.eigenvalues],
            "invariants": [float(v) for v in elementary_invariants(spec).e],
            "ricci_mapping_spectrum": [float(v) for v in spectrum],
            "spectrum_sum": float(spectrum.sum()),
            "scalar_eigen_sum": scalar_ref,
            "trace_rel_deviation": trace_dev,
            "self_adjointness_residual": selfadj,
            "tensor_vs_eigen_mapping_deviation": map_dev,
        }
    )
    report["consistent"] = bool(trace_dev <= 1e-8 and selfadj <= 1e-10 and map_dev <= 1e-10)
    _emit(report, args.output)
    return 0 if report["consistent"] else 2


def cmd_sweep_bound(args) -> int:
    seed = _resolve_seed(args)
    n = int(args.n)
    samples = int(args.samples)
    rng = np.random.default_rng(seed)
    bound = scalar_lower_bound(n)
    values = np.empty(samples)
    rows = []
    for k in range(samples):
        spec = random_spectral(n, rng)
        s = scalar_by_method(spec, "eigen_sum", normalized=True)
        values[k] = s
        if args.csv:
            rows.append((k, s, s - bound, spec.eigenvalues))
    gaps = values - bound
    hist, edges = np.histogram(gaps, bins=10)
    report = _base_report("sweep-bound", seed)
    report.update(
        {
            "n": n,
            "samples": samples,
            "normalized": True,
            "sampling": SCHEME,
            "bound": bound,
            "min_value": float(values.min()) if samples else None,
            "max_value": float(values.max()) if samples else None,
            "attained_count": int(np.sum(gaps <= 1e-6 * bound)),
            "gap_histogram": {
                "edges": [float(e) for e in edges],
                "counts": [int(c) for c in hist],
            },
        }
    )
    if args.near_pure is not None:
        probe = divergence_probe(
            n,
            ts=np.geomspace(1e-1, float(args.near_pure), 21),
            thresholds=(1e4, 1e5),
        )
        report["near_pure"] = {
            "t_final": float(probe.ts[-1]),
            "scalar_final": float(probe.values[-1]),
            "strictly_increasing": probe.strictly_increasing,
            "first_t_above": {f"{thr:g}": t for thr, t in probe.first_t_above.items()},
        }
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write("index,scalar,gap," + ",".join(f"lambda_{i}" for i in range(n)) + "\n")
            for k, s, gap, lam in rows:
                fh.write(f"{k},{s!r},{gap!r}," + ",".join(repr(float(v)) for v in lam) + "\n")
        report["csv"] = args.csv
    ok = bool(samples == 0 or values.min() >= bound - 1e-6 * bound)
    report["bound_respected"] = ok
    _emit(report, args.output)
    return 0 if ok else 2


def cmd_oracle(args) -> int:
    if args.random is None and args.n is not None:
        args.random = args.n
    _require_input(args)
    seed = _resolve_seed(args)
    report = _base_report("oracle", seed)
    label, spec, normalized = next(iter(_gather_points(args, seed)))
    try:
        rep = oracle_report(
            spec,
            normalized=normalized,
            step=args.h,
            richardson=args.richardson,
            rng=np.random.default_rng(seed + 3),
        )
    except StepUnderflow as exc:
        suggested = 1e-3 * float(spec.eigenvalues[-1])
        raise StepUnderflow(f"{exc}; try --h {suggested:.3e}") from exc
    gates = {
        "metric_abs": (rep.metric_abs, 1e-12),
        "connection_rel": (rep.connection_rel, 1e-5),
        "riemann_rel": (rep.riemann_rel, 1e-3),
        "ricci_rel": (rep.ricci_rel, 1e-3),
        "scalar_rel": (rep.scalar_rel, 1e-3),
    }
    report.update(
        {
            "n": rep.dim,
            "normalized": rep.normalized,
            "chart_dim": rep.chart_dim,
            "step": rep.step,
            "richardson": rep.richardson,
            "eigenvalues": [float(v) for v in spec.eigenvalues],
            "scalar_fd": rep.scalar_fd,
            "scalar_closed": rep.scalar_closed,
            "residuals": {k: v for k, (v, _) in gates.items()},
            "gates": {k: {"value": v, "limit": lim, "pass": v <= lim} for k, (v, lim) in gates.items()},
        }
    )
    ok = all(v <= lim for v, lim in gates.values())
    report["pass"] = ok
    _emit(report, args.output)
    return 0 if ok else 2


def cmd_random(args) -> int:
    seed = _resolve_seed(args)
    rng = np.random.default_rng(seed)
    n = int(args.n)
    normalized = True if args.normalized is None else bool(args.normalized)
    spec = random_spectral(n, rng)
    M = spec.matrix
    if not normalized:
        M = M * rng.uniform(0.5, 2.0)
    rho = density_matrix(M, normalized=normalized)
    _emit(matrix_file_dict(rho), args.output)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="buresgeo",
        description="Bures-metric curvature toolkit: scalar/sectional/Ricci curvature, bound sweeps and finite-difference cross-checks.",
    )
    parser.add_argument("--version", action="version", version=f"buresgeo {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("scalar", help="scalar curvature by one or all routes")
    _add_input_options(p)
    p.add_argument(
        "--method",
        choices=["all", "eigen", "charpoly", "companion", "closed", "trace-f"],
        default="all",
    )
    p.set_defaults(func=cmd_scalar)

    p = sub.add_parser("curvature", help="sectional curvature of tangent planes")
    _add_input_options(p, samples=False)
    p.add_argument("--vectors", default=None, help="JSON file with Hermitian plane-spanning vectors (pairs)")
    p.add_argument("--random-plane", action="store_true",
                   help="sample random tangent planes (the default when --vectors is absent)")
    p.add_argument("--planes", type=int, default=3, help="number of random planes (default 3)")
    p.set_defaults(func=cmd_curvature)

    p = sub.add_parser("ricci", help="spectrum and consistency of the Ricci mapping")
    _add_input_options(p, samples=False)
    p.set_defaults(func=cmd_ricci)

    p = sub.add_parser("sweep-bound", help="random sweep against the scalar-curvature lower bound")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--near-pure", type=float, default=None, metavar="T",
                   help="also probe the divergence path down to eigenvalue parameter T")
    p.add_argument("--csv", default=None, help="write per-sample rows to this CSV file")
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_sweep_bound)

    p = sub.add_parser("oracle", help="finite-difference cross-check of the closed forms")
    _add_input_options(p, samples=False)
    p.add_argument("--n", type=int, default=None,
                   help="with no input file, sample a random state of this size (2 or 3 by default cost)")
    p.add_argument("--h", type=float, default=None, help="finite-difference step (default 1e-3 * smallest eigenvalue)")
    rich = p.add_mutually_exclusive_group()
    rich.add_argument("--richardson", dest="richardson", action="store_true", default=True)
    rich.add_argument("--no-richardson", dest="richardson", action="store_false")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("random", help="emit a random state as a matrix file")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=None)
    norm = p.add_mutually_exclusive_group()
    norm.add_argument("--normalized", dest="normalized", action="store_true", default=None)
    norm.add_argument("--unnormalized", dest="normalized", action="store_false")
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_random)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BuresError as exc:
        _emit({"error": {"type": type(exc).__name__, "message": str(exc)}}, getattr(args, "output", None))
        return 1


if __name__ == "__main__":
    sys.exit(main())
