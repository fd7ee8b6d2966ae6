"""Batch verification front-end.

Each subcommand runs one suite, writes a JSON report with fixed field order
and 17-significant-digit floats (so reruns with the same seed are
byte-identical), and exits 0 only if every suite assertion passed.  CSV
sidecars carry spectra, curves and measures for plotting elsewhere.

Thread count is taken from the WEYLFOCK_THREADS environment variable
(default: all cores).
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from . import reports
from .counterexample import (build_counterexample, curve_to_csv,
                             curvature_profile, fourier_decay_probe,
                             scan_sign_components, trace_zero_component)
from .fock_rep import FockConfig, rho_adjoint, rho_matrix, save_operator
from .operators import (gaussian_packet, ground_state_projector,
                        random_bump_operator, random_low_rank_operator,
                        random_polynomial_gaussian)
from .phase_space import PhasePoint, cocycle
from .qtranslate import independence_margin
from .schatten import decay_exponent, spectrum_to_csv
from .transforms import (WEYL_PLANCHEREL_CONSTANT, PhaseFunction, PhaseGrid,
                         fourier_wigner, fourier_wigner_at, symplectic_fourier,
                         weyl_transform)
from .qtranslate import translate

# calibrated wave packet for the round-trip suite: energetic enough that the
# truncation error is resolvable (and halves under refinement), small enough
# to sit far below the 1e-4 inversion tolerance
ROUNDTRIP_CENTER = (1.4, -1.1)
ROUNDTRIP_MOMENTUM = (1.6, 1.2)

GENERIC_RAY_ANGLES = (0.35, 1.02, 1.85, 2.60)


def _apply_thread_env() -> None:
    raw = os.environ.get("WEYLFOCK_THREADS")
    if not raw:
        return
    count = max(1, int(raw))
    try:
        import numba
        numba.set_num_threads(count)
    except (ImportError, ValueError):
        pass
    try:
        import threadpoolctl
        threadpoolctl.threadpool_limits(count)
    except ImportError:
        pass


def _disk_points(radius: float, per_axis: int) -> np.ndarray:
    ax = np.linspace(-radius, radius, per_axis)
    X, Y = np.meshgrid(ax, ax, indexing="ij")
    pts = np.column_stack([X.ravel(), Y.ravel()])
    return pts[np.hypot(pts[:, 0], pts[:, 1]) <= radius]


def _cmd_repr_check(args) -> tuple[bool, dict]:
    cfg = FockConfig(n=1, levels=args.N)
    rng = np.random.default_rng(args.seed)
    radius = min(1.0, 0.08 * np.sqrt(args.N))
    half = cfg.dim // 2

    identity_defect = float(np.abs(
        rho_matrix(PhasePoint.zero(1), cfg).entries - np.eye(cfg.dim)).max())

    adjoint_defect = 0.0
    unitarity_defect = 0.0
    projective_defect = 0.0
    for _ in range(6):
        z1 = PhasePoint(*rng.uniform(-radius / 1.5, radius / 1.5, size=(2, 1)))
        z2 = PhasePoint(*rng.uniform(-radius / 1.5, radius / 1.5, size=(2, 1)))
        R1, R2 = rho_matrix(z1, cfg), rho_matrix(z2, cfg)
        adjoint_defect = max(adjoint_defect, float(np.abs(
            rho_adjoint(z1, cfg).entries - rho_matrix(-z1, cfg).entries).max()))
        sv = np.linalg.svd(R1.entries[:, :half], compute_uv=False)
        unitarity_defect = max(unitarity_defect, float(np.abs(sv - 1.0).max()))
        phase = np.exp(1j * np.pi * (z1.x[0] * z2.y[0] - z1.y[0] * z2.x[0]))
        prod = R1.entries @ R2.entries - phase * rho_matrix(z1 + z2, cfg).entries
        projective_defect = max(projective_defect,
                                float(np.abs(prod[:half, :half]).max()))

    if args.dump:
        zs = PhasePoint((radius / 2,), (radius / 3,))
        save_operator(rho_matrix(zs, cfg), args.dump)

    metrics = {
        "identity_defect": identity_defect,
        "adjoint_reflection_defect": adjoint_defect,
        "block_unitarity_defect": unitarity_defect,
        "projective_group_law_defect": projective_defect,
        "z_radius": radius,
    }
    passed = (identity_defect < 1e-12 and adjoint_defect < 1e-12
              and unitarity_defect < 1e-4 and projective_defect < 1e-6)
    return passed, metrics


def _cmd_transform_check(args) -> tuple[bool, dict]:
    rng = np.random.default_rng(args.seed)
    grid = PhaseGrid(1, args.L, args.M)
    cfg = FockConfig(1, args.N)

    def roundtrip_error(g, c):
        f = gaussian_packet(g, ROUNDTRIP_CENTER, ROUNDTRIP_MOMENTUM)
        back = fourier_wigner(weyl_transform(f, c), g)
        return float(np.abs(back.values - f.values).max())

    err_base = roundtrip_error(grid, cfg)
    err_fine = roundtrip_error(PhaseGrid(1, args.L, 2 * args.M),
                               FockConfig(1, 2 * args.N))

    ratios = []
    for _ in range(10):
        f = random_polynomial_gaussian(grid, rng)
        W = weyl_transform(f, cfg)
        ratios.append(float(np.linalg.norm(W.entries)) / f.lp_norm(2))
    ratios = np.array(ratios)
    spread = float((ratios.max() - ratios.min()) / np.median(ratios))

    f = random_polynomial_gaussian(grid, rng)
    twice = symplectic_fourier(symplectic_fourier(f))
    involution_defect = float(np.abs(twice.values - f.values).max())

    mesh = grid.mesh()
    g = PhaseFunction(grid, np.exp(-(np.pi / 2) * (mesh[0] ** 2 + mesh[1] ** 2)))
    gs = symplectic_fourier(g)
    rmesh = gs.grid.mesh()
    target = 2.0 * np.exp(-2 * np.pi * (rmesh[0] ** 2 + rmesh[1] ** 2))
    gaussian_defect = float(np.abs(gs.values - target).max())

    metrics = {
        "roundtrip_inversion_error": err_base,
        "roundtrip_refined_error": err_fine,
        "roundtrip_error_halved": bool(err_fine <= err_base / 2),
        "plancherel_ratio_mean": float(ratios.mean()),
        "plancherel_ratio_spread": spread,
        "plancherel_constant": WEYL_PLANCHEREL_CONSTANT,
        "symplectic_involution_defect": involution_defect,
        "symplectic_gaussian_defect": gaussian_defect,
    }
    passed = (err_base < 1e-4 and err_fine <= err_base / 2 and spread < 1e-3
              and involution_defect < 1e-10 and gaussian_defect < 1e-6)
    return passed, metrics


def _cmd_intertwine_check(args) -> tuple[bool, dict]:
    rng = np.random.default_rng(args.seed)
    cfg = FockConfig(1, args.N)
    pts = _disk_points(2.0, 17)
    worst = 0.0
    for _ in range(args.pairs):
        A = random_low_rank_operator(cfg, 5, rng)
        z = PhasePoint(*rng.uniform(-0.5 / np.sqrt(2), 0.5 / np.sqrt(2),
                                    size=(2, 1)))
        lhs = fourier_wigner_at(translate(z, A), pts)
        base = fourier_wigner_at(A, pts)
        coc = np.array([cocycle(z, PhasePoint((p[0],), (p[1],))) for p in pts])
        worst = max(worst, float(np.abs(lhs - coc * base).max()))
    metrics = {"intertwining_cocycle_deviation": worst, "pairs": args.pairs}
    return worst < 1e-5, metrics


def _load_points_csv(path: str) -> list[PhasePoint]:
    data = np.atleast_2d(np.loadtxt(path, delimiter=",", skiprows=1))
    n = data.shape[1] // 2
    return [PhasePoint(tuple(r[:n]), tuple(r[n:2 * n])) for r in data]


def _random_separated_points(rng, count=5, separation=0.3) -> list[PhasePoint]:
    pts: list[np.ndarray] = []
    while len(pts) < count:
        cand = rng.uniform(-1.0, 1.0, size=2)
        if all(np.linalg.norm(cand - q) >= separation for q in pts):
            pts.append(cand)
    return [PhasePoint((p[0],), (p[1],)) for p in pts]


def _cmd_independence(args) -> tuple[bool, dict]:
    rng = np.random.default_rng(args.seed)
    cfg = FockConfig(args.n, args.N)
    if args.operator == "p0":
        A = ground_state_projector(cfg)
    elif args.operator == "rank3":
        A = random_low_rank_operator(cfg, 3, rng)
    elif args.operator == "bump":
        A = random_bump_operator(cfg, rng)
    else:
        raise ValueError(f"unknown operator family {args.operator!r}")
    if args.points:
        points = _load_points_csv(args.points)
    else:
        points = _random_separated_points(rng)
    margin = independence_margin(points, A)
    seps = [points[i].distance(points[j])
            for i in range(len(points)) for j in range(i + 1, len(points))]
    metrics = {
        "translate_independence_margin": margin,
        "operator_family": args.operator,
        "point_count": len(points),
        "min_separation": float(min(seps)) if seps else 0.0,
    }
    return margin > 1e-6, metrics


def _cmd_counterexample(args, outdir: Path) -> tuple[bool, dict]:
    p_list = tuple(float(p) for p in args.p_list.split(","))
    cfg = FockConfig(1, args.N)
    A, report = build_counterexample(cfg, args.nodes, p_list)
    cfg_half = FockConfig(1, args.N // 2)
    _, report_half = build_counterexample(cfg_half, args.nodes, p_list)

    curve = trace_zero_component(args.nodes)
    kappa = curvature_profile(curve)
    radii = np.geomspace(5.0, 50.0, 400)
    rays = [(np.cos(a), np.sin(a)) for a in GENERIC_RAY_ANGLES]
    fits = fourier_decay_probe(curve, rays, radii)

    curve_to_csv(curve, outdir / "curve.csv")
    spectrum_to_csv(report.spectrum, outdir / "spectrum.csv")
    reports.write_report(outdir / "operator_report.json", report.to_json_dict())
    if args.dump:
        save_operator(A, args.dump)

    exp_lo, exp_hi = -0.35, -0.15
    decay_ok = args.N < 256 or exp_lo <= report.spectrum.fit_exponent <= exp_hi
    ray_ok = all(-0.65 <= f.exponent <= -0.35 for f in fits)
    metrics = {
        "difference_residual_block": report.residual_rel,
        "difference_residual_block_halfsize": report_half.residual_rel,
        "difference_residual_full": report.residual_rel_full,
        "difference_residual_full_halfsize": report_half.residual_rel_full,
        "residual_monotone_improvement": bool(
            report.residual_rel_full < report_half.residual_rel_full),
        "norm_s2": report.norm_s2,
        "selfadjoint_defect": report.selfadjoint_defect,
        "spectral_threshold_decay": report.spectrum.fit_dict(),
        "schatten_norms": {f"{p:g}": v for p, v in report.schatten_norms.items()},
        "stationary_phase_decay": {
            f"ray_{i}": {"exponent": f.exponent, "stderr": f.stderr}
            for i, f in enumerate(fits)},
        "curvature_at_seed": float(kappa[0]),
        "curvature_min_abs": float(np.abs(kappa).min()),
        "curvature_sign_constant": bool(np.all(np.sign(kappa) == np.sign(kappa[0]))),
        "curve_length": curve.total_length,
        "curve_closure_defect": curve.closure_defect,
    }
    passed = (report.residual_rel < 5e-2 and report_half.residual_rel < 5e-2
              and metrics["residual_monotone_improvement"]
              and report.norm_s2 > 0.1
              and report.selfadjoint_defect < 1e-10
              and decay_ok and ray_ok
              and metrics["curvature_min_abs"] > 1.0)
    return passed, metrics


def _cmd_decay_fit(args) -> tuple[bool, dict]:
    data = np.atleast_2d(np.loadtxt(args.spectrum, delimiter=",", skiprows=1))
    s = data[:, 1]
    lo = args.lo if args.lo is not None else 10
    hi = args.hi if args.hi is not None else max(lo + 1, s.size // 2)
    exponent, stderr = decay_exponent(s, (lo, hi))
    metrics = {"powerlaw_fit": {"exponent": exponent, "stderr": stderr,
                                "j_lo": lo, "j_hi": hi}}
    return bool(np.isfinite(exponent) and np.isfinite(stderr)), metrics


def _cmd_zero_scan(args) -> tuple[bool, dict]:
    scan = scan_sign_components(args.resolution)
    metrics = {"zero_set_scan": scan}
    return scan["negative_components"] >= 1, metrics


def build_parser() -> tuple[argparse.ArgumentParser, dict]:
    parser = argparse.ArgumentParser(
        prog="weylfock",
        description="verification suites for the phase-space toolkit")
    sub = parser.add_subparsers(dest="command", required=True)
    registry: dict[str, argparse.ArgumentParser] = {}

    def add(name, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", type=str, default=".")
        p.add_argument("--strict", action="store_true")
        p.add_argument("--config", type=str, default=None,
                       help="key=value file; flags take precedence")
        registry[name] = p
        return p

    p = add("repr-check", help="translation-matrix identities")
    p.add_argument("--N", type=int, default=16)
    p.add_argument("--dump", type=str, default=None,
                   help="write a sample translation matrix dump here")

    p = add("transform-check", help="inversion, norm ratio, involution")
    p.add_argument("--N", type=int, default=64)
    p.add_argument("--L", type=float, default=12.0)
    p.add_argument("--M", type=int, default=96)

    p = add("intertwine-check", help="cocycle intertwining of translates")
    p.add_argument("--N", type=int, default=64)
    p.add_argument("--pairs", type=int, default=20)

    p = add("independence", help="Gram margin of translated operators")
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--N", type=int, default=64)
    p.add_argument("--operator", choices=["p0", "rank3", "bump"], default="p0")
    p.add_argument("--points", type=str, default=None,
                   help="CSV of translation points (header row, 2n columns)")

    p = add("counterexample", help="surface-measure operator pipeline")
    p.add_argument("--N", type=int, default=256)
    p.add_argument("--nodes", type=int, default=4000)
    p.add_argument("--p-list", dest="p_list", type=str, default="2,3,4,5,8")
    p.add_argument("--dump", type=str, default=None,
                   help="write the assembled operator dump here")

    p = add("decay-fit", help="power-law fit of a spectrum CSV")
    p.add_argument("--spectrum", type=str, required=True)
    p.add_argument("--lo", type=int, default=None)
    p.add_argument("--hi", type=int, default=None)

    p = add("zero-scan", help="sign scan of the lattice symbol")
    p.add_argument("--resolution", type=int, default=512)

    return parser, registry


def _apply_config_file(parser, registry, argv):
    """Let a key=value file supply defaults; explicit flags still win."""
    if argv is None:
        argv = sys.argv[1:]
    argv = list(argv)
    if not argv or argv[0] not in registry:
        return argv
    sub = registry[argv[0]]
    path = None
    strict = "--strict" in argv
    for i, tok in enumerate(argv):
        if tok == "--config" and i + 1 < len(argv):
            path = argv[i + 1]
        elif tok.startswith("--config="):
            path = tok.split("=", 1)[1]
    if path is None:
        return argv
    dests = {}
    for action in sub._actions:
        key = action.dest
        if key not in ("help",):
            dests[key] = action
    overrides = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            parser.error(f"{path}:{lineno}: expected key=value")
        key, _, value = line.partition("=")
        key = key.strip().replace("-", "_")
        value = value.strip()
        if key not in dests:
            msg = f"{path}:{lineno}: unknown key {key!r} for {argv[0]}"
            if strict or overrides.get("strict") == "true":
                parser.error(msg)
            print(f"warning: {msg} (ignored)", file=sys.stderr)
            continue
        action = dests[key]
        if isinstance(action, argparse._StoreTrueAction):
            overrides[key] = value.lower() in ("1", "true", "yes")
        elif action.type is not None:
            overrides[key] = action.type(value)
        else:
            overrides[key] = value
    sub.set_defaults(**overrides)
    return argv


def main(argv=None) -> int:
    _apply_thread_env()
    parser, registry = build_parser()
    argv = _apply_config_file(parser, registry, argv)
    args = parser.parse_args(argv)

    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)

    params = {k: v for k, v in sorted(vars(args).items())
              if k not in ("command", "out", "config")}
    if args.command == "repr-check":
        passed, metrics = _cmd_repr_check(args)
    elif args.command == "transform-check":
        passed, metrics = _cmd_transform_check(args)
    elif args.command == "intertwine-check":
        passed, metrics = _cmd_intertwine_check(args)
    elif args.command == "independence":
        passed, metrics = _cmd_independence(args)
    elif args.command == "counterexample":
        passed, metrics = _cmd_counterexample(args, outdir)
    elif args.command == "decay-fit":
        passed, metrics = _cmd_decay_fit(args)
    elif args.command == "zero-scan":
        passed, metrics = _cmd_zero_scan(args)
    else:  # pragma: no cover - argparse enforces the choices
        parser.error(f"unknown command {args.command}")

    report = {"command": args.command, "params": params,
              "pass": bool(passed), "metrics": metrics}
    report_path = outdir / f"{args.command}-report.json"
    reports.write_report(report_path, report)
    print(f"{args.command}: {'pass' if passed else 'FAIL'} ({report_path})")
    if not passed:
        print(f"{args.command}: failing metrics in {report_path}:",
              file=sys.stderr)
        for key, value in metrics.items():
            print(f"  {key} = {value}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
