"""Command-line front end: emit plot-ready grids and run the verification suite.

Subcommands
    basis      sample one ground-state section on a grid (Re, Im, density)
    density    deviation-from-uniformity maps and the d(N) decay table
    translate  diagnostics of one magnetic translation
    cocycle    per-triangle flux identity and the cocycle-sum theorem
    verify     the full acceptance suite

Every run writes run_manifest.json listing parameters, tolerances in effect
and every emitted file; reruns with identical inputs are byte-identical.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__, gridio, tolerances, verify
from .errors import TorusLandauError
from .geometry import parse_config, resolve_geometry
from .lll_basis import (BoundaryPhases, boundary_factors, eval_fourier,
                        eval_gaussian, normalize, theta_basis)
from .levels import GridField, density_map, periodic_grid
from .cocycle import cocycle_constant, total_flux, triangle_identity, uniform_mesh
from .translations import translation_report


def _add_geometry_args(parser, n_is_list=False):
    if n_is_list:
        parser.add_argument("--N", type=str, default=None,
                            help="comma-separated flux quantum counts")
    else:
        parser.add_argument("--N", type=int, default=None,
                            help="number of flux quanta (square torus unless sides given)")
    parser.add_argument("--L1", type=float, default=None, help="torus side L1")
    parser.add_argument("--L2", type=float, default=None, help="torus side L2")
    parser.add_argument("--units", choices=("natural", "physical"), default=None,
                        help="interpretation of L1/L2 (default natural)")
    parser.add_argument("--B", type=float, default=None,
                        help="magnetic field (gauss), physical units only")
    parser.add_argument("--config", type=str, default=None,
                        help="key=value config file; flags override it")


def _add_output_args(parser):
    parser.add_argument("--out-dir", type=str, default=".",
                        help="directory for emitted files")
    parser.add_argument("--format", choices=("csv", "matrix", "json"),
                        default="csv", help="grid file format")


def _geometry_options(args, n_value=None):
    options = {}
    if args.config:
        options.update(parse_config(Path(args.config).read_text()))
    for key in ("L1", "L2", "units", "B"):
        value = getattr(args, key, None)
        if value is not None:
            options[key] = value
    n = n_value if n_value is not None else getattr(args, "N", None)
    if n is not None:
        options["N"] = int(n)
    return options


def _write_field(field: GridField, stem: Path, fmt: str) -> Path:
    if fmt == "matrix":
        return gridio.write_matrix(field, stem.with_suffix(".dat"))
    if fmt == "json":
        return gridio.write_json_grid(field, stem.with_suffix(".grid.json"))
    return gridio.write_csv(field, stem.with_suffix(".csv"))


def _write_manifest(out_dir: Path, command: str, params: dict, outputs: list,
                    checks: dict) -> Path:
    manifest = {
        "command": command,
        "parameters": params,
        "version": __version__,
        "tolerances": {k: v for k, (v, _) in tolerances.TOLERANCES.items()},
        "outputs": sorted(str(p.name) for p in outputs),
        "checks": checks,
    }
    path = out_dir / "run_manifest.json"
    path.write_text(json.dumps(manifest, sort_keys=True, indent=2) + "\n")
    return path


def _parse_flux(text: str) -> float:
    """Flux value, accepting plain floats or '<x>pi' shorthand."""
    text = text.strip().lower()
    if text.endswith("pi"):
        head = text[:-2].strip("*")
        return (float(head) if head else 1.0) * math.pi
    return float(text)


# --------------------------------------------------------------------------

def cmd_basis(args) -> int:
    geo = resolve_geometry(_geometry_options(args))
    if not 0 <= args.nu < geo.N:
        print(f"error: --nu {args.nu} outside [0, {geo.N})", file=sys.stderr)
        return 2
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    psi = normalize(theta_basis(geo, args.nu))
    nx = args.grid
    z = periodic_grid(geo, nx, nx)
    vals = eval_fourier(psi, z)
    weighted = np.exp(-np.abs(z) ** 2) * np.abs(vals) ** 2

    stem = f"basis_N{geo.N}_nu{args.nu}"
    outputs = [
        _write_field(GridField(geo, f"{stem}_re", vals.real), out / f"{stem}_re", args.format),
        _write_field(GridField(geo, f"{stem}_im", vals.imag), out / f"{stem}_im", args.format),
        _write_field(GridField(geo, f"{stem}_density", weighted), out / f"{stem}_density", args.format),
    ]

    rng = np.random.default_rng(args.seed)
    zs = rng.random(500) * geo.L1 + 1j * rng.random(500) * geo.L2
    f, g = eval_fourier(psi, zs), eval_gaussian(psi, zs)
    duality = float(np.max(np.abs(f - g)) /
                    max(np.max(np.abs(f)), np.max(np.abs(g))))
    f1, f2 = boundary_factors(geo, z)
    base = vals
    r1 = np.abs(psi(z + geo.L1) - base * f1)
    r2 = np.abs(psi(z + 1j * geo.L2) - base * f2)
    resid = float(max(r1.max() / np.abs(base * f1).max(),
                      r2.max() / np.abs(base * f2).max()))
    checks = {
        "duality_max_rel": duality,
        "duality_ok": duality < tolerances.get("poisson_duality_rel"),
        "boundary_residual_rel": resid,
        "boundary_ok": resid < tolerances.get("boundary_residual_rel"),
    }
    report = out / f"{stem}_report.json"
    report.write_text(json.dumps({
        "geometry": {"L1": geo.L1, "L2": geo.L2, "N": geo.N},
        "nu": args.nu, "grid": nx, "norm_const": psi.norm_const, **checks,
    }, sort_keys=True, indent=2) + "\n")
    outputs.append(report)

    params = {"N": geo.N, "nu": args.nu, "grid": nx, "seed": args.seed,
              "L1": geo.L1, "L2": geo.L2, "format": args.format}
    _write_manifest(out, "basis", params, outputs,
                    {k: v for k, v in checks.items() if k.endswith("_ok")})
    ok = checks["duality_ok"] and checks["boundary_ok"]
    print(f"wrote {len(outputs)} files to {out}; duality {duality:.2e}, "
          f"boundary {resid:.2e}")
    return 0 if ok else 1


def cmd_density(args) -> int:
    n_list = [int(tok) for tok in (args.N or "1,3,6,10").split(",")]
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    outputs = []
    summary = {"levels": {}, "N": n_list}
    ok = True
    for level in args.level:
        rows = []
        for n in n_list:
            geo = resolve_geometry(_geometry_options(args, n_value=n))
            nx = args.grid or verify.density_grid(geo)
            dm = density_map(geo, level, nx, nx)
            stem = out / f"density_N{n}_L{level}_deviation"
            outputs.append(_write_field(dm.deviation, stem, args.format))
            outputs.append(gridio.write_sidecar(
                dm.deviation, stem.with_suffix(".json"),
                extra={"level": level, "mean_rho": dm.mean,
                       "max_deviation": dm.max_deviation,
                       "relative_deviation": dm.relative_deviation}))
            rows.append({"N": n, "d": dm.relative_deviation,
                         "mean_rho": dm.mean, "grid": nx})
        ds = [r["d"] for r in rows]
        decreasing = all(b < a for a, b in zip(ds, ds[1:]))
        ok = ok and (decreasing or len(ds) < 2)
        summary["levels"][str(level)] = {"table": rows, "decreasing": decreasing}
    spath = out / "density_summary.json"
    spath.write_text(json.dumps(summary, sort_keys=True, indent=2) + "\n")
    outputs.append(spath)
    params = {"N": n_list, "level": args.level, "grid": args.grid,
              "format": args.format}
    _write_manifest(out, "density", params, outputs,
                    {"d_decreasing": ok})
    for level in args.level:
        table = summary["levels"][str(level)]["table"]
        print(f"level {level}: " + "  ".join(
            f"d({r['N']})={r['d']:.3e}" for r in table))
    return 0 if ok else 1


def _parse_displacement(args, geo) -> complex:
    if args.a_frac is not None:
        f1, f2 = (float(t) for t in args.a_frac.split(","))
        return f1 * geo.L1 + 1j * f2 * geo.L2
    if args.a is None:
        raise ValueError("specify --a RE,IM or --a-frac F1,F2")
    re, im = (float(t) for t in args.a.split(","))
    return re + 1j * im


def cmd_translate(args) -> int:
    geo = resolve_geometry(_geometry_options(args))
    a = _parse_displacement(args, geo)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    report = translation_report(geo, a, level=args.level,
                                nx=args.grid, ny=args.grid)
    path = out / "translation_report.json"
    path.write_text(json.dumps(report, sort_keys=True, indent=2) + "\n")
    params = {"N": geo.N, "a": [a.real, a.imag], "level": args.level,
              "grid": args.grid}
    lattice_ok = (not report["lattice"]) or (
        report["unitarity_defect"] < tolerances.get("unitarity_abs")
        and report["projection_defect"] < tolerances.get("projection_defect_lattice"))
    _write_manifest(out, "translate", params, [path],
                    {"lattice_consistency": lattice_ok})
    kind = "lattice" if report["lattice"] else "off-lattice"
    print(f"a = {a:.6g} ({kind}): unitarity defect "
          f"{report['unitarity_defect']:.2e}, projection defect "
          f"{report['projection_defect']:.2e}")
    return 0 if lattice_ok else 1


def cmd_cocycle(args) -> int:
    L1 = args.L1 if args.L1 is not None else 1.0
    L2 = args.L2 if args.L2 is not None else 1.0
    flux = _parse_flux(args.flux)
    b = flux / (L1 * L2)
    mesh = uniform_mesh(args.mesh_n, L1, L2, b)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    worst = 0.0
    for t in range(mesh.n_triangles):
        lhs, rhs = triangle_identity(mesh, t)
        worst = max(worst, abs(lhs - rhs) / (abs(lhs) + 1e-300))
    result = total_flux(mesh)
    report = {
        "mesh_n": args.mesh_n, "L1": L1, "L2": L2, "B": b,
        "flux": result.flux, "sum_cocycles": result.sum_cocycles,
        "flux_quanta": result.flux_quanta,
        "theorem_holds": result.theorem_holds,
        "weil_integral": result.weil_integral,
        "worst_triangle_identity_rel": worst,
    }
    if args.per_triangle:
        report["cocycles"] = [cocycle_constant(mesh, t)
                              for t in range(mesh.n_triangles)]
    path = out / "cocycle_report.json"
    path.write_text(json.dumps(report, sort_keys=True, indent=2) + "\n")
    params = {"mesh_n": args.mesh_n, "flux": flux, "L1": L1, "L2": L2}
    identity_ok = worst < tolerances.get("triangle_identity_rel")
    _write_manifest(out, "cocycle", params, [path], {
        "triangle_identity": identity_ok,
        "cocycle_sum": result.theorem_holds,
        "weil_integral": result.weil_integral,
    })
    print(f"sum c = {result.sum_cocycles:.12g}, flux = {result.flux:.12g}, "
          f"Weil integral: {result.weil_integral}")
    return 0 if (identity_ok and result.theorem_holds) else 1


def cmd_verify(args) -> int:
    fault = BoundaryPhases(math.pi, 0.0) if args.debug_flip_x_sign else None
    results = verify.run_acceptance(n_max=args.n_max, seed=args.seed,
                                    fault_phases=fault)
    width = max(len(r.name) for r in results)
    for r in results:
        mark = "PASS" if r.passed else "FAIL"
        print(f"{mark}  {r.name:<{width}}  {r.detail}")
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return 0 if not failed else 1


# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="toruslandau",
        description="Landau levels on a magnetized torus: grids, translations, "
                    "cocycles, and the verification suite.")
    parser.add_argument("--show-tolerances", action="store_true",
                        help="print the tolerance table and exit")
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("basis", help="sample one ground-state section")
    _add_geometry_args(p)
    _add_output_args(p)
    p.add_argument("--nu", type=int, default=0, help="section index in [0, N)")
    p.add_argument("--grid", type=int, default=128, help="samples per side")
    p.add_argument("--seed", type=int, default=verify.DEFAULT_SEED)
    p.set_defaults(func=cmd_basis)

    p = sub.add_parser("density", help="deviation-from-uniformity maps")
    _add_geometry_args(p, n_is_list=True)
    _add_output_args(p)
    p.add_argument("--level", type=int, nargs="+", default=[0], choices=(0, 1))
    p.add_argument("--grid", type=int, default=None,
                   help="samples per side (default: multiple of 2N >= max(64,16N))")
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("translate", help="magnetic translation diagnostics")
    _add_geometry_args(p)
    _add_output_args(p)
    p.add_argument("--a", type=str, default=None,
                   help="displacement RE,IM in natural units")
    p.add_argument("--a-frac", type=str, default=None,
                   help="displacement F1,F2 in units of (L1, L2)")
    p.add_argument("--level", type=int, default=0, choices=(0, 1))
    p.add_argument("--grid", type=int, default=None)
    p.set_defaults(func=cmd_translate)

    p = sub.add_parser("cocycle", help="triangulated flux identity")
    _add_geometry_args(p)
    _add_output_args(p)
    p.add_argument("--mesh-n", type=int, default=8,
                   help="grid subdivisions per side (2 n^2 triangles)")
    p.add_argument("--flux", type=str, default="2pi",
                   help="total flux, e.g. '6.283', '2pi', '3pi'")
    p.add_argument("--per-triangle", action="store_true",
                   help="include the per-triangle cocycle table")
    p.set_defaults(func=cmd_cocycle)

    p = sub.add_parser("verify", help="run the acceptance suite")
    p.add_argument("--n-max", type=int, default=6,
                   help="largest flux quantum count exercised")
    p.add_argument("--seed", type=int, default=verify.DEFAULT_SEED)
    p.add_argument("--debug-flip-x-sign", action="store_true",
                   help="inject a sign fault into the x boundary factor "
                        "(the suite must then fail)")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.show_tolerances:
        print(tolerances.format_table())
        return 0
    if not getattr(args, "command", None):
        parser.print_help()
        return 2
    try:
        return args.func(args)
    except (TorusLandauError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
