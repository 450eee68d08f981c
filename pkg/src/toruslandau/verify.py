"""The acceptance checks, each runnable on its own or as a suite.

Every check returns a CheckResult with the measured worst-case numbers; the
pass/fail thresholds come from the central tolerance table.  The pytest
acceptance module and the CLI `verify` command both run these functions, so
there is a single source of truth for what the package promises.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import tolerances
from .errors import NonIntegralFlux
from .geometry import TorusGeometry, dirac_quantize
from .lll_basis import (BoundaryPhases, boundary_factors, double_shift_factors,
                        eval_fourier, eval_gaussian, normalized_basis)
from .levels import (density_map, default_resolution, gram_matrix,
                     ground_section, local_extrema, periodic_grid,
                     raise_section, rayleigh_quotient, apply_hamiltonian)
from .translations import (commutator_matrix_residual, translation_matrix,
                           wintner_check)
from .cocycle import total_flux, triangle_identity, uniform_mesh

DEFAULT_SEED = 20260810


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    data: dict = field(default_factory=dict)

    def __str__(self):
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name}: {self.detail}"


def density_grid(geometry: TorusGeometry) -> int:
    """Density-map grid: default resolution rounded up to a multiple of 2N,
    so lattice points and half-lattice midpoints land on grid nodes."""
    base = default_resolution(geometry)
    step = 2 * geometry.N
    return ((base + step - 1) // step) * step


# --------------------------------------------------------------------------
# criterion 1: flux quantization gate

def check_flux_gate(n_max: int = 10) -> CheckResult:
    tol_rel = 1e-6
    failures = []
    for n in range(1, n_max + 1):
        for r in (0.5, 1.0, 2.0):
            L1 = math.sqrt(n * math.pi * r)
            L2 = n * math.pi / L1
            try:
                got = dirac_quantize(L1, L2)
            except NonIntegralFlux:
                failures.append(f"rejected exact N={n} r={r}")
                continue
            if got != n:
                failures.append(f"N={n} r={r} -> {got}")
            for bump in (1 + tol_rel, 1 - tol_rel):
                try:
                    dirac_quantize(L1 * bump, L2)
                    failures.append(f"accepted perturbed N={n} r={r}")
                except NonIntegralFlux:
                    pass
    detail = "; ".join(failures) if failures else \
        f"N=1..{n_max}, r in {{1/2,1,2}} accepted; 1e-6 perturbations rejected"
    return CheckResult("flux quantization gate", not failures, detail)


# --------------------------------------------------------------------------
# criterion 2: ground-state dimension and orthonormality

def check_ground_dimension(n_max: int = 10) -> CheckResult:
    tol = tolerances.get("gram_identity_abs")
    worst = 0.0
    ok = True
    for n in range(1, n_max + 1):
        basis = normalized_basis(TorusGeometry.square(n))
        if len(basis) != n:
            return CheckResult("ground-state dimension", False,
                               f"N={n} produced {len(basis)} sections")
        g = gram_matrix(basis)
        worst = max(worst, float(np.max(np.abs(g - np.eye(n)))))
    ok = worst < tol
    return CheckResult("ground-state dimension", ok,
                       f"N sections each, max |Gram - I| = {worst:.2e} (tol {tol:g})",
                       {"worst": worst})


# --------------------------------------------------------------------------
# criterion 3: Poisson duality of the two representations

def check_poisson_duality(n_max: int = 10, n_points: int = 1000,
                          seed: int = DEFAULT_SEED) -> CheckResult:
    tol = tolerances.get("poisson_duality_rel")
    rng = np.random.default_rng(seed)
    worst = 0.0
    for n in range(1, n_max + 1):
        geo = TorusGeometry.square(n)
        zs = rng.random(n_points) * geo.L1 + 1j * rng.random(n_points) * geo.L2
        for psi in normalized_basis(geo):
            f = eval_fourier(psi, zs)
            g = eval_gaussian(psi, zs)
            scale = max(float(np.max(np.abs(f))), float(np.max(np.abs(g))))
            worst = max(worst, float(np.max(np.abs(f - g))) / scale)
    return CheckResult("Poisson duality", worst < tol,
                       f"max rel disagreement {worst:.2e} over {n_points} pts/(N,nu), "
                       f"N<={n_max} (tol {tol:g})", {"worst": worst})


# --------------------------------------------------------------------------
# criterion 4: boundary conditions and the double-shift consistency

def check_boundary(n_max: int = 10, grid: int = 32,
                   fault_phases: BoundaryPhases | None = None) -> CheckResult:
    tol = tolerances.get("boundary_residual_rel")
    tol_shift = tolerances.get("double_shift_abs")
    phases = fault_phases if fault_phases is not None else BoundaryPhases()
    worst = 0.0
    worst_shift = 0.0
    for n in range(1, n_max + 1):
        geo = TorusGeometry.square(n)
        z = periodic_grid(geo, grid, grid)
        f1, f2 = boundary_factors(geo, z, phases)
        for psi in normalized_basis(geo):
            base = psi(z)
            up1 = psi(z + geo.L1)
            up2 = psi(z + 1j * geo.L2)
            scale1 = float(np.max(np.maximum(np.abs(up1), np.abs(base * f1))))
            scale2 = float(np.max(np.maximum(np.abs(up2), np.abs(base * f2))))
            worst = max(worst,
                        float(np.max(np.abs(up1 - base * f1))) / scale1,
                        float(np.max(np.abs(up2 - base * f2))) / scale2)
        # two orders of the double shift agree, and each carries (-1)^N
        zpt = 0.3 + 0.4j
        via_xy, via_yx, sym = double_shift_factors(geo, zpt)
        worst_shift = max(worst_shift,
                          abs(via_xy / via_yx - 1.0),
                          abs(via_xy / sym - (-1.0) ** n))
        psi0 = normalized_basis(geo)[0]
        both = psi0(zpt + geo.L1 + 1j * geo.L2)
        ref = max(abs(both), abs(psi0(zpt) * via_xy))
        worst_shift = max(worst_shift, abs(both - psi0(zpt) * via_xy) / ref)
    ok = worst < tol and worst_shift < tol_shift
    return CheckResult(
        "boundary conditions", ok,
        f"max residual {worst:.2e} (tol {tol:g}); "
        f"double-shift/(-1)^N error {worst_shift:.2e} (tol {tol_shift:g})",
        {"worst": worst, "shift": worst_shift})


# --------------------------------------------------------------------------
# criterion 5: symmetry-breaking structure of the density maps

def _lattice_points_near_extrema(dev: np.ndarray, n_flux: int) -> bool:
    ny, nx = dev.shape
    ext = local_extrema(dev)
    for i in range(n_flux):
        for j in range(n_flux):
            cx = round(i * nx / n_flux) % nx
            cy = round(j * ny / n_flux) % ny
            hit = any(ext[(cy + dy) % ny, (cx + dx) % nx]
                      for dx in (-1, 0, 1) for dy in (-1, 0, 1))
            if not hit:
                return False
    return True


def check_symmetry_breaking(n_max: int = 10, figure_ns=(1, 3, 6, 10),
                            levels=(0, 1)) -> CheckResult:
    tol_shift = tolerances.get("density_shift_abs")
    tol_mean = tolerances.get("density_mean_abs")
    tol_fit = tolerances.get("decay_fit_rel")
    problems = []
    d_table = {level: [] for level in levels}

    for n in range(1, n_max + 1):
        geo = TorusGeometry.square(n)
        nx = density_grid(geo)
        for level in levels:
            dm = density_map(geo, level, nx, nx)
            d_table[level].append(dm.relative_deviation)
            trace = dm.mean * geo.area
            if abs(trace - n) > tol_mean * n:
                problems.append(f"N={n} L{level}: mean*area={trace}")
            step = nx // n
            rho = dm.rho.values
            shift_err = max(
                float(np.max(np.abs(np.roll(rho, step, axis=1) - rho))),
                float(np.max(np.abs(np.roll(rho, step, axis=0) - rho))))
            if shift_err > tol_shift:
                problems.append(f"N={n} L{level}: shift err {shift_err:.1e}")
            if n in figure_ns and not _lattice_points_near_extrema(
                    dm.deviation.values, n):
                problems.append(f"N={n} L{level}: extrema off lattice")

    fits = {}
    for level in levels:
        ds = np.array(d_table[level])
        if np.any(np.diff(ds) >= 0):
            problems.append(f"L{level}: d(N) not strictly decreasing")
        ns = np.arange(1, n_max + 1)
        slope, intercept = np.polyfit(ns, np.log(ds), 1)
        resid = np.log(ds) - (slope * ns + intercept)
        centered = np.log(ds) - np.log(ds).mean()
        rel = float(np.sqrt(np.mean(resid**2) / np.mean(centered**2)))
        fits[level] = (slope, rel)
        if rel > tol_fit:
            problems.append(f"L{level}: log-linear fit residual {rel:.1%}")

    detail = "; ".join(problems) if problems else (
        "extrema on (n1 L1 + i n2 L2)/N, Z_NxZ_N invariant; " +
        ", ".join(f"L{lv}: slope {fits[lv][0]:+.3f}, fit resid {fits[lv][1]:.1%}"
                  for lv in levels))
    return CheckResult("symmetry breaking structure", not problems, detail,
                       {"d": {lv: list(map(float, d_table[lv])) for lv in levels}})


# --------------------------------------------------------------------------
# criterion 6: translation algebra on the levels

def check_translation_algebra(n_max: int = 6) -> CheckResult:
    tol_u = tolerances.get("unitarity_abs")
    tol_proj = tolerances.get("projection_defect_lattice")
    tol_comm = tolerances.get("commutator_matrix_abs")
    tol_half = tolerances.get("projection_defect_half")
    problems = []
    half_defects = {}
    for n in range(1, n_max + 1):
        geo = TorusGeometry.square(n)
        a_lat = (geo.L1 + 1j * geo.L2) / n
        tm = translation_matrix(geo, a_lat)
        if tm.unitarity_defect > tol_u:
            problems.append(f"N={n}: unitarity {tm.unitarity_defect:.1e}")
        if tm.max_projection_defect > tol_proj:
            problems.append(f"N={n}: lattice defect {tm.max_projection_defect:.1e}")
        a, b = geo.L1 / n, 1j * geo.L2 / n
        phase, resid = commutator_matrix_residual(geo, a, b)
        if resid > tol_comm:
            problems.append(f"N={n}: commutator residual {resid:.1e}")
        if abs(phase - np.exp(2j * np.pi / n)) > 1e-12:
            problems.append(f"N={n}: phase {phase} != exp(2 pi i/N)")
        # half-lattice midpoints (x-edge, y-edge and cell-center types; the
        # Z_N copies are equivalent by the unitarity just verified)
        mins = []
        for a_half in (geo.L1 / (2 * n), 1j * geo.L2 / (2 * n),
                       (geo.L1 + 1j * geo.L2) / (2 * n)):
            th = translation_matrix(geo, a_half)
            mins.append(float(np.min(th.projection_defects)))
            if mins[-1] <= tol_half:
                problems.append(f"N={n}: half-lattice defect {mins[-1]:.1e}")
        half_defects[n] = mins   # shrinks with N; recorded, no rate asserted
    detail = "; ".join(problems) if problems else (
        f"N<={n_max}: unitary lattice matrices, commutator exp(2 pi i/N), "
        f"half-lattice defects > {tol_half:g}")
    return CheckResult("translation algebra", not problems, detail,
                       {"half_lattice_defects": half_defects})


# --------------------------------------------------------------------------
# criterion 7: finite-dimensionality obstruction

def check_wintner(n_max: int = 10) -> CheckResult:
    tol = tolerances.get("wintner_abs")
    witness = tolerances.get("wintner_witness_abs")
    problems = []
    for n in range(1, n_max + 1):
        geo = TorusGeometry.square(n)
        lattice = wintner_check(n, geo.L1 / n, 1j * geo.L2 / n)
        if not lattice.consistent or abs(lattice.phase - 1) > tol:
            problems.append(f"N={n}: lattice phase {lattice.phase}")
        half = wintner_check(n, geo.L1 / (2 * n), 1j * geo.L2 / n)
        if half.consistent or abs(half.phase - 1) <= witness:
            problems.append(f"N={n}: witness phase {half.phase}")
    detail = "; ".join(problems) if problems else (
        f"N<={n_max}: lattice pairs consistent, half-lattice witness "
        f"|phase-1| > {witness:g}")
    return CheckResult("Wintner obstruction", not problems, detail)


# --------------------------------------------------------------------------
# criterion 8: energy ladder

def check_energy_ladder(n_max: int = 6) -> CheckResult:
    tol0 = tolerances.get("rayleigh_ground_abs")
    tol1 = tolerances.get("energy_level1_abs")
    tol_eig = tolerances.get("eigen_residual_rel")
    problems = []
    for n in range(1, n_max + 1):
        geo = TorusGeometry.square(n)
        nx = default_resolution(geo)
        z = periodic_grid(geo, nx, nx)
        cell = (geo.L1 / nx) * (geo.L2 / nx)
        w = np.exp(-np.abs(z) ** 2)
        for psi in normalized_basis(geo):
            s0 = ground_section(psi)
            rq0 = rayleigh_quotient(s0)
            if abs(rq0) > tol0:
                problems.append(f"N={n} nu={psi.nu}: level-0 RQ {rq0:.1e}")
            s1 = raise_section(s0)
            rq1 = rayleigh_quotient(s1)
            if abs(rq1 - 2.0) > tol1:
                problems.append(f"N={n} nu={psi.nu}: level-1 RQ {rq1}")
            resid = apply_hamiltonian(s1) - 2.0 * s1
            num = math.sqrt(float(np.sum(w * np.abs(resid(z)) ** 2) * cell))
            den = math.sqrt(float(np.sum(w * np.abs(s1(z)) ** 2) * cell))
            if num / den > tol_eig:
                problems.append(f"N={n} nu={psi.nu}: eigen residual {num/den:.1e}")
    detail = "; ".join(problems) if problems else (
        f"N<={n_max}: E0 = 0 within {tol0:g}, E1 = 2 hbar*omega within {tol1:g}")
    return CheckResult("energy ladder", not problems, detail)


# --------------------------------------------------------------------------
# criterion 9: mesh cocycle theorem

def check_cocycle_theorem(mesh_sizes=(4, 8, 16),
                          flux_quanta=(1.0, 3.0, 1.5)) -> CheckResult:
    tol_id = tolerances.get("triangle_identity_rel")
    tol_sum = tolerances.get("cocycle_sum_rel")
    problems = []
    for quanta in flux_quanta:
        b = 2 * math.pi * quanta   # on the unit torus, flux = B
        for n in mesh_sizes:
            mesh = uniform_mesh(n, 1.0, 1.0, b)
            for t in range(mesh.n_triangles):
                lhs, rhs = triangle_identity(mesh, t)
                if abs(lhs - rhs) > tol_id * abs(lhs) + 1e-14:
                    problems.append(f"flux {quanta}: triangle {t} identity")
                    break
            result = total_flux(mesh)
            if not result.theorem_holds:
                problems.append(f"flux {quanta} n={n}: sum {result.sum_cocycles} "
                                f"!= {result.flux}")
            expect_integral = abs(quanta - round(quanta)) < 1e-12
            if result.weil_integral != expect_integral:
                problems.append(f"flux {quanta} n={n}: Weil verdict "
                                f"{result.weil_integral}")
    detail = "; ".join(problems) if problems else (
        f"meshes 2x{{{','.join(str(n)+'^2' for n in mesh_sizes)}}}: identity holds, "
        f"sum c = flux within {tol_sum:g}, Weil verdicts correct")
    return CheckResult("mesh flux theorem", not problems, detail)


# --------------------------------------------------------------------------
# criterion 10: quadrature convergence

def check_quadrature_convergence(n_max: int = 10) -> CheckResult:
    tol = tolerances.get("quadrature_doubling_abs")
    worst = 0.0
    for n in range(1, n_max + 1):
        geo = TorusGeometry.square(n)
        basis = normalized_basis(geo)
        nx = default_resolution(geo)
        g1 = gram_matrix(basis, nx, nx)
        g2 = gram_matrix(basis, 2 * nx, 2 * nx)
        worst = max(worst, float(np.max(np.abs(g1 - g2))))
    return CheckResult("quadrature convergence", worst < tol,
                       f"max inner-product change on doubling: {worst:.2e} "
                       f"(tol {tol:g})", {"worst": worst})


# --------------------------------------------------------------------------

ALL_CHECKS = (
    ("1", check_flux_gate),
    ("2", check_ground_dimension),
    ("3", check_poisson_duality),
    ("4", check_boundary),
    ("5", check_symmetry_breaking),
    ("6", check_translation_algebra),
    ("7", check_wintner),
    ("8", check_energy_ladder),
    ("9", check_cocycle_theorem),
    ("10", check_quadrature_convergence),
)


def run_acceptance(n_max: int = 6, seed: int = DEFAULT_SEED,
                   fault_phases=None) -> list[CheckResult]:
    """Run every check, capped at n_max flux quanta where applicable."""
    results = [
        check_flux_gate(min(n_max, 10)),
        check_ground_dimension(min(n_max, 10)),
        check_poisson_duality(min(n_max, 10), seed=seed),
        check_boundary(min(n_max, 10), fault_phases=fault_phases),
        check_symmetry_breaking(min(n_max, 10),
                                figure_ns=tuple(n for n in (1, 3, 6, 10)
                                                if n <= n_max)),
        check_translation_algebra(min(n_max, 6)),
        check_wintner(min(n_max, 10)),
        check_energy_ladder(min(n_max, 6)),
        check_cocycle_theorem(),
        check_quadrature_convergence(min(n_max, 10)),
    ]
    return results
