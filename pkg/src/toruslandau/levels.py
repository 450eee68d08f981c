"""Hermitian structure, quadrature, the level ladder, and density maps.

The gauge-invariant density of two sections is
h(s1, s2)(z) = exp(-|z|^2) conj(s1(z)) s2(z); it is doubly periodic for any
pair of sections obeying the twisted periodicity, so the inner product
<s1|s2> = integral of h over the fundamental domain is computed with the
equal-weight periodic trapezoid rule, which converges spectrally here.

Higher levels are built from the ground states with the covariant creation
operator (d/dz - zbar).  Sections are stored as polynomials in zbar with
holomorphic coefficient series,

    s(z) = sum_j conj(z)^j f_j(z),

on which d/dz, dbar and the creation operator act termwise:
(d/dz - zbar) maps {f_j} to {f_j' - f_{j-1}} and dbar maps it to
{(j+1) f_{j+1}}.  The Hamiltonian in units of hbar*omega (zero-point term
dropped) is H = -2 (d/dz - zbar) dbar, so level k has energy 2k.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import GeometryMismatch, ZeroNorm
from .geometry import TorusGeometry
from .lll_basis import ThetaBasisFunction, eval_derivative, normalized_basis


def default_resolution(geometry: TorusGeometry) -> int:
    """Default quadrature grid side: max(64, 16 N)."""
    return max(64, 16 * geometry.N)


def periodic_grid(geometry: TorusGeometry, nx: int, ny: int):
    """Periodic sample points z[j, i] = i*L1/nx + 1j*j*L2/ny (no endpoint)."""
    x = np.arange(nx) * (geometry.L1 / nx)
    y = np.arange(ny) * (geometry.L2 / ny)
    return x[None, :] + 1j * y[:, None]


def _resolve_grid(geometry, nx, ny):
    if nx is None:
        nx = default_resolution(geometry)
    if ny is None:
        ny = nx
    if nx < 4 or ny < 4:
        raise ValueError("grid resolution must be at least 4")
    return nx, ny


# ---------------------------------------------------------------------------
# sections: polynomials in zbar with holomorphic coefficients
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CoefficientSeries:
    """Linear combination of z-derivatives of ground-state sections.

    terms maps (basis function, derivative order) -> complex weight.  Closed
    under d/dz, addition and scalar multiplication, which is all the section
    calculus needs.
    """

    geometry: TorusGeometry
    terms: tuple

    @classmethod
    def from_basis(cls, psi: ThetaBasisFunction, order: int = 0, weight=1.0):
        return cls(psi.geometry, ((psi, order, complex(weight)),))

    @classmethod
    def zero(cls, geometry: TorusGeometry):
        return cls(geometry, ())

    def __call__(self, z, representation: str = "fourier"):
        acc = np.zeros(np.shape(z), dtype=complex)
        for psi, order, weight in self.terms:
            acc = acc + weight * eval_derivative(psi, z, order, representation)
        return acc

    def derivative(self) -> "CoefficientSeries":
        return CoefficientSeries(
            self.geometry,
            tuple((psi, order + 1, w) for psi, order, w in self.terms))

    def _merged(self, other_terms):
        acc = {}
        for psi, order, w in self.terms + tuple(other_terms):
            key = (psi, order)
            acc[key] = acc.get(key, 0j) + w
        items = tuple((psi, order, w) for (psi, order), w in acc.items() if w != 0)
        return CoefficientSeries(self.geometry, items)

    def __add__(self, other: "CoefficientSeries") -> "CoefficientSeries":
        return self._merged(other.terms)

    def __neg__(self) -> "CoefficientSeries":
        return self * (-1.0)

    def __sub__(self, other: "CoefficientSeries") -> "CoefficientSeries":
        return self._merged((psi, order, -w) for psi, order, w in other.terms)

    def __mul__(self, scalar) -> "CoefficientSeries":
        return CoefficientSeries(
            self.geometry,
            tuple((psi, order, w * complex(scalar)) for psi, order, w in self.terms))

    __rmul__ = __mul__

    @property
    def is_zero(self) -> bool:
        return not self.terms


@dataclass(frozen=True)
class PolynomialSection:
    """Section s(z) = sum_{j<=k} conj(z)^j f_j(z) of degree k.

    Degree-0 sections span the holomorphic ground level; each application of
    the creation operator raises the degree by one.  The zbar-coefficients
    f_j are CoefficientSeries, so the whole object is immutable and its
    evaluation pure.
    """

    geometry: TorusGeometry
    coeffs: tuple

    def __post_init__(self):
        if not self.coeffs:
            raise ValueError("a section needs at least one coefficient")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return all(f.is_zero for f in self.coeffs)

    def __call__(self, z, representation: str = "fourier"):
        zbar = np.conj(np.asarray(z, dtype=complex))
        acc = np.zeros(np.shape(z), dtype=complex)
        for f in reversed(self.coeffs):
            acc = acc * zbar + f(z, representation)
        return acc

    def __add__(self, other: "PolynomialSection") -> "PolynomialSection":
        if other.geometry != self.geometry:
            raise GeometryMismatch("sections live on different tori")
        k = max(len(self.coeffs), len(other.coeffs))
        zero = CoefficientSeries.zero(self.geometry)
        mine = list(self.coeffs) + [zero] * (k - len(self.coeffs))
        theirs = list(other.coeffs) + [zero] * (k - len(other.coeffs))
        return PolynomialSection(self.geometry,
                                 tuple(a + b for a, b in zip(mine, theirs)))

    def __mul__(self, scalar) -> "PolynomialSection":
        return PolynomialSection(self.geometry,
                                 tuple(f * scalar for f in self.coeffs))

    __rmul__ = __mul__

    def __sub__(self, other: "PolynomialSection") -> "PolynomialSection":
        return self + other * (-1.0)


def ground_section(psi: ThetaBasisFunction) -> PolynomialSection:
    """psi_nu wrapped as a degree-0 section."""
    return PolynomialSection(psi.geometry, (CoefficientSeries.from_basis(psi),))


def as_section(obj) -> PolynomialSection:
    if isinstance(obj, PolynomialSection):
        return obj
    if isinstance(obj, ThetaBasisFunction):
        return ground_section(obj)
    raise TypeError(f"cannot interpret {type(obj).__name__} as a section")


def raise_section(s: PolynomialSection) -> PolynomialSection:
    """Apply the covariant creation operator (d/dz - zbar).

    On the zbar-polynomial this sends {f_j} to {f_j' - f_{j-1}} and raises
    the degree by one; the boundary transformation law of the section is
    preserved.
    """
    s = as_section(s)
    zero = CoefficientSeries.zero(s.geometry)
    old = (zero,) + tuple(s.coeffs) + (zero,)
    new = []
    for j in range(len(s.coeffs) + 1):
        fj = s.coeffs[j].derivative() if j < len(s.coeffs) else zero
        new.append(fj - old[j])
    return PolynomialSection(s.geometry, tuple(new))


def dbar_section(s: PolynomialSection) -> PolynomialSection:
    """Termwise dbar: sum_j conj(z)^j f_j -> sum_j (j+1) conj(z)^j f_{j+1}."""
    s = as_section(s)
    if s.degree == 0:
        return PolynomialSection(s.geometry, (CoefficientSeries.zero(s.geometry),))
    new = tuple((j + 1) * s.coeffs[j + 1] for j in range(s.degree))
    return PolynomialSection(s.geometry, new)


def apply_hamiltonian(s: PolynomialSection) -> PolynomialSection:
    """H s with H = -2 (d/dz - zbar) dbar in units of hbar*omega."""
    return raise_section(dbar_section(as_section(s))) * (-2.0)


# ---------------------------------------------------------------------------
# Hermitian structure and quadrature
# ---------------------------------------------------------------------------

def _check_same_geometry(s1, s2):
    if s1.geometry != s2.geometry:
        raise GeometryMismatch("operands live on different tori")


def hermitian_density(s1, s2, z, representation: str = "fourier"):
    """Gauge-invariant density h(s1, s2)(z) = e^{-|z|^2} conj(s1(z)) s2(z).

    Doubly periodic and smooth across the seams for any pair of sections
    with matching boundary phases.
    """
    _check_same_geometry(s1, s2)
    z = np.asarray(z, dtype=complex)
    w = np.exp(-np.abs(z) ** 2)
    v1 = as_section(s1)(z, representation)
    v2 = v1 if s1 is s2 else as_section(s2)(z, representation)
    return w * np.conj(v1) * v2


def inner_product(s1, s2, nx: int | None = None, ny: int | None = None,
                  representation: str = "fourier") -> complex:
    """<s1|s2> by the periodic trapezoid rule on an nx x ny grid.

    The integrand is smooth and doubly periodic, so doubling the grid
    changes the result only at rounding level once resolved (default grid
    max(64, 16N) is well past that point).
    """
    _check_same_geometry(s1, s2)
    geo = s1.geometry
    nx, ny = _resolve_grid(geo, nx, ny)
    z = periodic_grid(geo, nx, ny)
    cell = (geo.L1 / nx) * (geo.L2 / ny)
    return complex(hermitian_density(s1, s2, z, representation).sum() * cell)


def gram_matrix(basis, nx: int | None = None, ny: int | None = None) -> np.ndarray:
    """Pairwise inner products, Hermitized by averaging with the adjoint."""
    if not basis:
        return np.zeros((0, 0), dtype=complex)
    geo = basis[0].geometry
    for s in basis[1:]:
        _check_same_geometry(basis[0], s)
    nx, ny = _resolve_grid(geo, nx, ny)
    z = periodic_grid(geo, nx, ny)
    cell = (geo.L1 / nx) * (geo.L2 / ny)
    w = np.exp(-np.abs(z) ** 2)
    vals = np.stack([as_section(s)(z).ravel() for s in basis])
    g = (np.conj(vals) * w.ravel()) @ vals.T * cell
    return (g + g.conj().T) / 2


def rayleigh_quotient(s, nx: int | None = None, ny: int | None = None) -> float:
    """<s|H|s>/<s|s> through the positive form 2 * integral e^{-|z|^2} |dbar s|^2.

    Zero exactly on the holomorphic ground level; 2k on level k.
    """
    s = as_section(s)
    geo = s.geometry
    nx, ny = _resolve_grid(geo, nx, ny)
    z = periodic_grid(geo, nx, ny)
    cell = (geo.L1 / nx) * (geo.L2 / ny)
    w = np.exp(-np.abs(z) ** 2)
    den = float(np.sum(w * np.abs(s(z)) ** 2) * cell)
    if not den > 0:
        raise ZeroNorm("section has vanishing quadrature norm")
    ds = dbar_section(s)
    num = 2 * float(np.sum(w * np.abs(ds(z)) ** 2) * cell)
    return num / den


# ---------------------------------------------------------------------------
# grid fields and density maps
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GridField:
    """Samples of a quantity on the periodic grid.

    values[j, i] is the sample at x = i*L1/nx, y = j*L2/ny (no duplicated
    endpoint); values has shape (ny, nx) and may be real or complex.
    """

    geometry: TorusGeometry
    name: str
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values)
        if v.ndim != 2 or v.shape[0] < 4 or v.shape[1] < 4:
            raise ValueError("GridField needs a 2-D array, at least 4x4")
        object.__setattr__(self, "values", v)

    @property
    def nx(self) -> int:
        return self.values.shape[1]

    @property
    def ny(self) -> int:
        return self.values.shape[0]

    def with_values(self, name: str, values) -> "GridField":
        return GridField(self.geometry, name, values)


@dataclass(frozen=True)
class DensityMap:
    """rho and its deviation-from-uniformity diagnostics for one level."""

    rho: GridField
    deviation: GridField          # (rho - mean)/mean
    mean: float
    max_deviation: float          # max |rho - mean|

    @property
    def relative_deviation(self) -> float:
        """d = max_z |rho(z) - mean| / mean, the symmetry-breaking measure."""
        return self.max_deviation / self.mean


def level_basis(geometry: TorusGeometry, level: int,
                nx: int | None = None, ny: int | None = None) -> list[PolynomialSection]:
    """Quadrature-normalized basis of the requested Landau level (0 or 1)."""
    if level not in (0, 1):
        raise ValueError("only levels 0 and 1 are supported")
    sections = [ground_section(p) for p in normalized_basis(geometry, nx, ny)]
    if level == 1:
        raised = [raise_section(s) for s in sections]
        sections = []
        for s in raised:
            nrm = np.sqrt(float(np.real(inner_product(s, s, nx, ny))))
            sections.append(s * (1.0 / nrm))
    return sections


def density_map(geometry: TorusGeometry, level: int = 0,
                nx: int | None = None, ny: int | None = None,
                representation: str = "fourier") -> DensityMap:
    """rho(z) = sum_nu h(s_nu, s_nu)(z) for the normalized level basis.

    The Hermitian weight is included, making rho a genuine function on the
    torus.  Breaking of continuous translation symmetry shows up as bumps of
    the deviation field on the lattice (n1 L1 + i n2 L2)/N.
    """
    nx, ny = _resolve_grid(geometry, nx, ny)
    z = periodic_grid(geometry, nx, ny)
    w = np.exp(-np.abs(z) ** 2)
    rho = np.zeros(z.shape, dtype=float)
    for s in level_basis(geometry, level, nx, ny):
        rho += w * np.abs(s(z, representation)) ** 2
    mean = float(rho.mean())
    dev = rho / mean - 1.0
    return DensityMap(
        rho=GridField(geometry, f"rho_level{level}", rho),
        deviation=GridField(geometry, f"deviation_level{level}", dev),
        mean=mean,
        max_deviation=float(np.max(np.abs(rho - mean))),
    )


def local_extrema(values: np.ndarray) -> np.ndarray:
    """Boolean mask of periodic local extrema (max or min over 8 neighbours)."""
    v = np.asarray(values)
    is_max = np.ones(v.shape, dtype=bool)
    is_min = np.ones(v.shape, dtype=bool)
    for dx in (-1, 0, 1):
        for dy in (-1, 0, 1):
            if dx == 0 and dy == 0:
                continue
            nb = np.roll(np.roll(v, dy, axis=0), dx, axis=1)
            is_max &= v >= nb
            is_min &= v <= nb
    return is_max | is_min


def deviation_decay(geometry_for, levels=(0,), n_values=range(1, 11),
                    nx: int | None = None) -> dict:
    """Table of d(N) per level plus a log-linear fit.

    geometry_for: callable N -> TorusGeometry.  Returns
    {level: {"d": array, "slope": b, "intercept": a, "fit_residual": r}}
    with r = rms(log d - fit) / rms(log d - mean), the fraction of the
    variation the affine fit fails to explain.
    """
    out = {}
    ns = np.asarray(list(n_values))
    for level in levels:
        ds = []
        for n in ns:
            geo = geometry_for(int(n))
            ds.append(density_map(geo, level, nx).relative_deviation)
        ds = np.asarray(ds)
        logd = np.log(ds)
        slope, intercept = np.polyfit(ns, logd, 1)
        resid = logd - (slope * ns + intercept)
        centered = logd - logd.mean()
        r = float(np.sqrt(np.mean(resid**2) / np.mean(centered**2)))
        out[level] = {"d": ds, "slope": float(slope),
                      "intercept": float(intercept), "fit_residual": r}
    return out
