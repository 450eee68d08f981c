"""Torus geometry, natural units, and the flux quantization gate.

Everything downstream works in natural units: lengths in sqrt(hbar/(m*omega))
with omega = e*B/(2*m*c) the Larmor frequency, energies in hbar*omega.  In
these units the Hermitian weight is exp(-|z|^2) and flux quantization reads
L1*L2 = N*pi with N the number of flux quanta through the torus.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import NonIntegralFlux

# CGS-Gaussian constants for the default carrier (electron)
E_CHARGE = 4.80320425e-10   # statC
M_ELECTRON = 9.1093837015e-28  # g
HBAR = 1.054571817e-27      # erg*s
C_LIGHT = 2.99792458e10     # cm/s

# Integrality gate on physical input (flux carries measurement noise); the
# constructed TorusGeometry is held to the much tighter _AREA_RTOL.
FLUX_INT_RTOL = 1e-9
_AREA_RTOL = 1e-12


@dataclass(frozen=True)
class PhysicalConfig:
    """Physical description of the system in CGS-Gaussian units.

    Args:
        B: magnetic field strength (gauss)
        L1_phys, L2_phys: torus sides (cm)
        e, m, hbar, c: particle charge, mass and physical constants;
            default to the electron values.
    """

    B: float
    L1_phys: float
    L2_phys: float
    e: float = E_CHARGE
    m: float = M_ELECTRON
    hbar: float = HBAR
    c: float = C_LIGHT

    def __post_init__(self):
        for name in ("B", "L1_phys", "L2_phys", "e", "m", "hbar", "c"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be strictly positive")

    @property
    def length_unit(self) -> float:
        """Natural length sqrt(hbar/(m*omega)) with omega = e*B/(2*m*c)."""
        omega = self.e * self.B / (2 * self.m * self.c)
        return math.sqrt(self.hbar / (self.m * omega))


@dataclass(frozen=True)
class TorusGeometry:
    """Rectangular torus in natural units with N flux quanta.

    Invariants: L1, L2 > 0 and L1*L2 = N*pi to relative precision 1e-12,
    enforced at construction.  Instances are immutable and safe to share
    across threads.
    """

    L1: float
    L2: float
    N: int

    def __post_init__(self):
        if not (self.L1 > 0 and self.L2 > 0):
            raise ValueError("torus sides must be strictly positive")
        if not (isinstance(self.N, int) and self.N >= 1):
            raise ValueError("flux quantum count N must be a positive integer")
        area = self.L1 * self.L2
        if abs(area - self.N * math.pi) > _AREA_RTOL * self.N * math.pi:
            raise NonIntegralFlux(area / math.pi)

    @classmethod
    def square(cls, N: int) -> "TorusGeometry":
        side = math.sqrt(N * math.pi)
        return cls(side, side, N)

    @classmethod
    def with_aspect(cls, N: int, ratio: float) -> "TorusGeometry":
        """Torus with L1/L2 = ratio and N flux quanta."""
        L1 = math.sqrt(N * math.pi * ratio)
        return cls(L1, N * math.pi / L1, N)

    @property
    def area(self) -> float:
        return self.L1 * self.L2


def dirac_quantize(L1: float, L2: float) -> int:
    """Number of flux quanta for a torus with natural-unit sides L1, L2.

    Returns N = L1*L2/pi when that is an integer >= 1 within relative
    tolerance 1e-9; raises NonIntegralFlux otherwise (the exception records
    the fractional part).
    """
    if not (L1 > 0 and L2 > 0):
        raise ValueError("torus sides must be strictly positive")
    ratio = L1 * L2 / math.pi
    n = round(ratio)
    if n < 1 or abs(ratio - n) > FLUX_INT_RTOL * max(1.0, abs(ratio)):
        raise NonIntegralFlux(ratio)
    return n


def to_natural(cfg: PhysicalConfig) -> TorusGeometry:
    """Convert a physical configuration to natural units.

    The flux B*L1*L2 must be an integer multiple of hc/e within relative
    tolerance 1e-9.  Input float noise inside that gate is absorbed by an
    aspect-preserving rescale so the returned geometry satisfies
    L1*L2 = N*pi exactly (to 1e-12).
    """
    unit = cfg.length_unit
    L1 = cfg.L1_phys / unit
    L2 = cfg.L2_phys / unit
    n = dirac_quantize(L1, L2)
    snap = math.sqrt(n * math.pi / (L1 * L2))
    return TorusGeometry(L1 * snap, L2 * snap, n)


def parse_config(text: str) -> dict:
    """Parse a line-based key=value configuration.

    Recognized keys: B, L1, L2, units (natural|physical), N.  Blank lines
    and '#' comments are ignored.  Values are returned as float (N as int,
    units as str); unknown keys raise ValueError.
    """
    known = {"B", "L1", "L2", "units", "N"}
    out: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected key=value, got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in known:
            raise ValueError(f"line {lineno}: unknown key {key!r}")
        if key == "units":
            if value not in ("natural", "physical"):
                raise ValueError(f"line {lineno}: units must be natural|physical")
            out[key] = value
        elif key == "N":
            out[key] = int(value)
        else:
            out[key] = float(value)
    return out


def resolve_geometry(options: dict) -> TorusGeometry:
    """Build a TorusGeometry from config/CLI options.

    Precedence: with units=physical, B/L1/L2 are physical and converted via
    to_natural.  With units=natural (default): explicit L1 and L2 determine
    N through dirac_quantize; N alone selects the square torus; N plus one
    side fixes the other through L1*L2 = N*pi.  A supplied N must agree with
    the sides.
    """
    units = options.get("units", "natural")
    n = options.get("N")
    L1 = options.get("L1")
    L2 = options.get("L2")
    if units == "physical":
        if options.get("B") is None or L1 is None or L2 is None:
            raise ValueError("physical units require B, L1 and L2")
        geo = to_natural(PhysicalConfig(B=options["B"], L1_phys=L1, L2_phys=L2))
        if n is not None and n != geo.N:
            raise ValueError(f"N={n} conflicts with quantized flux N={geo.N}")
        return geo
    if L1 is not None and L2 is not None:
        derived = dirac_quantize(L1, L2)
        if n is not None and n != derived:
            raise ValueError(f"N={n} conflicts with L1*L2/pi={derived}")
        return TorusGeometry(L1, L2, derived)
    if n is None:
        raise ValueError("specify N, or both L1 and L2")
    if L1 is not None:
        return TorusGeometry(L1, n * math.pi / L1, n)
    if L2 is not None:
        return TorusGeometry(n * math.pi / L2, L2, n)
    return TorusGeometry.square(n)
