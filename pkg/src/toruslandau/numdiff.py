"""Finite-difference Wirtinger derivatives for independent cross-checks.

Sixth-order centered stencils on pointwise samples; used where a derivative
must NOT come from the termwise section calculus (holomorphy audits, the
Hamiltonian/translation commutation check).
"""

import numpy as np

_C1 = np.array([-1 / 60, 3 / 20, -3 / 4, 0.0, 3 / 4, -3 / 20, 1 / 60])
_C2 = np.array([1 / 90, -3 / 20, 3 / 2, -49 / 18, 3 / 2, -3 / 20, 1 / 90])
_OFFSETS = np.arange(-3, 4)

DEFAULT_STEP = 0.005


def wirtinger(f, z, h: float = DEFAULT_STEP):
    """(df/dz, df/dzbar) of a pointwise-evaluable f at complex points z."""
    z = np.asarray(z, dtype=complex)
    fx = sum(c * f(z + o * h) for c, o in zip(_C1, _OFFSETS)) / h
    fy = sum(c * f(z + 1j * o * h) for c, o in zip(_C1, _OFFSETS)) / h
    return (fx - 1j * fy) / 2, (fx + 1j * fy) / 2


def laplacian(f, z, h: float = DEFAULT_STEP):
    """d^2f/dx^2 + d^2f/dy^2 = 4 d/dz dbar f at complex points z."""
    z = np.asarray(z, dtype=complex)
    fxx = sum(c * f(z + o * h) for c, o in zip(_C2, _OFFSETS)) / h**2
    fyy = sum(c * f(z + 1j * o * h) for c, o in zip(_C2, _OFFSETS)) / h**2
    return fxx + fyy
