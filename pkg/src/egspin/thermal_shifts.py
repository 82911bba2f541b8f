"""Low-temperature shifts of the pair function and the entanglement measures.

Every shift is measured against the T = 0 value at the same ``x = k_F r``
in the three-dimensional gas.
"""
from dataclasses import dataclass
import enum
import warnings

import numpy as np

from . import fermi_gas, measures
from .errors import DomainError
from .fermi_gas import Dimension
from .spin_state import werner_from_f2

__all__ = [
    "ShiftMethod",
    "ShiftRecord",
    "FirstOrderUnreliableWarning",
    "delta_f_numeric",
    "concurrence_slope",
    "delta_concurrence",
    "delta_relative_entropy",
    "shift_record",
    "power_law_exponent",
    "scaling_exponent",
]


class ShiftMethod(str, enum.Enum):
    NUMERIC = "numeric"
    FIRST_ORDER = "first_order"


class FirstOrderUnreliableWarning(UserWarning):
    """The linearized concurrence shift is used where C(x, 0) = 0."""


@dataclass(frozen=True)
class ShiftRecord:
    x: float
    t_rel: float
    delta_f: float
    delta_c: float
    delta_ere: float
    method: ShiftMethod


def _thermal(t_rel, thermal):
    if thermal is None:
        return fermi_gas.solve_chemical_potential(t_rel)
    if thermal.t_rel != t_rel:
        raise DomainError("thermal state does not match t_rel")
    return thermal


def _f_pair(x, t_rel, thermal=None):
    f0 = fermi_gas.f_zero_T(x, Dimension.THREE).f
    if t_rel == 0:
        return f0, f0
    ft = fermi_gas.f_finite_T(x, _thermal(t_rel, thermal)).f
    return f0, ft


def delta_f_numeric(x, t_rel, thermal=None):
    """``f(x, T) - f(x, 0)`` with f(x, T) from quadrature."""
    if x < 0 or t_rel < 0:
        raise DomainError("x and t_rel must be >= 0")
    f0, ft = _f_pair(x, t_rel, thermal)
    return ft - f0


def concurrence_slope(f0):
    """dC/df at f0 on the entangled branch: ``6 f / (2 - f^2)^2``."""
    return 6.0 * f0 / (2.0 - f0 * f0) ** 2


def delta_concurrence(x, t_rel, method=ShiftMethod.NUMERIC, thermal=None):
    """Thermal change of the concurrence, exact or linearized in the f shift."""
    method = ShiftMethod(method)
    f0, ft = _f_pair(x, t_rel, thermal)
    if method is ShiftMethod.NUMERIC:
        return measures.concurrence_closed(ft * ft) - measures.concurrence_closed(f0 * f0)
    if f0 * f0 <= 0.5:
        warnings.warn(
            f"first-order shift at x={x}: C(x, 0) = 0, linearization is unreliable",
            FirstOrderUnreliableWarning,
            stacklevel=2,
        )
    return concurrence_slope(f0) * (ft - f0)


def _ere(f):
    return measures.relative_entropy_entanglement(werner_from_f2(f * f).fidelity)


def delta_relative_entropy(x, t_rel, thermal=None):
    """Thermal change of the relative entropy of entanglement."""
    if x < 0 or t_rel < 0:
        raise DomainError("x and t_rel must be >= 0")
    f0, ft = _f_pair(x, t_rel, thermal)
    return _ere(ft) - _ere(f0)


def shift_record(x, t_rel, method=ShiftMethod.NUMERIC):
    """All three shifts at one point, sharing a single chemical-potential solve."""
    method = ShiftMethod(method)
    thermal = fermi_gas.solve_chemical_potential(t_rel)
    f0, ft = _f_pair(x, t_rel, thermal)
    delta_f = ft - f0
    if method is ShiftMethod.NUMERIC:
        delta_c = measures.concurrence_closed(ft * ft) - measures.concurrence_closed(f0 * f0)
    else:
        delta_c = delta_concurrence(x, t_rel, method, thermal)
    return ShiftRecord(x, t_rel, delta_f, delta_c, _ere(ft) - _ere(f0), method)


def power_law_exponent(t_values, deltas):
    """Least-squares slope of log|delta| against log t."""
    t = np.asarray(t_values, dtype=float)
    d = np.abs(np.asarray(deltas, dtype=float))
    if t.size < 3 or t.size != d.size:
        raise DomainError("need at least three (t, delta) pairs")
    if np.any(t <= 0):
        raise DomainError("temperatures must be positive for a log-log fit")
    if np.any(d == 0):
        raise DomainError("a shift is exactly zero; log-log fit is degenerate")
    lx = np.log(t)
    ly = np.log(d)
    lx_c = lx - lx.mean()
    return float(np.dot(lx_c, ly - ly.mean()) / np.dot(lx_c, lx_c))


_QUANTITIES = {
    "f": lambda x, t, th: delta_f_numeric(x, t, th),
    "c": lambda x, t, th: delta_concurrence(x, t, ShiftMethod.NUMERIC, th),
    "ere": lambda x, t, th: delta_relative_entropy(x, t, th),
}


def scaling_exponent(x, t_grid, quantity="f"):
    """Fitted power of T in the thermal shift of ``quantity`` ("f", "c" or "ere").

    The grid should stay in the low-temperature regime (t <= 0.05) where the
    T^2 term dominates.
    """
    try:
        delta = _QUANTITIES[quantity]
    except KeyError:
        raise DomainError(f"quantity must be one of {sorted(_QUANTITIES)}") from None
    t_grid = [float(t) for t in t_grid]
    if any(b <= a for a, b in zip(t_grid, t_grid[1:])):
        raise DomainError("t_grid must be strictly ascending")
    deltas = []
    for t in t_grid:
        thermal = fermi_gas.solve_chemical_potential(t)
        deltas.append(delta(x, t, thermal))
    return power_law_exponent(t_grid, deltas)
