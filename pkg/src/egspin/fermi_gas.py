"""The ideal Fermi gas: occupations, chemical potential and the pair function.

Lengths are measured in units of 1/k_F (``x = k_F r``), energies in units of
the Fermi energy and temperatures in units of the Fermi temperature. The
density is held fixed, so ``k_F`` and ``T_F`` do not depend on temperature and
the chemical potential is re-solved at every temperature.
"""
from dataclasses import dataclass
import enum
import math

from . import numerics
from ._backend import kernels
from ._pykernels import TAIL_LOG, occupation as _fermi
from .errors import DomainError

__all__ = [
    "Dimension",
    "PairMethod",
    "ThermalState",
    "PairFunctionValue",
    "ZERO_T",
    "occupation",
    "density",
    "density_residual",
    "solve_chemical_potential",
    "sommerfeld_mu",
    "f_zero_T",
    "f_finite_T",
    "f_sommerfeld",
    "delta_f_sommerfeld",
    "sum_rule_residual",
]

# Tighter than the default: the normalization residual must stay below 1e-10.
MU_QUADRATURE = numerics.QuadratureSpec(abs_tol=1e-13, rel_tol=1e-13, max_depth=60)
MU_TOL = 1e-14


class Dimension(enum.IntEnum):
    TWO = 2
    THREE = 3


class PairMethod(str, enum.Enum):
    ANALYTIC_T0 = "analytic_T0"
    QUADRATURE = "quadrature"
    SOMMERFELD_SHIFTED = "sommerfeld_shifted"


@dataclass(frozen=True)
class ThermalState:
    """Reduced temperature ``T/T_F`` and the matching ``mu/eps_F``.

    Build instances with :func:`solve_chemical_potential`; constructing one
    by hand skips the density normalization.
    """

    t_rel: float
    mu_rel: float

    def __post_init__(self):
        if not self.t_rel >= 0:
            raise DomainError(f"t_rel must be >= 0, got {self.t_rel}")
        if self.t_rel == 0 and self.mu_rel != 1.0:
            raise DomainError("at t_rel = 0 the chemical potential must equal 1")


ZERO_T = ThermalState(0.0, 1.0)


@dataclass(frozen=True)
class PairFunctionValue:
    x: float
    f: float
    method: PairMethod


def occupation(x_energy, thermal):
    """Mean occupation of a state with energy ``x_energy`` (units of eps_F)."""
    if x_energy < 0:
        raise DomainError(f"energy must be >= 0, got {x_energy}")
    if thermal.t_rel == 0:
        if x_energy < 1.0:
            return 1.0
        return 0.5 if x_energy == 1.0 else 0.0
    return _fermi(x_energy, thermal.mu_rel, thermal.t_rel)


def density(mu_rel, t_rel, spec=MU_QUADRATURE):
    """Particle density relative to the T = 0 gas, ``(3/2) int sqrt(u) n(u) du``."""
    if t_rel == 0:
        return max(mu_rel, 0.0) ** 1.5
    return kernels.pair_function(0.0, mu_rel, t_rel, spec.abs_tol, spec.rel_tol, spec.max_depth)


def density_residual(thermal, spec=MU_QUADRATURE):
    """Normalization error ``density - 1`` of a thermal state."""
    return density(thermal.mu_rel, thermal.t_rel, spec) - 1.0


def sommerfeld_mu(t_rel):
    """Leading low-temperature chemical potential ``1 - (pi^2/12) t^2``."""
    return 1.0 - math.pi ** 2 / 12.0 * t_rel * t_rel


def solve_chemical_potential(t_rel, spec=MU_QUADRATURE):
    """Chemical potential that keeps the density at its T = 0 value."""
    if not t_rel >= 0:
        raise DomainError(f"t_rel must be >= 0, got {t_rel}")
    t_rel = float(t_rel)
    if t_rel == 0.0:
        return ZERO_T

    def residual(mu):
        return density(mu, t_rel, spec) - 1.0

    # mu < 1 for every t > 0; step down until the density drops below 1
    hi = 1.0
    step = max(1.0, 2.0 * t_rel)
    lo = hi - step
    while residual(lo) > 0.0:
        hi = lo
        step *= 2.0
        lo = hi - step
    mu = numerics.find_root(residual, lo, hi, tol=MU_TOL)
    return ThermalState(t_rel, mu)


def _zero_t_value(x, dim):
    if x == 0.0:
        return 1.0
    if dim == Dimension.THREE:
        return 3.0 * numerics.spherical_j1(x) / x
    return 2.0 * numerics.bessel_J1(x) / x


def f_zero_T(x, dim=Dimension.THREE):
    """Closed-form pair function of the filled Fermi sea."""
    if x < 0:
        raise DomainError(f"x = k_F r must be >= 0, got {x}")
    return PairFunctionValue(x, _zero_t_value(x, Dimension(dim)), PairMethod.ANALYTIC_T0)


def f_finite_T(x, thermal, spec=numerics.DEFAULT_QUADRATURE):
    """Pair function of the three-dimensional gas at temperature ``thermal``.

    The Fourier integral over the Fermi-Dirac occupation is evaluated panel by
    panel between the zeros of the sine, so each panel has a smooth,
    single-signed integrand.
    """
    if x < 0:
        raise DomainError(f"x = k_F r must be >= 0, got {x}")
    f = kernels.pair_function(
        float(x), thermal.mu_rel, thermal.t_rel, spec.abs_tol, spec.rel_tol, spec.max_depth
    )
    return PairFunctionValue(x, f, PairMethod.QUADRATURE)


def delta_f_sommerfeld(x, t_rel):
    """Leading-order (T^2) thermal shift of f at separation ``x``."""
    if not x > 0:
        raise DomainError(f"Sommerfeld shift needs x > 0, got {x}")
    return math.pi ** 2 / 8.0 * (math.cos(x) - math.sin(x) / x) * t_rel * t_rel


def f_sommerfeld(x, t_rel):
    """Zero-temperature f plus its Sommerfeld shift."""
    f = _zero_t_value(x, Dimension.THREE) + delta_f_sommerfeld(x, t_rel)
    return PairFunctionValue(x, f, PairMethod.SOMMERFELD_SHIFTED)


def sum_rule_residual(thermal, x_max, n_panels=64, spec=numerics.DEFAULT_QUADRATURE):
    """Truncated sum rule ``(2/(3 pi)) int_0^x_max u^2 f(u)^2 du - 1``.

    At T = 0 the full integral equals 1 and the residual is the negative
    truncation tail, roughly ``-3 / (pi x_max)``. At T > 0 the complete
    integral is ``3 int s^2 n(s^2)^2 ds`` (< 1) because the occupations are
    no longer idempotent.
    """
    if n_panels < 1:
        raise DomainError("n_panels must be >= 1")
    if thermal.t_rel == 0:
        def integrand(u):
            f = _zero_t_value(u, Dimension.THREE)
            return u * u * f * f
    else:
        def integrand(u):
            f = f_finite_T(u, thermal, spec).f
            return u * u * f * f
    h = x_max / n_panels
    total = 0.0
    for i in range(n_panels):
        total += numerics.integrate(integrand, i * h, (i + 1) * h, spec)
    return 2.0 / (3.0 * math.pi) * total - 1.0


def tail_cutoff(thermal):
    """Upper energy cutoff where the occupation falls below 1e-12."""
    if thermal.t_rel == 0:
        return 1.0
    return thermal.mu_rel + thermal.t_rel * TAIL_LOG
