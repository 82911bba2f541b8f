"""Two-spin reduced density matrix of the gas and matrix-level oracles.

Basis order is (up-up, up-down, down-up, down-down), i.e. index ``2*s1 + s2``
with 0 = up. All matrices are real.
"""
from dataclasses import dataclass
import math

import numpy as np

from .errors import DomainError
from .numerics import as_sym4, eigen_sym4, psd_sqrt4, xlog2x

__all__ = [
    "WernerParams",
    "TwoSpinDensityMatrix",
    "SIGMA_YY",
    "SINGLET",
    "werner_from_f2",
    "density_matrix",
    "partial_transpose",
    "min_pt_eigenvalue",
    "is_entangled_ppt",
    "wootters_concurrence",
    "von_neumann_entropy",
    "reduced_first",
    "reduced_second",
]

PPT_TOL = 1e-12

# sigma_y (x) sigma_y is real in this basis
SIGMA_YY = np.array(
    [
        [0.0, 0.0, 0.0, -1.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0, 0.0],
    ]
)
SINGLET = np.array([0.0, 1.0, -1.0, 0.0]) / math.sqrt(2.0)


@dataclass(frozen=True)
class WernerParams:
    """Werner-state parameters generated by the squared pair function.

    ``p`` is the singlet weight and ``fidelity`` the singlet overlap
    ``(3p + 1)/4``.
    """

    f2: float
    p: float
    fidelity: float


@dataclass(frozen=True, eq=False)
class TwoSpinDensityMatrix:
    m: np.ndarray

    def __post_init__(self):
        m = as_sym4(self.m)
        if abs(np.trace(m) - 1.0) > 1e-12:
            raise DomainError(f"density matrix trace is {np.trace(m)!r}, expected 1")
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "m", m)

    def __array__(self, dtype=None, copy=None):
        return self.m if dtype is None else self.m.astype(dtype)


def _check_f2(f2):
    if f2 < -1e-9 or f2 > 1.0 + 1e-9:
        raise DomainError(f"f^2 must lie in [0, 1], got {f2}")
    return min(max(float(f2), 0.0), 1.0)


def werner_from_f2(f2):
    f2 = _check_f2(f2)
    return WernerParams(f2, f2 / (2.0 - f2), (f2 + 1.0) / (4.0 - 2.0 * f2))


def density_matrix(params):
    """The 4x4 two-spin density matrix for the given Werner parameters."""
    f2 = params.f2
    norm = 4.0 - 2.0 * f2
    same = (1.0 - f2) / norm
    mixed = 1.0 / norm
    flip = -f2 / norm
    m = np.array(
        [
            [same, 0.0, 0.0, 0.0],
            [0.0, mixed, flip, 0.0],
            [0.0, flip, mixed, 0.0],
            [0.0, 0.0, 0.0, same],
        ]
    )
    return TwoSpinDensityMatrix(m)


def _matrix(rho):
    return rho.m if isinstance(rho, TwoSpinDensityMatrix) else as_sym4(rho)


def partial_transpose(rho):
    """Transpose on the second spin: (s1 s2, t1 t2) -> (s1 t2, t1 s2)."""
    r = _matrix(rho).reshape(2, 2, 2, 2)
    return r.transpose(0, 3, 2, 1).reshape(4, 4).copy()


def min_pt_eigenvalue(rho):
    return float(eigen_sym4(partial_transpose(rho))[0][-1])


def is_entangled_ppt(rho):
    """Peres-Horodecki test; states on the boundary count as separable."""
    return min_pt_eigenvalue(rho) < -PPT_TOL


def wootters_concurrence(rho):
    """Concurrence from the spin-flipped state, for any real two-qubit state.

    Uses the symmetric form ``sqrt(rho) rho~ sqrt(rho)``, whose eigenvalues
    are the squares of the usual lambda_i.
    """
    m = _matrix(rho)
    tilde = SIGMA_YY @ m @ SIGMA_YY
    root = psd_sqrt4(m)
    r = root @ tilde @ root
    w, _ = eigen_sym4(0.5 * (r + r.T))
    lam = np.sqrt(np.clip(w, 0.0, None))
    return max(0.0, float(lam[0] - lam[1] - lam[2] - lam[3]))


def von_neumann_entropy(rho):
    """Entropy in bits; accepts 2x2 single-spin states as well."""
    m = np.asarray(rho.m if isinstance(rho, TwoSpinDensityMatrix) else rho, dtype=float)
    if m.shape == (2, 2):
        mean = 0.5 * (m[0, 0] + m[1, 1])
        half = math.hypot(0.5 * (m[0, 0] - m[1, 1]), m[0, 1])
        w = (mean + half, mean - half)
    else:
        w, _ = eigen_sym4(m)
    return -sum(xlog2x(float(v)) for v in w)


def reduced_first(rho):
    """Single-spin state of the first electron (trace over the second)."""
    return np.einsum("ajbj->ab", _matrix(rho).reshape(2, 2, 2, 2))


def reduced_second(rho):
    return np.einsum("jajb->ab", _matrix(rho).reshape(2, 2, 2, 2))
