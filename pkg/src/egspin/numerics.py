"""Numeric building blocks: special functions, quadrature, roots, 4x4 eigenproblems.

Everything downstream is built on these few routines. Information-theoretic
quantities use base-2 logarithms with the convention ``0 * log(0) = 0``.
"""
from dataclasses import dataclass
import math

import numpy as np

from . import _pykernels
from ._backend import kernels
from .errors import BracketError, ConvergenceError, DomainError, NotPSDError

__all__ = [
    "QuadratureSpec",
    "DEFAULT_QUADRATURE",
    "spherical_j1",
    "bessel_J1",
    "binary_entropy",
    "xlog2x",
    "integrate",
    "find_root",
    "as_sym4",
    "eigen_sym4",
    "psd_sqrt4",
]

EPS = np.finfo(float).eps

# Below this |x| the closed form of j1 loses more than ~1e-12 to cancellation.
J1_SERIES_CUTOFF = 0.1
# Ascending series for J1 up to here, Hankel asymptotics beyond.
J1_ASYMPTOTIC_FROM = 12.0


@dataclass(frozen=True)
class QuadratureSpec:
    """Per-panel tolerances and subdivision limit for :func:`integrate`."""

    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    max_depth: int = 40

    def __post_init__(self):
        if not self.abs_tol > 0:
            raise DomainError(f"abs_tol must be positive, got {self.abs_tol}")
        if not self.rel_tol > 0:
            raise DomainError(f"rel_tol must be positive, got {self.rel_tol}")
        if not 1 <= self.max_depth <= _pykernels.MAX_DEPTH:
            raise DomainError(
                f"max_depth must be in [1, {_pykernels.MAX_DEPTH}], got {self.max_depth}"
            )


DEFAULT_QUADRATURE = QuadratureSpec()


def spherical_j1(x):
    """Spherical Bessel function of the first kind, order 1."""
    if abs(x) < J1_SERIES_CUTOFF:
        # x * sum_k (-x^2/2)^k / (k! (2k+3)!!)
        y = -0.5 * x * x
        term = 1.0 / 3.0
        total = term
        k = 0
        while abs(term) > 1e-17 * abs(total):
            k += 1
            term *= y / (k * (2 * k + 3))
            total += term
        return x * total
    return math.sin(x) / (x * x) - math.cos(x) / x


def _j1_series(x):
    # sum_k (-1)^k (x/2)^(2k+1) / (k! (k+1)!)
    y = -0.25 * x * x
    term = 0.5 * x
    total = term
    k = 0
    while abs(term) > 1e-17 * abs(total) or k < 2:
        k += 1
        term *= y / (k * (k + 1))
        total += term
    return total


def _j1_hankel(x):
    # J1 = sqrt(2/(pi x)) (P cos chi - Q sin chi), chi = x - 3 pi / 4,
    # with the asymptotic series summed up to its smallest term.
    mu = 4.0
    p = 1.0
    q = 0.0
    a = 1.0
    prev = math.inf
    for k in range(1, 60):
        a *= (mu - (2 * k - 1) ** 2) / (8.0 * k * x)
        if abs(a) >= prev:
            break
        prev = abs(a)
        # a_k / x^k enters P (even k) or Q (odd k) with alternating signs
        if k % 2 == 1:
            q += a if (k // 2) % 2 == 0 else -a
        else:
            p += -a if (k // 2) % 2 == 1 else a
        if abs(a) < 1e-17:
            break
    chi = x - 0.75 * math.pi
    return math.sqrt(2.0 / (math.pi * x)) * (p * math.cos(chi) - q * math.sin(chi))


def bessel_J1(x):
    """Bessel function of the first kind J1 for real x >= 0."""
    if x < 0:
        raise DomainError(f"bessel_J1 expects x >= 0, got {x}")
    if x <= J1_ASYMPTOTIC_FROM:
        return _j1_series(x)
    return _j1_hankel(x)


def xlog2x(x):
    """x * log2(x) with the 0 * log 0 = 0 convention."""
    return 0.0 if x <= 0.0 else x * math.log2(x)


def binary_entropy(x):
    """Shannon entropy in bits of a two-outcome distribution (x, 1 - x)."""
    if x < -1e-12 or x > 1.0 + 1e-12:
        raise DomainError(f"binary_entropy expects x in [0, 1], got {x}")
    x = min(max(x, 0.0), 1.0)
    return max(0.0, -xlog2x(x) - xlog2x(1.0 - x))


def integrate(f, a, b, spec=DEFAULT_QUADRATURE):
    """Integrate ``f`` over ``[a, b]`` by adaptive 15-point Gauss-Kronrod.

    Raises QuadratureError (carrying the best estimate and the unresolved
    panel) when a panel still fails its tolerance at ``spec.max_depth``.
    """
    if not a <= b:
        raise DomainError(f"integrate expects a <= b, got a={a}, b={b}")
    return _pykernels.gk_adaptive(f, a, b, spec.abs_tol, spec.rel_tol, spec.max_depth)


def find_root(f, lo, hi, tol=1e-12, max_iter=200):
    """Brent's method: a root of ``f`` in ``[lo, hi]`` located to within ``tol``.

    The final bracket ``[b, c]`` satisfies ``|c - b| <= tol + 4*eps*|b|`` and
    ``f(b) * f(c) <= 0``; ``b`` is returned.
    """
    a, b = float(lo), float(hi)
    fa, fb = f(a), f(b)
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if (fa > 0.0) == (fb > 0.0):
        raise BracketError(
            f"no sign change on [{lo}, {hi}]: f(lo)={fa!r}, f(hi)={fb!r}"
        )
    c, fc = a, fa
    d = e = b - a
    for _ in range(max_iter):
        if (fb > 0.0) == (fc > 0.0):
            c, fc = a, fa
            d = e = b - a
        if abs(fc) < abs(fb):
            a, b, c = b, c, b
            fa, fb, fc = fb, fc, fb
        tol1 = 2.0 * EPS * abs(b) + 0.5 * tol
        xm = 0.5 * (c - b)
        if abs(xm) <= tol1 or fb == 0.0:
            return b
        if abs(e) >= tol1 and abs(fa) > abs(fb):
            s = fb / fa
            if a == c:
                p = 2.0 * xm * s
                q = 1.0 - s
            else:
                q = fa / fc
                r = fb / fc
                p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0))
                q = (q - 1.0) * (r - 1.0) * (s - 1.0)
            if p > 0.0:
                q = -q
            p = abs(p)
            if 2.0 * p < min(3.0 * xm * q - abs(tol1 * q), abs(e * q)):
                e = d
                d = p / q
            else:
                d = xm
                e = d
        else:
            d = xm
            e = d
        a, fa = b, fb
        b += d if abs(d) > tol1 else math.copysign(tol1, xm)
        fb = f(b)
    raise ConvergenceError(f"find_root did not converge in {max_iter} iterations")


def as_sym4(m, tol=1e-14):
    """Return ``m`` as a float 4x4 array after checking it is symmetric."""
    m = np.asarray(m, dtype=float)
    if m.shape != (4, 4):
        raise DomainError(f"expected a 4x4 matrix, got shape {m.shape}")
    scale = max(1.0, float(np.max(np.abs(m))))
    if np.max(np.abs(m - m.T)) > tol * scale:
        raise DomainError("matrix is not symmetric")
    return m


def eigen_sym4(m):
    """Eigen-decomposition of a real symmetric 4x4 matrix by cyclic Jacobi.

    Returns ``(w, v)``: eigenvalues in descending order and an orthonormal
    matrix whose columns are the matching eigenvectors.
    """
    m = as_sym4(m)
    w, v = kernels.eigh4(m.ravel().tolist())
    return np.array(w), np.array(v).reshape(4, 4)


def psd_sqrt4(m):
    """Principal square root of a symmetric positive semidefinite 4x4 matrix."""
    w, v = eigen_sym4(m)
    if w[-1] < -1e-9:
        raise NotPSDError(f"matrix has eigenvalue {w[-1]!r} < -1e-9")
    root = np.sqrt(np.clip(w, 0.0, None))
    return (v * root) @ v.T
