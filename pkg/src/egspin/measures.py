"""Closed-form correlation measures of the two-spin Werner state.

All quantities are in bits. Functions take either ``f2`` (the squared pair
function) or the singlet fidelity ``F = (f2 + 1)/(4 - 2 f2)``.
"""
from dataclasses import asdict, dataclass
import math

from .errors import DomainError
from .numerics import binary_entropy, xlog2x
from .spin_state import werner_from_f2

__all__ = [
    "MeasureSet",
    "BELL_F2",
    "concurrence_closed",
    "entanglement_of_formation",
    "relative_entropy_entanglement",
    "mutual_information",
    "classical_correlation",
    "pair_distributions",
    "classify",
    "measure_set",
]

# p > 1/sqrt(2) rewritten in terms of f^2
BELL_F2 = 2.0 * (math.sqrt(2.0) - 1.0)
_BELL_P = 1.0 / math.sqrt(2.0)
_SLACK = 1e-12


def _f2(f2):
    if f2 < -_SLACK or f2 > 1.0 + _SLACK:
        raise DomainError(f"f^2 must lie in [0, 1], got {f2}")
    return min(max(f2, 0.0), 1.0)


def _fidelity(fidelity):
    if fidelity < 0.25 - _SLACK or fidelity > 1.0 + _SLACK:
        raise DomainError(f"fidelity must lie in [1/4, 1], got {fidelity}")
    return min(max(fidelity, 0.25), 1.0)


def concurrence_closed(f2):
    f2 = _f2(f2)
    return max(0.0, (2.0 * f2 - 1.0) / (2.0 - f2))


def entanglement_of_formation(c):
    if c < -_SLACK or c > 1.0 + _SLACK:
        raise DomainError(f"concurrence must lie in [0, 1], got {c}")
    c = min(max(c, 0.0), 1.0)
    return binary_entropy(0.5 * (1.0 + math.sqrt(1.0 - c * c)))


def relative_entropy_entanglement(fidelity):
    """Relative entropy of entanglement; zero for separable fidelities F < 1/2."""
    F = _fidelity(fidelity)
    if F < 0.5:
        return 0.0
    return 1.0 + xlog2x(F) + xlog2x(1.0 - F)


def mutual_information(fidelity):
    """Total correlation ``2 + F log F + (1 - F) log((1 - F)/3)``."""
    F = _fidelity(fidelity)
    rest = 1.0 - F
    return 2.0 + xlog2x(F) + 3.0 * xlog2x(rest / 3.0)


def classical_correlation(fidelity):
    """Total minus quantum correlation, ``I - E_RE``."""
    return mutual_information(fidelity) - relative_entropy_entanglement(fidelity)


def pair_distributions(f2):
    """Same-spin and opposite-spin pair distribution functions."""
    f2 = _f2(f2)
    return 0.5 * (1.0 - f2), 0.5


def classify(f2):
    """(entangled, violates Bell-CHSH) for the Werner state at ``f2``."""
    w = werner_from_f2(f2)
    return w.f2 > 0.5, w.p > _BELL_P


@dataclass(frozen=True)
class MeasureSet:
    f2: float
    p: float
    fidelity: float
    concurrence: float
    eof: float
    e_re: float
    mutual_info: float
    classical_corr: float
    g_parallel: float
    g_antiparallel: float
    entangled: bool
    bell_violating: bool

    def as_dict(self):
        return asdict(self)


def measure_set(f2):
    w = werner_from_f2(f2)
    c = concurrence_closed(w.f2)
    e_re = relative_entropy_entanglement(w.fidelity)
    info = mutual_information(w.fidelity)
    g_par, g_anti = pair_distributions(w.f2)
    entangled, bell = classify(w.f2)
    return MeasureSet(
        f2=w.f2,
        p=w.p,
        fidelity=w.fidelity,
        concurrence=c,
        eof=entanglement_of_formation(c),
        e_re=e_re,
        mutual_info=info,
        classical_corr=info - e_re,
        g_parallel=g_par,
        g_antiparallel=g_anti,
        entangled=entangled,
        bell_violating=bell,
    )
