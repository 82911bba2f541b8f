"""Self-checks run by ``egspin validate``.

Each check returns ``(passed, detail)``. Library functions are looked up
through their modules at call time, so a patched function is what gets
checked.
"""
from dataclasses import dataclass
import math
import time

import numpy as np

from . import fermi_gas, measures, numerics, spin_state, thermal_shifts
from .errors import EgspinError

SEED = 20040101
LOW_T_GRID = (0.01, 0.02, 0.03, 0.04, 0.05)
SOMMERFELD_RATIO_X1 = math.pi ** 2 / 8.0 * (math.cos(1.0) - math.sin(1.0))


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float


def check_quadrature_polynomials(quick):
    worst = 0.0
    for degree in range(0, 21, 4 if quick else 1):
        exact = 1.0 / (degree + 1)
        got = numerics.integrate(lambda u, d=degree: u ** d, 0.0, 1.0)
        worst = max(worst, abs(got - exact))
    return worst <= 1e-14, f"max error {worst:.2e} (limit 1e-14)"


def check_eigensolver(quick):
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for _ in range(100 if quick else 1000):
        a = rng.uniform(-1.0, 1.0, (4, 4))
        m = 0.5 * (a + a.T)
        w, v = numerics.eigen_sym4(m)
        worst = max(worst, np.linalg.norm(m - (v * w) @ v.T), abs(np.trace(m) - w.sum()))
    return worst <= 1e-12, f"max reconstruction error {worst:.2e} (limit 1e-12)"


def check_special_functions(quick):
    root = numerics.find_root(numerics.spherical_j1, 4.0, 5.0, tol=1e-14)
    j1_root = numerics.find_root(numerics.bessel_J1, 3.5, 4.0, tol=1e-14)
    gap = max(
        abs(numerics.spherical_j1(x) - (math.sin(x) / x ** 2 - math.cos(x) / x))
        for x in np.linspace(0.1, 0.12, 21)
    )
    ok = (
        abs(root - 4.493409457909064) < 1e-12
        and abs(j1_root - 3.8317059702075125) < 1e-9
        and gap < 1e-12
    )
    return ok, f"j1 root {root:.15f}, J1 root {j1_root:.13f}, crossover gap {gap:.1e}"


def check_normalization(quick):
    worst_res = worst_f = 0.0
    for t in (0.05, 0.1, 0.2):
        thermal = fermi_gas.solve_chemical_potential(t)
        worst_res = max(worst_res, abs(fermi_gas.density_residual(thermal)))
        worst_f = max(worst_f, abs(fermi_gas.f_finite_T(0.0, thermal).f - 1.0))
    ok = worst_res <= 1e-10 and worst_f <= 1e-8
    return ok, f"max residual {worst_res:.1e}, max |f(0,T) - 1| {worst_f:.1e}"


def check_mu_low_t(quick):
    # three-term low-temperature series of mu in three dimensions
    worst = 0.0
    for t in (0.05, 0.1):
        mu = fermi_gas.solve_chemical_potential(t).mu_rel
        series = (
            fermi_gas.sommerfeld_mu(t)
            - math.pi ** 4 / 80.0 * t ** 4
            - 247.0 * math.pi ** 6 / 25920.0 * t ** 6
        )
        worst = max(worst, abs(mu - series))
    return worst <= 5e-6, f"max |mu - three-term series| {worst:.1e} (limit 5e-6)"


def check_zero_t_consistency(quick):
    worst = max(
        abs(fermi_gas.f_finite_T(x, fermi_gas.ZERO_T).f - fermi_gas.f_zero_T(x).f)
        for x in (0.1, 0.5, 1.0, 2.0, 5.0, 10.0)
    )
    return worst <= 1e-8, f"max deviation {worst:.1e} (limit 1e-8)"


def check_werner_oracles(quick):
    rng = np.random.default_rng(SEED + 1)
    worst_c = worst_i = 0.0
    ppt_ok = True
    for f2 in rng.uniform(0.0, 1.0, 100 if quick else 500):
        w = spin_state.werner_from_f2(f2)
        rho = spin_state.density_matrix(w)
        worst_c = max(
            worst_c,
            abs(spin_state.wootters_concurrence(rho) - measures.concurrence_closed(f2)),
        )
        worst_i = max(
            worst_i,
            abs(2.0 - spin_state.von_neumann_entropy(rho) - measures.mutual_information(w.fidelity)),
        )
        if abs(f2 - 0.5) > 1e-9:
            ppt_ok &= spin_state.is_entangled_ppt(rho) == (f2 > 0.5)
    ok = worst_c <= 1e-10 and worst_i <= 1e-10 and ppt_ok
    return ok, f"concurrence {worst_c:.1e}, mutual information {worst_i:.1e}, PPT flags {'ok' if ppt_ok else 'WRONG'}"


def check_thresholds(quick):
    ok = (
        measures.classify(0.9) == (True, True)
        and measures.classify(0.6) == (True, False)
        and measures.classify(0.3) == (False, False)
        and abs(spin_state.min_pt_eigenvalue(spin_state.density_matrix(spin_state.werner_from_f2(0.5)))) < 1e-12
    )
    return ok, "classify(0.9, 0.6, 0.3) and PPT boundary at f^2 = 1/2"


def check_sum_rule(quick):
    r200 = fermi_gas.sum_rule_residual(fermi_gas.ZERO_T, 200.0, n_panels=128)
    r50 = fermi_gas.sum_rule_residual(fermi_gas.ZERO_T, 50.0, n_panels=32)
    return abs(r200) < 5e-3 and abs(r50) < 2e-2, f"residual {r200:.2e} at 200, {r50:.2e} at 50"


def check_sommerfeld(quick):
    dev = {}
    for t in (0.02, 0.05):
        ratio = thermal_shifts.delta_f_numeric(1.0, t) / t ** 2
        dev[t] = abs(ratio / SOMMERFELD_RATIO_X1 - 1.0)
    ok = dev[0.02] < 0.01 and dev[0.05] < 0.05
    return ok, f"relative deviation {dev[0.02]:.2e} at t=0.02, {dev[0.05]:.2e} at t=0.05"


def check_scaling(quick):
    exps = {q: thermal_shifts.scaling_exponent(1.0, LOW_T_GRID, q) for q in ("f", "c", "ere")}
    ok = all(1.9 <= e <= 2.1 for e in exps.values())
    return ok, ", ".join(f"{q}: {e:.4f}" for q, e in exps.items())


def check_first_order(quick):
    ts = (0.01, 0.02, 0.04)
    ratios = []
    for t in ts:
        thermal = fermi_gas.solve_chemical_potential(t)
        df = thermal_shifts.delta_f_numeric(1.0, t, thermal)
        exact = thermal_shifts.delta_concurrence(1.0, t, "numeric", thermal)
        linear = thermal_shifts.delta_concurrence(1.0, t, "first_order", thermal)
        ratios.append(abs(exact - linear) / df ** 2)
    spread = max(ratios) / min(ratios)
    return spread <= 2.0, f"remainder / delta_f^2 in [{min(ratios):.4f}, {max(ratios):.4f}]"


CHECKS = [
    ("quadrature_polynomials", check_quadrature_polynomials, True),
    ("eigensolver_reconstruction", check_eigensolver, True),
    ("special_functions", check_special_functions, True),
    ("density_normalization", check_normalization, True),
    ("mu_low_temperature_series", check_mu_low_t, True),
    ("zero_t_consistency", check_zero_t_consistency, True),
    ("werner_oracles", check_werner_oracles, True),
    ("thresholds", check_thresholds, True),
    ("sum_rule", check_sum_rule, True),
    ("sommerfeld_agreement", check_sommerfeld, False),
    ("t2_scaling", check_scaling, False),
    ("first_order_concurrence", check_first_order, False),
]


def run_checks(quick=False):
    """Run the suite (a subset when ``quick``) and return CheckResult records."""
    results = []
    for name, check, in_quick in CHECKS:
        if quick and not in_quick:
            continue
        start = time.perf_counter()
        try:
            passed, detail = check(quick)
        except EgspinError as exc:
            passed, detail = False, f"{type(exc).__name__}: {exc}"
        results.append(CheckResult(name, bool(passed), detail, time.perf_counter() - start))
    return results
