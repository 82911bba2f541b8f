import math

from hypothesis import given, settings, strategies as st
import mpmath
import numpy as np
import pytest

from egspin import numerics
from egspin.errors import BracketError, DomainError, NotPSDError, QuadratureError
from egspin.numerics import (
    QuadratureSpec,
    bessel_J1,
    binary_entropy,
    eigen_sym4,
    find_root,
    integrate,
    psd_sqrt4,
    spherical_j1,
)


def bisect(f, lo, hi, n=200):
    """Plain bisection, the independent oracle for root locations."""
    flo = f(lo)
    for _ in range(n):
        mid = 0.5 * (lo + hi)
        if (f(mid) > 0) == (flo > 0):
            lo, flo = mid, f(mid)
        else:
            hi = mid
    return 0.5 * (lo + hi)


def closed_j1(x):
    return math.sin(x) / x ** 2 - math.cos(x) / x


class TestSphericalJ1:
    def test_small_argument_leading_term(self):
        assert spherical_j1(1e-8) == pytest.approx(1e-8 / 3, rel=1e-12)
        assert spherical_j1(0.0) == 0.0

    def test_at_pi(self):
        assert spherical_j1(math.pi) == pytest.approx(1 / math.pi, abs=1e-15)

    def test_first_root(self):
        root = bisect(closed_j1, math.pi, 1.5 * math.pi)
        assert root == pytest.approx(4.493409457909064, abs=1e-12)
        assert abs(spherical_j1(4.493409457909064)) < 1e-12

    def test_branches_agree_near_crossover(self):
        for x in np.linspace(0.08, 0.12, 41):
            series = x * sum((-x * x / 2) ** k / (math.factorial(k) * _dfact(2 * k + 3)) for k in range(12))
            assert spherical_j1(x) == pytest.approx(series, abs=1e-12)
            assert spherical_j1(x) == pytest.approx(closed_j1(x), abs=1e-12)

    def test_odd(self):
        assert spherical_j1(-0.05) == -spherical_j1(0.05)
        assert spherical_j1(-2.0) == pytest.approx(-spherical_j1(2.0), abs=1e-16)


def _dfact(n):
    return math.prod(range(n, 0, -2))


class TestBesselJ1:
    def test_small_argument(self):
        assert bessel_J1(1e-8) / 1e-8 == pytest.approx(0.5, rel=1e-14)
        assert bessel_J1(0.0) == 0.0

    def test_value_at_one(self):
        # mpmath, 30 digits
        assert bessel_J1(1.0) == pytest.approx(0.44005058574493352, abs=1e-15)

    def test_first_root(self):
        root = bisect(bessel_J1, 3.5, 4.0)
        assert root == pytest.approx(3.8317059702075123, abs=1e-9)
        assert abs(bessel_J1(3.8317059702075125)) < 1e-9

    def test_matches_mpmath_on_working_range(self):
        xs = np.concatenate([np.linspace(0, 50, 501), [11.999, 12.0, 12.001]])
        worst = max(abs(bessel_J1(x) - float(mpmath.besselj(1, x))) for x in xs)
        assert worst <= 1e-10

    def test_negative_rejected(self):
        with pytest.raises(DomainError):
            bessel_J1(-1.0)


class TestBinaryEntropy:
    @pytest.mark.parametrize("x, expected", [(0.5, 1.0), (0.0, 0.0), (1.0, 0.0)])
    def test_trivial(self, x, expected):
        assert binary_entropy(x) == expected

    def test_value(self):
        assert binary_entropy(0.9) == pytest.approx(0.46899559358928120, abs=1e-15)

    def test_slack_and_domain(self):
        assert binary_entropy(1.0 + 1e-13) == 0.0
        with pytest.raises(DomainError):
            binary_entropy(1.1)
        with pytest.raises(DomainError):
            binary_entropy(-1e-9)


class TestIntegrate:
    def test_linear(self):
        assert integrate(lambda x: x, 0.0, 1.0) == pytest.approx(0.5, abs=1e-15)

    def test_damped_sine(self):
        got = integrate(lambda x: math.exp(-x) * math.sin(x), 0.0, 40.0)
        assert got == pytest.approx(0.5, abs=1e-10)

    def test_density_integrand(self):
        got = integrate(lambda x: 1.5 * math.sqrt(x), 0.0, 1.0)
        assert got == pytest.approx(1.0, abs=1e-10)

    @pytest.mark.parametrize("degree", range(0, 21))
    @pytest.mark.parametrize("a, b", [(0.0, 1.0), (-1.0, 0.5)])
    def test_polynomial_exactness(self, degree, a, b):
        exact = (b ** (degree + 1) - a ** (degree + 1)) / (degree + 1)
        assert integrate(lambda x: x ** degree, a, b) == pytest.approx(exact, abs=1e-14)

    def test_empty_interval(self):
        assert integrate(math.exp, 2.0, 2.0) == 0.0

    def test_reversed_limits_rejected(self):
        with pytest.raises(DomainError):
            integrate(math.exp, 1.0, 0.0)

    def test_depth_exceeded_carries_estimate_and_panel(self):
        spec = QuadratureSpec(abs_tol=1e-15, rel_tol=1e-15, max_depth=2)
        with pytest.raises(QuadratureError) as info:
            integrate(lambda x: 1.0 / math.sqrt(x) if x > 0 else 0.0, 0.0, 1.0, spec)
        err = info.value
        assert err.estimate == pytest.approx(2.0, rel=0.2)
        lo, hi = err.panel
        assert 0.0 <= lo < hi <= 1.0

    @pytest.mark.parametrize(
        "kwargs", [{"abs_tol": 0.0}, {"rel_tol": -1.0}, {"max_depth": 0}, {"max_depth": 1000}]
    )
    def test_spec_invariants(self, kwargs):
        with pytest.raises(DomainError):
            QuadratureSpec(**kwargs)


class TestFindRoot:
    def test_linear(self):
        assert find_root(lambda x: x - 1.0, 0.0, 2.0) == pytest.approx(1.0, abs=1e-12)

    def test_j1_root(self):
        got = find_root(spherical_j1, 4.0, 5.0, tol=1e-13)
        assert got == pytest.approx(4.4934094579, abs=1e-10)

    def test_cos(self):
        assert find_root(math.cos, 1.0, 2.0, tol=1e-14) == pytest.approx(math.pi / 2, abs=1e-13)

    def test_no_bracket(self):
        with pytest.raises(BracketError):
            find_root(lambda x: x * x + 1.0, -1.0, 1.0)

    def test_endpoint_root(self):
        assert find_root(lambda x: x, 0.0, 1.0) == 0.0

    @settings(max_examples=200, deadline=None)
    @given(
        root=st.floats(-10, 10),
        scale=st.floats(0.1, 10),
        width=st.floats(0.01, 5),
        cubic=st.booleans(),
    )
    def test_result_brackets_sign_change(self, root, scale, width, cubic):
        def f(x):
            d = x - root
            return scale * (d ** 3 + d if cubic else d)

        tol = 1e-10
        x = find_root(f, root - width, root + 2 * width, tol=tol)
        eps = tol + 4 * np.finfo(float).eps * abs(x)
        assert f(x) == 0.0 or f(x - eps) * f(x + eps) <= 0.0


class TestEigenSym4:
    def test_identity(self):
        w, v = eigen_sym4(np.eye(4))
        assert w.tolist() == [1.0, 1.0, 1.0, 1.0]
        assert np.allclose(v, np.eye(4))

    def test_diagonal_sorted(self):
        w, _ = eigen_sym4(np.diag([1.0, 3.0, 4.0, 2.0]))
        assert w.tolist() == [4.0, 3.0, 2.0, 1.0]

    def test_werner_half(self):
        # singlet/triplet block structure: F once, (1 - F)/3 three times
        m = 0.5 * np.eye(4) / 4 + 0.5 * np.outer([0, 1, -1, 0], [0, 1, -1, 0]) / 2
        w, _ = eigen_sym4(m)
        assert w == pytest.approx([0.625, 0.125, 0.125, 0.125], abs=1e-15)

    def test_asymmetric_rejected(self):
        m = np.eye(4)
        m[0, 1] = 1e-6
        with pytest.raises(DomainError):
            eigen_sym4(m)

    def test_zero_matrix(self):
        w, v = eigen_sym4(np.zeros((4, 4)))
        assert w.tolist() == [0.0] * 4

    def test_random_reconstruction_against_lapack(self):
        rng = np.random.default_rng(7)
        for _ in range(1000):
            a = rng.uniform(-1, 1, (4, 4))
            m = 0.5 * (a + a.T)
            w, v = eigen_sym4(m)
            assert np.linalg.norm(m - (v * w) @ v.T) <= 1e-12
            assert abs(np.trace(m) - w.sum()) <= 1e-12
            assert np.allclose(v.T @ v, np.eye(4), atol=1e-13)
            assert w == pytest.approx(np.linalg.eigvalsh(m)[::-1], abs=1e-13)

    @settings(max_examples=100, deadline=None)
    @given(st.lists(st.floats(-1e3, 1e3), min_size=10, max_size=10))
    def test_property_reconstruction(self, upper):
        m = np.zeros((4, 4))
        m[np.triu_indices(4)] = upper
        m = m + np.triu(m, 1).T
        w, v = eigen_sym4(m)
        scale = max(1.0, np.linalg.norm(m))
        assert np.linalg.norm(m - (v * w) @ v.T) <= 1e-12 * scale
        assert all(w[i] >= w[i + 1] for i in range(3))


class TestPsdSqrt4:
    def test_identity(self):
        assert np.allclose(psd_sqrt4(np.eye(4)), np.eye(4), atol=1e-15)

    def test_diagonal(self):
        got = psd_sqrt4(np.diag([4.0, 1.0, 0.0, 9.0]))
        assert np.allclose(got, np.diag([2.0, 1.0, 0.0, 3.0]), atol=1e-15)

    def test_projector_is_own_root(self):
        s = np.array([0.0, 1.0, -1.0, 0.0]) / math.sqrt(2)
        p = np.outer(s, s)
        assert np.allclose(psd_sqrt4(p), p, atol=1e-15)

    def test_not_psd(self):
        with pytest.raises(NotPSDError):
            psd_sqrt4(np.diag([1.0, 1.0, 1.0, -1e-6]))

    def test_tiny_negative_clamped(self):
        root = psd_sqrt4(np.diag([1.0, 1.0, 1.0, -1e-11]))
        assert root[3, 3] == 0.0

    def test_random_psd(self):
        rng = np.random.default_rng(11)
        for _ in range(1000):
            a = rng.uniform(-1, 1, (4, 4))
            m = a.T @ a
            m = 0.5 * (m + m.T)
            r = psd_sqrt4(m)
            assert np.linalg.norm(r @ r - m) <= 1e-10
