"""Pure-Python versions of the hot kernels.

Every function here has a twin in ``_ckernels.pyx`` implementing the same
algorithm in the same floating-point order, so both backends agree to
rounding. Keep the two files in step.
"""
import math

from .errors import ConvergenceError, QuadratureError

# 15-point Gauss-Kronrod rule on [-1, 1]. Gauss-7 nodes are XGK[1::2].
XGK = (
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
)
WGK = (
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
)
WG = (
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
)

# ln(1e12): occupation at the upper cutoff is below 1e-12.
TAIL_LOG = 27.631021115928547
SMALL_X = 1e-6
MAX_DEPTH = 100


def gk15(f, a, b):
    """Return (kronrod, gauss) estimates of the integral of f over [a, b]."""
    c = 0.5 * (a + b)
    h = 0.5 * (b - a)
    fc = f(c)
    k = WGK[7] * fc
    g = WG[3] * fc
    for j in range(7):
        dx = h * XGK[j]
        s = f(c - dx) + f(c + dx)
        k += WGK[j] * s
        if j % 2 == 1:
            g += WG[j // 2] * s
    return k * h, g * h


def gk_adaptive(f, a, b, abs_tol, rel_tol, max_depth):
    """Depth-first adaptive Gauss-Kronrod integration of f over [a, b].

    A panel is accepted once ``|K15 - G7| <= max(abs_tol, rel_tol*|K15|)``,
    otherwise it is bisected. Left halves are always processed first, so the
    summation order is fixed.
    """
    if a == b:
        return 0.0
    total = 0.0
    stack = [(a, b, 0)]
    while stack:
        lo, hi, depth = stack.pop()
        k, g = gk15(f, lo, hi)
        if abs(k - g) <= max(abs_tol, rel_tol * abs(k)):
            total += k
            continue
        if depth >= max_depth:
            best = total + k
            for plo, phi, _ in stack:
                best += gk15(f, plo, phi)[0]
            raise QuadratureError(
                f"subdivision depth {max_depth} exceeded on [{lo!r}, {hi!r}]",
                best,
                (lo, hi),
            )
        mid = 0.5 * (lo + hi)
        stack.append((mid, hi, depth + 1))
        stack.append((lo, mid, depth + 1))
    return total


def occupation(e, mu, t):
    """Fermi-Dirac occupation of reduced energy e at (mu, t), t > 0."""
    z = (e - mu) / t
    if z > 0.0:
        w = math.exp(-z)
        return w / (1.0 + w)
    return 1.0 / (1.0 + math.exp(z))


def pair_function(x, mu, t, abs_tol, rel_tol, max_depth):
    """Finite-temperature pair function f(x) in three dimensions.

    Works in momentum magnitude s = k/k_F, where the integrand is
    ``(3/x) s sin(x s) n(s^2)``; for x below SMALL_X the limiting form
    ``3 s^2 n(s^2)`` is used, which is also the density normalization.
    Panels end at the sine zeros s = j*pi/x and at the Fermi edge sqrt(mu).
    At t = 0 the occupation is a step and the range is cut at s = 1.
    """
    if t == 0.0:
        s_max = 1.0
        edge = -1.0
    else:
        s_max = math.sqrt(max(mu + t * TAIL_LOG, 0.0))
        edge = math.sqrt(mu) if mu > 0.0 else -1.0

    if x < SMALL_X:
        scale = 3.0
        tol = abs_tol / 3.0
        if t == 0.0:
            def integrand(s):
                return s * s
        else:
            def integrand(s):
                return s * s * occupation(s * s, mu, t)
        step = 0.0
    else:
        scale = 3.0 / x
        tol = abs_tol * min(1.0, x / 3.0)
        if t == 0.0:
            def integrand(s):
                return s * math.sin(x * s)
        else:
            def integrand(s):
                return s * math.sin(x * s) * occupation(s * s, mu, t)
        step = math.pi / x

    total = 0.0
    a = 0.0
    j = 1
    try:
        while a < s_max:
            b = s_max if step == 0.0 else min(j * step, s_max)
            if a < edge < b:
                total += gk_adaptive(integrand, a, edge, tol, rel_tol, max_depth)
                total += gk_adaptive(integrand, edge, b, tol, rel_tol, max_depth)
            else:
                total += gk_adaptive(integrand, a, b, tol, rel_tol, max_depth)
            a = b
            j += 1
    except QuadratureError as exc:
        raise QuadratureError(str(exc), scale * (total + exc.estimate), exc.panel) from None
    return scale * total


def eigh4(flat, off_tol=1e-13, max_sweeps=50):
    """Cyclic Jacobi diagonalization of a real symmetric 4x4 matrix.

    ``flat`` holds the 16 entries row-major. Returns ``(w, v)`` with the
    eigenvalues in descending order and the eigenvectors as the columns of
    the row-major 16-list ``v``.
    """
    a = [list(flat[4 * i:4 * i + 4]) for i in range(4)]
    v = [[1.0 if i == j else 0.0 for j in range(4)] for i in range(4)]
    norm = math.sqrt(sum(a[i][j] * a[i][j] for i in range(4) for j in range(4)))
    target = off_tol * norm

    for _ in range(max_sweeps):
        off = 0.0
        for i in range(4):
            for j in range(4):
                if i != j:
                    off += a[i][j] * a[i][j]
        if math.sqrt(off) <= target:
            break
        for p in range(3):
            for q in range(p + 1, 4):
                apq = a[p][q]
                if apq == 0.0:
                    continue
                theta = (a[q][q] - a[p][p]) / (2.0 * apq)
                tr = 1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    tr = -tr
                c = 1.0 / math.sqrt(tr * tr + 1.0)
                s = tr * c
                for k in range(4):
                    akp = a[k][p]
                    akq = a[k][q]
                    a[k][p] = c * akp - s * akq
                    a[k][q] = s * akp + c * akq
                for k in range(4):
                    apk = a[p][k]
                    aqk = a[q][k]
                    a[p][k] = c * apk - s * aqk
                    a[q][k] = s * apk + c * aqk
                a[p][q] = 0.0
                a[q][p] = 0.0
                for k in range(4):
                    vkp = v[k][p]
                    vkq = v[k][q]
                    v[k][p] = c * vkp - s * vkq
                    v[k][q] = s * vkp + c * vkq
    else:
        raise ConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps")

    order = sorted(range(4), key=lambda i: -a[i][i])
    w = [a[i][i] for i in order]
    vec = [v[r][order[col]] for r in range(4) for col in range(4)]
    return w, vec
