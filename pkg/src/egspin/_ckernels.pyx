# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot kernels.

Mirrors ``_pykernels`` operation for operation. The quadrature loops run
without the GIL so grid sweeps can use threads.
"""
from libc.math cimport sin, exp, sqrt, fabs, M_PI

from egspin.errors import ConvergenceError, QuadratureError

cdef enum:
    STACK = 104

cdef double XGK[8]
cdef double WGK[8]
cdef double WG[4]
XGK[:] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
]
WGK[:] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
]
WG[:] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
]

cdef double TAIL_LOG = 27.631021115928547
cdef double SMALL_X = 1e-6
MAX_DEPTH = STACK - 4


cdef struct Integrand:
    double x
    double mu
    double t
    bint pair


cdef struct Failure:
    double estimate
    double lo
    double hi


cdef inline double occupation(double e, double mu, double t) noexcept nogil:
    cdef double z = (e - mu) / t
    cdef double w
    if z > 0.0:
        w = exp(-z)
        return w / (1.0 + w)
    return 1.0 / (1.0 + exp(z))


cdef inline double evaluate(Integrand* p, double s) noexcept nogil:
    cdef double v
    if p.pair:
        v = s * sin(p.x * s)
    else:
        v = s * s
    if p.t != 0.0:
        v = v * occupation(s * s, p.mu, p.t)
    return v


cdef void gk15(Integrand* p, double a, double b, double* k, double* g) noexcept nogil:
    cdef double c = 0.5 * (a + b)
    cdef double h = 0.5 * (b - a)
    cdef double fc = evaluate(p, c)
    cdef double kk = WGK[7] * fc
    cdef double gg = WG[3] * fc
    cdef double dx, s
    cdef int j
    for j in range(7):
        dx = h * XGK[j]
        s = evaluate(p, c - dx) + evaluate(p, c + dx)
        kk += WGK[j] * s
        if j % 2 == 1:
            gg += WG[j // 2] * s
    k[0] = kk * h
    g[0] = gg * h


cdef int adaptive(Integrand* p, double a, double b, double abs_tol,
                  double rel_tol, int max_depth, double* out,
                  Failure* fail) noexcept nogil:
    cdef double sa[STACK]
    cdef double sb[STACK]
    cdef int sd[STACK]
    cdef int top = 0
    cdef double total = 0.0
    cdef double lo, hi, mid, k, g, k2, g2, best
    cdef int depth, i
    if a == b:
        out[0] = 0.0
        return 0
    sa[0] = a
    sb[0] = b
    sd[0] = 0
    top = 1
    while top > 0:
        top -= 1
        lo = sa[top]
        hi = sb[top]
        depth = sd[top]
        gk15(p, lo, hi, &k, &g)
        if fabs(k - g) <= max(abs_tol, rel_tol * fabs(k)):
            total += k
            continue
        if depth >= max_depth:
            best = total + k
            for i in range(top):
                gk15(p, sa[i], sb[i], &k2, &g2)
                best += k2
            fail.estimate = best
            fail.lo = lo
            fail.hi = hi
            return -1
        mid = 0.5 * (lo + hi)
        sa[top] = mid
        sb[top] = hi
        sd[top] = depth + 1
        sa[top + 1] = lo
        sb[top + 1] = mid
        sd[top + 1] = depth + 1
        top += 2
    out[0] = total
    return 0


cdef int pair_core(double x, double mu, double t, double abs_tol,
                   double rel_tol, int max_depth, double* out,
                   Failure* fail) noexcept nogil:
    cdef Integrand p
    cdef double s_max, edge, scale, tol, step, total, a, b, part
    cdef long j
    p.x = x
    p.mu = mu
    p.t = t
    if t == 0.0:
        s_max = 1.0
        edge = -1.0
    else:
        s_max = sqrt(max(mu + t * TAIL_LOG, 0.0))
        edge = sqrt(mu) if mu > 0.0 else -1.0
    if x < SMALL_X:
        p.pair = False
        scale = 3.0
        tol = abs_tol / 3.0
        step = 0.0
    else:
        p.pair = True
        scale = 3.0 / x
        tol = abs_tol * min(1.0, x / 3.0)
        step = M_PI / x

    total = 0.0
    a = 0.0
    j = 1
    while a < s_max:
        if step == 0.0:
            b = s_max
        else:
            b = min(j * step, s_max)
        if a < edge < b:
            if adaptive(&p, a, edge, tol, rel_tol, max_depth, &part, fail) != 0:
                fail.estimate = scale * (total + fail.estimate)
                return -1
            total += part
            if adaptive(&p, edge, b, tol, rel_tol, max_depth, &part, fail) != 0:
                fail.estimate = scale * (total + fail.estimate)
                return -1
            total += part
        else:
            if adaptive(&p, a, b, tol, rel_tol, max_depth, &part, fail) != 0:
                fail.estimate = scale * (total + fail.estimate)
                return -1
            total += part
        a = b
        j += 1
    out[0] = scale * total
    return 0


def pair_function(double x, double mu, double t, double abs_tol,
                  double rel_tol, int max_depth):
    """Finite-temperature pair function f(x) in three dimensions."""
    cdef double out = 0.0
    cdef Failure fail
    cdef int status
    if max_depth > MAX_DEPTH:
        raise ValueError(f"max_depth must be <= {MAX_DEPTH}")
    with nogil:
        status = pair_core(x, mu, t, abs_tol, rel_tol, max_depth, &out, &fail)
    if status != 0:
        raise QuadratureError(
            f"subdivision depth {max_depth} exceeded on [{fail.lo!r}, {fail.hi!r}]",
            fail.estimate,
            (fail.lo, fail.hi),
        )
    return out


def eigh4(flat, double off_tol=1e-13, int max_sweeps=50):
    """Cyclic Jacobi diagonalization of a real symmetric 4x4 matrix."""
    cdef double a[4][4]
    cdef double v[4][4]
    cdef double norm = 0.0, target, off, apq, theta, tr, c, s
    cdef double akp, akq, apk, aqk, vkp, vkq
    cdef int i, j, k, p, q, sweep, tmp
    cdef int order[4]
    cdef bint converged = False
    for i in range(4):
        for j in range(4):
            a[i][j] = flat[4 * i + j]
            v[i][j] = 1.0 if i == j else 0.0
    for i in range(4):
        for j in range(4):
            norm += a[i][j] * a[i][j]
    target = off_tol * sqrt(norm)

    for sweep in range(max_sweeps):
        off = 0.0
        for i in range(4):
            for j in range(4):
                if i != j:
                    off += a[i][j] * a[i][j]
        if sqrt(off) <= target:
            converged = True
            break
        for p in range(3):
            for q in range(p + 1, 4):
                apq = a[p][q]
                if apq == 0.0:
                    continue
                theta = (a[q][q] - a[p][p]) / (2.0 * apq)
                tr = 1.0 / (fabs(theta) + sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    tr = -tr
                c = 1.0 / sqrt(tr * tr + 1.0)
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
    if not converged:
        raise ConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps")

    # stable insertion sort, descending: matches sorted(key=-value)
    for i in range(4):
        order[i] = i
    for i in range(1, 4):
        j = i
        while j > 0 and a[order[j - 1]][order[j - 1]] < a[order[j]][order[j]]:
            tmp = order[j - 1]
            order[j - 1] = order[j]
            order[j] = tmp
            j -= 1
    w = [a[order[i]][order[i]] for i in range(4)]
    vec = [v[i][order[j]] for i in range(4) for j in range(4)]
    return w, vec
