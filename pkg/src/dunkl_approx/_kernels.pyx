# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled numerical kernels.

Mirror of ``_kernels_py``: same names, same arguments, same results up to
rounding. Only the loops live here; validation is done by the callers.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport exp, log, log1p, fabs, sqrt, pow, INFINITY, NAN

cnp.import_array()

cdef double NEG_INF = -INFINITY
cdef double EULER_GAMMA = 0.57721566490153286061
cdef double HALF_LOG_2PI = 0.91893853320467274178
cdef double EPMACH = 2.220446049250313e-16
cdef double UFLOW = 2.2250738585072014e-308

ENV_NONE, ENV_BOUNDED, ENV_POLY = 0, 1, 2
QUAD_OK, QUAD_BUDGET, QUAD_ROUNDOFF = 0, 1, 2

cdef double[39] ZETA_M1 = [
    0.6449340668482264, 0.2020569031595943, 0.08232323371113819,
    0.03692775514336993, 0.01734306198444914, 0.008349277381922827,
    0.00407735619794434, 0.0020083928260822143, 0.0009945751278180853,
    0.0004941886041194645, 0.0002460865533080483, 0.00012271334757848915,
    6.124813505870483e-05, 3.058823630702049e-05, 1.528225940865187e-05,
    7.637197637899763e-06, 3.81729326499984e-06, 1.908212716553939e-06,
    9.539620338727962e-07, 4.769329867878064e-07, 2.38450502727733e-07,
    1.1921992596531106e-07, 5.960818905125948e-08, 2.980350351465228e-08,
    1.4901554828365043e-08, 7.45071178983543e-09, 3.725334024788457e-09,
    1.862659723513049e-09, 9.313274324196682e-10, 4.656629065033784e-10,
    2.3283118336765053e-10, 1.164155017270052e-10, 5.820772087902701e-11,
    2.9103850444971e-11, 1.4551921891041985e-11, 7.275959835057482e-12,
    3.637979547378651e-12, 1.818989650307066e-12, 9.094947840263888e-13,
]
cdef double[8] STIRLING = [
    1.0 / 12.0, -1.0 / 360.0, 1.0 / 1260.0, -1.0 / 1680.0,
    1.0 / 1188.0, -691.0 / 360360.0, 1.0 / 156.0, -3617.0 / 122400.0,
]
cdef double[8] XGK = [
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0,
]
cdef double[8] WGK = [
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
]
cdef double[4] WG = [
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
]


cdef struct Acc:
    double s
    double c


cdef inline void acc_add(Acc* a, double v) nogil:
    cdef double t = a.s + v
    if fabs(a.s) >= fabs(v):
        a.c += (a.s - t) + v
    else:
        a.c += (v - t) + a.s
    a.s = t


cdef double _lgamma_near2(double eps) nogil:
    cdef double s = 0.0, p = -eps, term
    cdef int i
    for i in range(39):
        p *= -eps
        term = ZETA_M1[i] * p / (i + 2)
        s += term
        if fabs(term) < 1e-17 * fabs(s):
            break
    return eps * (1.0 - EULER_GAMMA) + s


cdef double c_log_gamma(double x) nogil:
    cdef double inv, inv2, tail, p, prod
    cdef int i
    if not x > 0.0:
        return NAN
    if x >= 10.0:
        inv = 1.0 / x
        inv2 = inv * inv
        tail = 0.0
        p = inv
        for i in range(8):
            tail += STIRLING[i] * p
            p *= inv2
            if fabs(p) < 1e-18:
                break
        return (x - 0.5) * log(x) - x + HALF_LOG_2PI + tail
    if x < 0.5:
        return _lgamma_near2(x) - log1p(x) - log(x)
    if x < 1.5:
        return _lgamma_near2(x - 1.0) - log1p(x - 1.0)
    if x < 2.5:
        return _lgamma_near2(x - 2.0)
    prod = 1.0
    while x >= 2.5:
        x -= 1.0
        prod *= x
    return log(prod) + _lgamma_near2(x - 2.0)


def log_gamma(double x):
    """log Gamma(x) for x > 0. Returns nan for x <= 0 (callers validate)."""
    return c_log_gamma(x)


def neumaier_sum(values):
    """Compensated sum of a float sequence."""
    cdef const double[::1] v = np.ascontiguousarray(values, dtype=np.float64)
    cdef Acc a = Acc(0.0, 0.0)
    cdef Py_ssize_t i
    for i in range(v.shape[0]):
        acc_add(&a, v[i])
    return a.s + a.c


def log_gamma_nu_table(double mu, Py_ssize_t kmax):
    """log gamma_mu(k) for k = 0..kmax via the ratio recursion."""
    out = np.empty(kmax + 1)
    cdef double[::1] o = out
    cdef Acc a = Acc(0.0, 0.0)
    cdef Py_ssize_t k
    o[0] = 0.0
    for k in range(1, kmax + 1):
        acc_add(&a, log(k + (2.0 * mu if k % 2 else 0.0)))
        o[k] = a.s + a.c
    return out


cdef double c_log_sum_exp(const double* lt, Py_ssize_t n, Py_ssize_t stride) nogil:
    cdef double m = NEG_INF
    cdef Py_ssize_t i
    cdef Acc a = Acc(0.0, 0.0)
    for i in range(n):
        if lt[i * stride] > m:
            m = lt[i * stride]
    if m == NEG_INF:
        return NEG_INF
    for i in range(n):
        acc_add(&a, exp(lt[i * stride] - m))
    return m + log(a.s + a.c)


def log_sum_exp(logterms):
    """log of sum(exp(logterms)) with max-scaling and compensation."""
    cdef const double[::1] lt = np.ascontiguousarray(logterms, dtype=np.float64)
    if lt.shape[0] == 0:
        return NEG_INF
    return c_log_sum_exp(&lt[0], lt.shape[0], 1)


def parity_sums(logterms):
    """Return (shift, even, odd) with sum_k exp(lt_k) split by parity of k,
    both partial sums scaled by exp(-shift)."""
    cdef const double[::1] lt = np.ascontiguousarray(logterms, dtype=np.float64)
    cdef double m = NEG_INF
    cdef Py_ssize_t i
    cdef Acc ae = Acc(0.0, 0.0)
    cdef Acc ao = Acc(0.0, 0.0)
    for i in range(lt.shape[0]):
        if lt[i] > m:
            m = lt[i]
    for i in range(lt.shape[0]):
        if i % 2 == 0:
            acc_add(&ae, exp(lt[i] - m))
        else:
            acc_add(&ao, exp(lt[i] - m))
    return m, ae.s + ae.c, ao.s + ao.c


def hermite_log_coeffs(lg_in, double log_a, double log_b, Py_ssize_t kmax):
    """L_k = log sum_j a^j b^(k-2j) / (j! gamma(k-2j)) for k = 0..kmax."""
    cdef const double[::1] lg = np.ascontiguousarray(lg_in, dtype=np.float64)
    cdef double[::1] lf = log_gamma_nu_table(0.0, kmax // 2 + 1)
    out = np.empty(kmax + 1)
    cdef double[::1] o = out
    cdef double[::1] buf = np.empty(kmax // 2 + 1)
    cdef Py_ssize_t k, j, m
    for k in range(kmax + 1):
        if log_a == NEG_INF:
            if log_b == NEG_INF:
                o[k] = 0.0 if k == 0 else NEG_INF
            else:
                o[k] = k * log_b - lg[k]
            continue
        if log_b == NEG_INF:
            if k % 2 == 0:
                o[k] = (k // 2) * log_a - lf[k // 2] - lg[0]
            else:
                o[k] = NEG_INF
            continue
        for j in range(k // 2 + 1):
            m = k - 2 * j
            buf[j] = j * log_a - lf[j] - lg[m] + m * log_b
        o[k] = c_log_sum_exp(&buf[0], k // 2 + 1, 1)
    return out


def dunkl_neg_logterms(lg_in, double mu, double log_x, Py_ssize_t kmax):
    """Log terms of G(x) = exp(x) e_mu(-x) = sum_m c_m x^m, m = 0..kmax."""
    cdef const double[::1] lg = np.ascontiguousarray(lg_in, dtype=np.float64)
    out = np.full(kmax + 1, NEG_INF)
    cdef double[::1] o = out
    o[0] = 0.0
    if mu == 0.0:
        return out
    cdef double[::1] lf = log_gamma_nu_table(0.0, kmax)
    cdef double[::1] buf = np.empty(kmax // 2 + 1)
    cdef double log2mu = log(2.0 * mu)
    cdef Py_ssize_t m, p
    for m in range(kmax):
        for p in range(m // 2 + 1):
            buf[p] = -lf[m - 2 * p] - lg[2 * p + 1]
        o[m + 1] = (log2mu + c_log_sum_exp(&buf[0], m // 2 + 1, 1)
                    - log(m + 1.0) + (m + 1) * log_x)
    return out


cdef double _upper_root(double c) nogil:
    cdef double s = 1.0 + c + sqrt(2.0 * c), step
    cdef int i
    for i in range(100):
        step = (s - 1.0 - log(s) - c) / (1.0 - 1.0 / s)
        s -= step
        if step < 1e-15 * s:
            break
    return s


cdef double _lower_root(double c) nogil:
    cdef double s, step
    cdef int i
    if c > 700.0:
        return 0.0
    s = exp(-(c + 1.0))
    for i in range(200):
        step = (s - 1.0 - log(s) - c) / (1.0 - 1.0 / s)
        s -= step
        if -step < 1e-15 * s:
            break
    return s


cdef void c_gamma_window(double shape, double rate, double drop, double extra_deg,
                         double* lo, double* hi) nogil:
    cdef double b_lo = shape - 1.0
    cdef double b_hi = shape + extra_deg - 1.0
    if b_lo <= 0.0:
        lo[0] = 0.0
    else:
        lo[0] = _lower_root(drop / b_lo) * b_lo / rate
    if b_hi <= 0.0:
        hi[0] = drop / rate
    else:
        hi[0] = _upper_root(drop / b_hi) * b_hi / rate


def gamma_window(double shape, double rate, double drop, double extra_deg):
    """Interval [lo, hi] outside which the Gamma(shape, rate) log-density
    (and that of shape + extra_deg on the right) is below peak - drop."""
    cdef double lo, hi
    c_gamma_window(shape, rate, drop, extra_deg, &lo, &hi)
    return lo, hi


cdef class _Fn:
    cdef double eval(self, double z) except? -1.0:
        return 0.0


cdef class _Plain(_Fn):
    cdef object g

    def __init__(self, g):
        self.g = g

    cdef double eval(self, double z) except? -1.0:
        return self.g(z)


cdef class _Integrand(_Fn):
    # Gamma-kernel integrand density(t) * f(t), optionally in u = t**shape.
    cdef object f
    cdef double shape, inv_shape, rate, log_norm, a1
    cdef bint power
    cdef int env_kind
    cdef double env_bound, env_const, env_deg
    cdef double worst

    def __init__(self, f, double shape, double rate, double log_norm,
                 int env_kind, double env_bound, double env_const, double env_deg):
        self.f = f
        self.shape = shape
        self.inv_shape = 1.0 / shape
        self.rate = rate
        self.power = shape < 1.0
        self.log_norm = log_norm - log(shape) if self.power else log_norm
        self.a1 = shape - 1.0
        self.env_kind = env_kind
        self.env_bound = env_bound
        self.env_const = env_const
        self.env_deg = env_deg
        self.worst = 0.0

    cdef double envelope(self, double t):
        if self.env_kind == 1:
            return self.env_bound
        if self.env_kind == 2:
            return self.env_const * (1.0 + pow(t, self.env_deg))
        return INFINITY

    cdef double eval(self, double z) except? -1.0:
        cdef double t, fv, ratio, ld
        if self.power:
            t = 0.0 if z <= 0.0 else pow(z, self.inv_shape)
        else:
            t = z
        fv = self.f(t)
        ratio = fabs(fv) / self.envelope(t)
        if ratio > self.worst:
            self.worst = ratio
        if self.power or self.a1 == 0.0:
            ld = self.log_norm - self.rate * t
        else:
            ld = self.log_norm + self.a1 * log(t) - self.rate * t
        return exp(ld) * fv


cdef int _gk15(_Fn g, double a, double b, double* result, double* abserr) except -1:
    cdef double c = 0.5 * (a + b), h = 0.5 * (b - a)
    cdef double fc = g.eval(c)
    cdef double resk = fc * WGK[7], resg = fc * WG[3]
    cdef double resabs = fabs(resk), reskh, resasc, err, x, f1, f2
    cdef double fv1[7]
    cdef double fv2[7]
    cdef int j
    for j in range(7):
        x = h * XGK[j]
        f1 = g.eval(c - x)
        f2 = g.eval(c + x)
        fv1[j] = f1
        fv2[j] = f2
        resk += WGK[j] * (f1 + f2)
        resabs += WGK[j] * (fabs(f1) + fabs(f2))
        if j % 2 == 1:
            resg += WG[j // 2] * (f1 + f2)
    reskh = 0.5 * resk
    resasc = WGK[7] * fabs(fc - reskh)
    for j in range(7):
        resasc += WGK[j] * (fabs(fv1[j] - reskh) + fabs(fv2[j] - reskh))
    result[0] = resk * h
    resabs *= fabs(h)
    resasc *= fabs(h)
    err = fabs((resk - resg) * h)
    if resasc != 0.0 and err != 0.0:
        err = resasc * min(1.0, pow(200.0 * err / resasc, 1.5))
    if resabs > UFLOW / (50.0 * EPMACH):
        err = max(50.0 * EPMACH * resabs, err)
    abserr[0] = err
    return 0


cdef int _adaptive(_Fn g, double a, double b, double abs_tol, double rel_tol,
                   int max_sub, double* value, double* error, int* nint) except -1:
    # interval store as flat arrays; linear scan for the worst interval is
    # cheap at the subdivision budgets used here
    cdef cnp.ndarray[double, ndim=2] store = np.empty((max_sub + 1, 4))
    cdef int n = 1, i, worst
    cdef double r, e, r1, e1, r2, e2, lo, hi, mid
    cdef Acc tot, terr
    _gk15(g, a, b, &r, &e)
    store[0, 0] = a
    store[0, 1] = b
    store[0, 2] = r
    store[0, 3] = e
    while True:
        tot = Acc(0.0, 0.0)
        terr = Acc(0.0, 0.0)
        worst = 0
        for i in range(n):
            acc_add(&tot, store[i, 2])
            acc_add(&terr, store[i, 3])
            if store[i, 3] > store[worst, 3]:
                worst = i
        value[0] = tot.s + tot.c
        error[0] = terr.s + terr.c
        nint[0] = n
        if error[0] <= max(abs_tol, rel_tol * fabs(value[0])):
            return QUAD_OK
        if n >= max_sub:
            return QUAD_BUDGET
        lo = store[worst, 0]
        hi = store[worst, 1]
        mid = 0.5 * (lo + hi)
        if not (lo < mid < hi):
            return QUAD_ROUNDOFF
        _gk15(g, lo, mid, &r1, &e1)
        _gk15(g, mid, hi, &r2, &e2)
        store[worst, 1] = mid
        store[worst, 2] = r1
        store[worst, 3] = e1
        store[n, 0] = mid
        store[n, 1] = hi
        store[n, 2] = r2
        store[n, 3] = e2
        n += 1


def gk_adaptive(g, double a, double b, double abs_tol, double rel_tol, int max_sub):
    """Globally adaptive GK15 integral of a plain callable g over [a, b].

    Returns (value, error_estimate, n_intervals, status).
    """
    cdef double v, e
    cdef int n, st
    st = _adaptive(_Plain(g), a, b, abs_tol, rel_tol, max_sub, &v, &e, &n)
    return v, e, n, st


def gk_expectation(f, double shape, double rate, double log_norm, double lo, double hi,
                   double abs_tol, double rel_tol, int max_sub, int env_kind,
                   double env_bound, double env_const, double env_deg):
    """E[f(T)], T ~ Gamma(shape, rate), integrated over [lo, hi].

    Returns (value, error, n_intervals, worst_env_ratio, status).
    """
    cdef _Integrand g = _Integrand(f, shape, rate, log_norm, env_kind,
                                   env_bound, env_const, env_deg)
    cdef double v, e, a, b
    cdef int n, st
    if shape < 1.0:
        a = pow(lo, shape)
        b = pow(hi, shape)
    else:
        a = lo
        b = hi
    st = _adaptive(g, a, b, abs_tol, rel_tol, max_sub, &v, &e, &n)
    return v, e, n, g.worst, st


def gamma_mixture(f, weights, shapes, double rate, double drop, double extra_deg,
                  double abs_tol, double rel_tol, int max_sub, int env_kind,
                  double env_bound, double env_const, double env_deg, double skip):
    """sum_k w_k E[f(T_k)], T_k ~ Gamma(shapes[k], rate).

    Returns (value, error, worst_env_ratio, status, bad_index, n_integrated).
    """
    cdef const double[::1] w = np.ascontiguousarray(weights, dtype=np.float64)
    cdef const double[::1] sh = np.ascontiguousarray(shapes, dtype=np.float64)
    cdef Acc tot = Acc(0.0, 0.0)
    cdef double err = 0.0, worst = 0.0, lo, hi, a, log_norm, v, e, ua, ub
    cdef double log_rate = log(rate)
    cdef int n, st, count = 0
    cdef Py_ssize_t k
    cdef _Integrand g
    for k in range(w.shape[0]):
        if w[k] < skip:
            continue
        a = sh[k]
        c_gamma_window(a, rate, drop, extra_deg, &lo, &hi)
        log_norm = a * log_rate - c_log_gamma(a)
        g = _Integrand(f, a, rate, log_norm, env_kind, env_bound, env_const, env_deg)
        if a < 1.0:
            ua = pow(lo, a)
            ub = pow(hi, a)
        else:
            ua = lo
            ub = hi
        st = _adaptive(g, ua, ub, abs_tol, rel_tol, max_sub, &v, &e, &n)
        count += 1
        if g.worst > worst:
            worst = g.worst
        if st != QUAD_OK:
            return tot.s + tot.c, err, worst, st, k, count
        acc_add(&tot, w[k] * v)
        err += w[k] * e
    return tot.s + tot.c, err, worst, QUAD_OK, -1, count


def point_mixture(f, weights, nodes, int env_kind, double env_bound,
                  double env_const, double env_deg):
    """sum_k w_k f(nodes[k]). Returns (value, worst_env_ratio)."""
    cdef const double[::1] w = np.ascontiguousarray(weights, dtype=np.float64)
    cdef const double[::1] t = np.ascontiguousarray(nodes, dtype=np.float64)
    cdef Acc tot = Acc(0.0, 0.0)
    cdef double worst = 0.0, fv, env, ratio
    cdef Py_ssize_t k
    for k in range(w.shape[0]):
        fv = f(t[k])
        if env_kind == 1:
            env = env_bound
        elif env_kind == 2:
            env = env_const * (1.0 + pow(t[k], env_deg))
        else:
            env = INFINITY
        ratio = fabs(fv) / env
        if ratio > worst:
            worst = ratio
        acc_add(&tot, w[k] * fv)
    return tot.s + tot.c, worst
