"""Pure-Python numerical kernels.

This module is the reference implementation of the hot loops and the
fallback used when the compiled ``_kernels`` extension is not available.
Every public function here has an identically named, identically behaving
counterpart in ``_kernels.pyx``; ``tests/test_kernels.py`` holds the two
to agreement.
"""

import heapq
import math

import numpy as np

NEG_INF = -math.inf
EULER_GAMMA = 0.57721566490153286061

# zeta(k) - 1 for k = 2..40
ZETA_M1 = (
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
)

# B_2k / (2k (2k - 1)) for the Stirling tail, k = 1..8
STIRLING = (
    1.0 / 12.0, -1.0 / 360.0, 1.0 / 1260.0, -1.0 / 1680.0,
    1.0 / 1188.0, -691.0 / 360360.0, 1.0 / 156.0, -3617.0 / 122400.0,
)
HALF_LOG_2PI = 0.91893853320467274178

# Gauss-Kronrod 7-15 (QUADPACK qk15 abscissae and weights)
XGK = (
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0,
)
WGK = (
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
)
WG = (
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
)
EPMACH = 2.220446049250313e-16
UFLOW = 2.2250738585072014e-308

ENV_NONE, ENV_BOUNDED, ENV_POLY = 0, 1, 2
QUAD_OK, QUAD_BUDGET, QUAD_ROUNDOFF = 0, 1, 2


def _lgamma_near2(eps):
    # log Gamma(2 + eps) for |eps| <= 0.5; no log() call, so no cancellation at the root
    s = 0.0
    p = -eps
    for k, z in enumerate(ZETA_M1, start=2):
        p *= -eps
        term = z * p / k
        s += term
        if abs(term) < 1e-17 * abs(s):
            break
    return eps * (1.0 - EULER_GAMMA) + s


def log_gamma(x):
    """log Gamma(x) for x > 0. Returns nan for x <= 0 (callers validate)."""
    if not x > 0.0:
        return math.nan
    if x >= 10.0:
        inv = 1.0 / x
        inv2 = inv * inv
        tail = 0.0
        p = inv
        for c in STIRLING:
            tail += c * p
            p *= inv2
            if abs(p) < 1e-18:
                break
        return (x - 0.5) * math.log(x) - x + HALF_LOG_2PI + tail
    if x < 0.5:
        # x + 1 lies in [1, 1.5)
        return _lgamma_near2(x) - math.log1p(x) - math.log(x)
    if x < 1.5:
        return _lgamma_near2(x - 1.0) - math.log1p(x - 1.0)
    if x < 2.5:
        return _lgamma_near2(x - 2.0)
    prod = 1.0
    while x >= 2.5:
        x -= 1.0
        prod *= x
    return math.log(prod) + _lgamma_near2(x - 2.0)


def neumaier_sum(values):
    """Compensated sum of a float sequence."""
    s = 0.0
    c = 0.0
    for v in values:
        v = float(v)
        t = s + v
        if abs(s) >= abs(v):
            c += (s - t) + v
        else:
            c += (v - t) + s
        s = t
    return s + c


def log_gamma_nu_table(mu, kmax):
    """log gamma_mu(k) for k = 0..kmax via the ratio recursion."""
    out = np.empty(kmax + 1)
    out[0] = 0.0
    s = 0.0
    c = 0.0
    for k in range(1, kmax + 1):
        v = math.log(k + (2.0 * mu if k % 2 else 0.0))
        t = s + v
        if abs(s) >= abs(v):
            c += (s - t) + v
        else:
            c += (v - t) + s
        s = t
        out[k] = s + c
    return out


def log_sum_exp(logterms):
    """log of sum(exp(logterms)) with max-scaling and compensation."""
    lt = np.asarray(logterms, dtype=float)
    if lt.size == 0:
        return NEG_INF
    m = float(lt.max())
    if m == NEG_INF:
        return NEG_INF
    return m + math.log(neumaier_sum(np.exp(lt - m)))


def parity_sums(logterms):
    """Return (shift, even, odd) with sum_k exp(lt_k) split by parity of k,
    both partial sums scaled by exp(-shift)."""
    lt = np.asarray(logterms, dtype=float)
    m = float(lt.max())
    scaled = np.exp(lt - m)
    return m, neumaier_sum(scaled[0::2]), neumaier_sum(scaled[1::2])


def hermite_log_coeffs(lg, log_a, log_b, kmax):
    """L_k = log sum_j a^j b^(k-2j) / (j! gamma(k-2j)) for k = 0..kmax.

    ``lg`` is a log gamma_mu table of length > kmax. Either log argument may
    be -inf (a = 0 or b = 0).
    """
    lf = log_gamma_nu_table(0.0, kmax // 2 + 1)
    out = np.empty(kmax + 1)
    for k in range(kmax + 1):
        if log_a == NEG_INF:
            if log_b == NEG_INF:
                out[k] = 0.0 if k == 0 else NEG_INF
            else:
                out[k] = k * log_b - lg[k]
            continue
        j = np.arange(k // 2 + 1)
        m = k - 2 * j
        terms = j * log_a - lf[j] - lg[m]
        if log_b == NEG_INF:
            out[k] = terms[-1] if k % 2 == 0 else NEG_INF
            continue
        terms = terms + m * log_b
        out[k] = log_sum_exp(terms)
    return out


def dunkl_neg_logterms(lg, mu, log_x, kmax):
    """Log terms of G(x) = exp(x) e_mu(-x) = sum_m c_m x^m, m = 0..kmax.

    G' = 2 mu exp(x) F(x) / x with F the odd part of e_mu, so every c_m is a
    sum of positive quantities: c_{m+1} = 2 mu a_m / (m + 1),
    a_m = sum_p 1 / ((m - 2p)! gamma_mu(2p + 1)).
    """
    out = np.full(kmax + 1, NEG_INF)
    out[0] = 0.0
    if mu == 0.0:
        return out
    lf = log_gamma_nu_table(0.0, kmax)
    log2mu = math.log(2.0 * mu)
    for m in range(kmax):
        p = np.arange(m // 2 + 1)
        a_m = log_sum_exp(-lf[m - 2 * p] - lg[2 * p + 1])
        out[m + 1] = log2mu + a_m - math.log(m + 1.0) + (m + 1) * log_x
    return out


def _upper_root(c):
    # s > 1 with s - 1 - log s = c; Newton from the right of the root is monotone
    s = 1.0 + c + math.sqrt(2.0 * c)
    for _ in range(100):
        step = (s - 1.0 - math.log(s) - c) / (1.0 - 1.0 / s)
        s -= step
        if step < 1e-15 * s:
            break
    return s


def _lower_root(c):
    # 0 < s < 1 with s - 1 - log s = c; Newton from the left is monotone
    if c > 700.0:
        return 0.0
    s = math.exp(-(c + 1.0))
    for _ in range(200):
        step = (s - 1.0 - math.log(s) - c) / (1.0 - 1.0 / s)
        s -= step
        if -step < 1e-15 * s:
            break
    return s


def gamma_window(shape, rate, drop, extra_deg):
    """Interval [lo, hi] outside which the Gamma(shape, rate) log-density
    (and that of shape + extra_deg on the right) is below peak - drop."""
    b_lo = shape - 1.0
    b_hi = shape + extra_deg - 1.0
    if b_lo <= 0.0:
        lo = 0.0
    else:
        lo = _lower_root(drop / b_lo) * b_lo / rate
    if b_hi <= 0.0:
        hi = drop / rate
    else:
        hi = _upper_root(drop / b_hi) * b_hi / rate
    return lo, hi


def _envelope(kind, bound, const, deg, t):
    if kind == ENV_BOUNDED:
        return bound
    if kind == ENV_POLY:
        return const * (1.0 + t ** deg)
    return math.inf


def _gk15(g, a, b):
    c = 0.5 * (a + b)
    h = 0.5 * (b - a)
    fc = g(c)
    resk = fc * WGK[7]
    resg = fc * WG[3]
    resabs = abs(resk)
    fv1 = [0.0] * 7
    fv2 = [0.0] * 7
    for j in range(7):
        x = h * XGK[j]
        f1 = g(c - x)
        f2 = g(c + x)
        fv1[j] = f1
        fv2[j] = f2
        resk += WGK[j] * (f1 + f2)
        resabs += WGK[j] * (abs(f1) + abs(f2))
        if j % 2 == 1:
            resg += WG[j // 2] * (f1 + f2)
    reskh = 0.5 * resk
    resasc = WGK[7] * abs(fc - reskh)
    for j in range(7):
        resasc += WGK[j] * (abs(fv1[j] - reskh) + abs(fv2[j] - reskh))
    result = resk * h
    resabs *= abs(h)
    resasc *= abs(h)
    err = abs((resk - resg) * h)
    if resasc != 0.0 and err != 0.0:
        err = resasc * min(1.0, (200.0 * err / resasc) ** 1.5)
    if resabs > UFLOW / (50.0 * EPMACH):
        err = max(50.0 * EPMACH * resabs, err)
    return result, err


def gk_adaptive(g, a, b, abs_tol, rel_tol, max_sub):
    """Globally adaptive GK15 integral of g over [a, b].

    Returns (value, error_estimate, n_intervals, status).
    """
    r, e = _gk15(g, a, b)
    heap = [(-e, a, b, r, e)]
    total = r
    total_err = e
    n = 1
    while total_err > max(abs_tol, rel_tol * abs(total)):
        if n >= max_sub:
            return total, total_err, n, QUAD_BUDGET
        _, lo, hi, r, e = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        if not (lo < mid < hi):
            heapq.heappush(heap, (-e, lo, hi, r, e))
            return total, total_err, n, QUAD_ROUNDOFF
        r1, e1 = _gk15(g, lo, mid)
        r2, e2 = _gk15(g, mid, hi)
        heapq.heappush(heap, (-e1, lo, mid, r1, e1))
        heapq.heappush(heap, (-e2, mid, hi, r2, e2))
        n += 1
        # re-sum instead of updating incrementally to keep rounding drift out
        total = neumaier_sum(item[3] for item in heap)
        total_err = neumaier_sum(item[4] for item in heap)
    return total, total_err, n, QUAD_OK


def gk_expectation(f, shape, rate, log_norm, lo, hi, abs_tol, rel_tol,
                   max_sub, env_kind, env_bound, env_const, env_deg):
    """E[f(T)], T ~ Gamma(shape, rate), integrated over [lo, hi].

    ``log_norm`` is shape*log(rate) - log_gamma(shape). For shape < 1 the
    integral is taken in u = t**shape so the endpoint singularity vanishes.
    Returns (value, error, n_intervals, worst_env_ratio, status).
    """
    worst = [0.0]
    a1 = shape - 1.0

    if shape < 1.0:
        inv = 1.0 / shape
        log_c = log_norm - math.log(shape)

        def g(u):
            if u <= 0.0:
                t = 0.0
            else:
                t = u ** inv
            fv = f(t)
            ratio = abs(fv) / _envelope(env_kind, env_bound, env_const, env_deg, t)
            if ratio > worst[0]:
                worst[0] = ratio
            return math.exp(log_c - rate * t) * fv

        ua = lo ** shape
        ub = hi ** shape
        v, e, n, st = gk_adaptive(g, ua, ub, abs_tol, rel_tol, max_sub)
        return v, e, n, worst[0], st

    def g(t):
        fv = f(t)
        ratio = abs(fv) / _envelope(env_kind, env_bound, env_const, env_deg, t)
        if ratio > worst[0]:
            worst[0] = ratio
        if a1 == 0.0:
            ld = log_norm - rate * t
        else:
            ld = log_norm + a1 * math.log(t) - rate * t
        return math.exp(ld) * fv

    v, e, n, st = gk_adaptive(g, lo, hi, abs_tol, rel_tol, max_sub)
    return v, e, n, worst[0], st


def gamma_mixture(f, weights, shapes, rate, drop, extra_deg, abs_tol, rel_tol,
                  max_sub, env_kind, env_bound, env_const, env_deg, skip):
    """sum_k w_k E[f(T_k)], T_k ~ Gamma(shapes[k], rate).

    Terms with w_k < skip are not integrated; their contribution is bounded
    by the caller. Returns (value, error, worst_env_ratio, status, bad_index,
    n_integrated).
    """
    parts = []
    err = 0.0
    worst = 0.0
    count = 0
    log_rate = math.log(rate)
    for k in range(len(weights)):
        w = float(weights[k])
        if w < skip:
            continue
        a = float(shapes[k])
        lo, hi = gamma_window(a, rate, drop, extra_deg)
        log_norm = a * log_rate - log_gamma(a)
        v, e, _n, wr, st = gk_expectation(
            f, a, rate, log_norm, lo, hi, abs_tol, rel_tol, max_sub,
            env_kind, env_bound, env_const, env_deg)
        count += 1
        if wr > worst:
            worst = wr
        if st != QUAD_OK:
            return neumaier_sum(parts), err, worst, st, k, count
        parts.append(w * v)
        err += w * e
    return neumaier_sum(parts), err, worst, QUAD_OK, -1, count


def point_mixture(f, weights, nodes, env_kind, env_bound, env_const, env_deg):
    """sum_k w_k f(nodes[k]). Returns (value, worst_env_ratio)."""
    parts = []
    worst = 0.0
    for k in range(len(weights)):
        t = float(nodes[k])
        fv = f(t)
        ratio = abs(fv) / _envelope(env_kind, env_bound, env_const, env_deg, t)
        if ratio > worst:
            worst = ratio
        parts.append(float(weights[k]) * fv)
    return neumaier_sum(parts), worst
