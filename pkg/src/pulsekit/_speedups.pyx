# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels: C twin of ``pulsekit._native``.

Same functions, same numerics; the pure-Python module is the readable
reference. Callers validate inputs, so nothing here checks shapes or
finiteness.
"""

from libc.math cimport ceil, copysign, fabs, log2, sqrt

import numpy as np

BACKEND = "c"

cdef double _EPS = 2.220446049250313e-16

cdef double[7] _PADE_B
_PADE_B[0] = 665280.0
_PADE_B[1] = 332640.0
_PADE_B[2] = 75600.0
_PADE_B[3] = 10080.0
_PADE_B[4] = 840.0
_PADE_B[5] = 42.0
_PADE_B[6] = 1.0


cdef void _mm_into(const double[:, ::1] a, const double[:, ::1] b,
                   double[:, ::1] out, Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t i, j, k
    cdef double aik
    for i in range(n):
        for j in range(n):
            out[i, j] = 0.0
        for k in range(n):
            aik = a[i, k]
            if aik != 0.0:
                for j in range(n):
                    out[i, j] += aik * b[k, j]


cdef int _solve_matrix(double[:, ::1] a, double[:, ::1] b,
                       Py_ssize_t n) noexcept nogil:
    # Gaussian elimination with partial pivoting, matrix RHS, in place.
    # Returns 0 on success, -1 on a zero pivot.
    cdef Py_ssize_t i, j, k, pk
    cdef double pmax, v, m, akk, s, tmp
    for k in range(n):
        pmax = fabs(a[k, k])
        pk = k
        for i in range(k + 1, n):
            v = fabs(a[i, k])
            if v > pmax:
                pmax = v
                pk = i
        if pmax == 0.0:
            return -1
        if pk != k:
            for j in range(n):
                tmp = a[k, j]
                a[k, j] = a[pk, j]
                a[pk, j] = tmp
                tmp = b[k, j]
                b[k, j] = b[pk, j]
                b[pk, j] = tmp
        akk = a[k, k]
        for i in range(k + 1, n):
            m = a[i, k] / akk
            if m != 0.0:
                for j in range(k + 1, n):
                    a[i, j] -= m * a[k, j]
                for j in range(n):
                    b[i, j] -= m * b[k, j]
    for k in range(n - 1, -1, -1):
        for j in range(n):
            s = b[k, j]
            for i in range(k + 1, n):
                s -= a[k, i] * b[i, j]
            b[k, j] = s / a[k, k]
    return 0


cdef void _balance(double[:, ::1] a, Py_ssize_t n,
                   double[::1] scale) noexcept nogil:
    # Exact powers-of-two equilibration; A_balanced = D^-1 A D.
    cdef double radix = 2.0
    cdef double radix2 = 4.0
    cdef bint done = False
    cdef Py_ssize_t i, j
    cdef double c, r, g, f, s
    while not done:
        done = True
        for i in range(n):
            c = 0.0
            r = 0.0
            for j in range(n):
                if j != i:
                    c += fabs(a[j, i])
                    r += fabs(a[i, j])
            if c != 0.0 and r != 0.0:
                g = r / radix
                f = 1.0
                s = c + r
                while c < g:
                    f *= radix
                    c *= radix2
                g = r * radix
                while c > g:
                    f /= radix
                    c /= radix2
                if (c + r) / f < 0.95 * s:
                    done = False
                    scale[i] *= f
                    g = 1.0 / f
                    for j in range(n):
                        a[i, j] *= g
                    for j in range(n):
                        a[j, i] *= f


def mat_exp(a, double t):
    """exp(t*a): balance, scale so the norm is at most 0.5, [6/6] Pade,
    square back up, unbalance."""
    cdef Py_ssize_t n = a.shape[0]
    cdef double[:, ::1] m = np.multiply(a, t, dtype=np.float64)
    scale_arr = np.ones(n, dtype=np.float64)
    cdef double[::1] dscale = scale_arr
    _balance(m, n, dscale)

    cdef double nrm = 0.0
    cdef double r
    cdef Py_ssize_t i, j
    for i in range(n):
        r = 0.0
        for j in range(n):
            r += fabs(m[i, j])
        if r > nrm:
            nrm = r
    cdef int s = 0
    cdef double f
    if nrm > 0.5:
        s = <int>ceil(log2(nrm) + 1.0)
        f = 2.0 ** (-s)
        for i in range(n):
            for j in range(n):
                m[i, j] *= f

    cdef double[:, ::1] a2 = np.empty((n, n))
    cdef double[:, ::1] a4 = np.empty((n, n))
    cdef double[:, ::1] a6 = np.empty((n, n))
    cdef double[:, ::1] w = np.empty((n, n))
    cdef double[:, ::1] u = np.empty((n, n))
    cdef double[:, ::1] den = np.empty((n, n))
    _mm_into(m, m, a2, n)
    _mm_into(a2, a2, a4, n)
    _mm_into(a2, a4, a6, n)
    for i in range(n):
        for j in range(n):
            w[i, j] = _PADE_B[3] * a2[i, j] + _PADE_B[5] * a4[i, j]
        w[i, i] += _PADE_B[1]
    _mm_into(m, w, u, n)
    for i in range(n):
        for j in range(n):
            w[i, j] = (_PADE_B[2] * a2[i, j] + _PADE_B[4] * a4[i, j]
                       + _PADE_B[6] * a6[i, j])
        w[i, i] += _PADE_B[0]
    for i in range(n):
        for j in range(n):
            den[i, j] = w[i, j] - u[i, j]
            w[i, j] = w[i, j] + u[i, j]
    if _solve_matrix(den, w, n) != 0:
        raise ArithmeticError("singular linear system")

    cdef double[:, ::1] src = w
    cdef double[:, ::1] dst = a2  # reuse as ping-pong buffer
    cdef double[:, ::1] tmp
    cdef int k
    for k in range(s):
        _mm_into(src, src, dst, n)
        tmp = src
        src = dst
        dst = tmp
    out = np.empty((n, n))
    cdef double[:, ::1] o = out
    for i in range(n):
        for j in range(n):
            o[i, j] = src[i, j] * (dscale[i] / dscale[j])
    return out


def jacobi_eigh(s_in):
    """Cyclic Jacobi on a symmetric matrix: ``(w, q, converged)`` with
    ascending eigenvalues."""
    cdef Py_ssize_t n = s_in.shape[0]
    a_arr = np.array(s_in, dtype=np.float64, copy=True, order="C")
    v_arr = np.eye(n)
    cdef double[:, ::1] a = a_arr
    cdef double[:, ::1] v = v_arr
    cdef Py_ssize_t i, j, p, q, sweep
    cdef double frob = 0.0, off, apq, theta, tr, c, sn, tau, aip, aiq
    cdef double vip, viq
    for i in range(n):
        for j in range(n):
            frob += a[i, j] * a[i, j]
    frob = sqrt(frob)
    cdef double tol = 1e-13 * frob
    cdef bint converged = frob == 0.0

    for sweep in range(100):
        off = 0.0
        for i in range(n - 1):
            for j in range(i + 1, n):
                off += a[i, j] * a[i, j]
        if sqrt(2.0 * off) <= tol:
            converged = True
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = 0.5 * (a[q, q] - a[p, p]) / apq
                if fabs(theta) > 1e150:
                    tr = 0.5 / theta
                else:
                    tr = copysign(1.0, theta) / (fabs(theta)
                                                 + sqrt(theta * theta + 1.0))
                c = 1.0 / sqrt(tr * tr + 1.0)
                sn = tr * c
                tau = sn / (1.0 + c)
                a[p, p] -= tr * apq
                a[q, q] += tr * apq
                a[p, q] = 0.0
                a[q, p] = 0.0
                for i in range(n):
                    if i != p and i != q:
                        aip = a[i, p]
                        aiq = a[i, q]
                        a[i, p] = aip - sn * (aiq + tau * aip)
                        a[p, i] = a[i, p]
                        a[i, q] = aiq + sn * (aip - tau * aiq)
                        a[q, i] = a[i, q]
                for i in range(n):
                    vip = v[i, p]
                    viq = v[i, q]
                    v[i, p] = vip - sn * (viq + tau * vip)
                    v[i, q] = viq + sn * (vip - tau * viq)

    w_arr = np.empty(n)
    order_arr = np.empty(n, dtype=np.intp)
    cdef double[::1] w = w_arr
    cdef Py_ssize_t[::1] order = order_arr
    for i in range(n):
        w[i] = a[i, i]
        order[i] = i
    # insertion sort, ascending
    cdef Py_ssize_t key_i, pos
    cdef double key_w
    for i in range(1, n):
        key_w = w[i]
        key_i = order[i]
        pos = i
        while pos > 0 and w[pos - 1] > key_w:
            w[pos] = w[pos - 1]
            order[pos] = order[pos - 1]
            pos -= 1
        w[pos] = key_w
        order[pos] = key_i
    q_arr = np.empty((n, n))
    cdef double[:, ::1] qs = q_arr
    for i in range(n):
        for j in range(n):
            qs[i, j] = v[i, order[j]]
    return w_arr, q_arr, converged


cdef void _hessenberg(double[:, ::1] a, Py_ssize_t n,
                      double[::1] hv) noexcept nogil:
    # Householder similarity reduction to upper Hessenberg form; hv is an
    # n-sized scratch vector.
    cdef Py_ssize_t i, j, k, m
    cdef double scale, sigma, beta, s
    for k in range(n - 2):
        scale = 0.0
        for i in range(k + 1, n):
            scale += fabs(a[i, k])
        if scale == 0.0:
            continue
        m = n - k - 1
        sigma = 0.0
        for i in range(m):
            hv[i] = a[k + 1 + i, k] / scale
            sigma += hv[i] * hv[i]
        sigma = sqrt(sigma)
        if sigma == 0.0:
            continue
        if hv[0] < 0.0:
            sigma = -sigma
        hv[0] += sigma
        beta = 1.0 / (sigma * hv[0])
        for j in range(n):
            s = 0.0
            for i in range(m):
                s += hv[i] * a[k + 1 + i, j]
            s *= beta
            for i in range(m):
                a[k + 1 + i, j] -= s * hv[i]
        for i in range(n):
            s = 0.0
            for j in range(m):
                s += a[i, k + 1 + j] * hv[j]
            s *= beta
            for j in range(m):
                a[i, k + 1 + j] -= s * hv[j]
        a[k + 1, k] = -sigma * scale
        for i in range(k + 2, n):
            a[i, k] = 0.0


cdef Py_ssize_t _hqr(double[:, ::1] h, Py_ssize_t n, Py_ssize_t max_iters,
                     double[::1] wr, double[::1] wi) noexcept nogil:
    # Francis implicit double-shift QR, eigenvalues only.
    cdef double anorm = 0.0
    cdef Py_ssize_t i, j, k, l, m, nn, its, iters, found, mmin, lo
    cdef double t, x, y, w, s, p, q, r, z, u, v, p2
    for i in range(n):
        lo = i - 1
        if lo < 0:
            lo = 0
        for j in range(lo, n):
            anorm += fabs(h[i, j])
    for i in range(n):
        wr[i] = 0.0
        wi[i] = 0.0
    if anorm == 0.0:
        return n
    found = 0
    iters = 0
    t = 0.0
    nn = n - 1
    while nn >= 0:
        its = 0
        while True:
            l = nn
            while l >= 1:
                s = fabs(h[l - 1, l - 1]) + fabs(h[l, l])
                if s == 0.0:
                    s = anorm
                if fabs(h[l, l - 1]) <= _EPS * s:
                    h[l, l - 1] = 0.0
                    break
                l -= 1
            x = h[nn, nn]
            if l == nn:
                wr[nn] = x + t
                wi[nn] = 0.0
                found += 1
                nn -= 1
                break
            y = h[nn - 1, nn - 1]
            w = h[nn, nn - 1] * h[nn - 1, nn]
            if l == nn - 1:
                p = 0.5 * (y - x)
                q = p * p + w
                z = sqrt(fabs(q))
                x += t
                if q >= 0.0:
                    z = p + copysign(z, p)
                    wr[nn - 1] = x + z
                    wr[nn] = x + z
                    if z != 0.0:
                        wr[nn] = x - w / z
                    wi[nn - 1] = 0.0
                    wi[nn] = 0.0
                else:
                    wr[nn - 1] = x + p
                    wr[nn] = x + p
                    wi[nn - 1] = -z
                    wi[nn] = z
                found += 2
                nn -= 2
                break
            if iters >= max_iters:
                return found
            if its == 10 or its == 20:
                t += x
                for i in range(nn + 1):
                    h[i, i] -= x
                s = fabs(h[nn, nn - 1]) + fabs(h[nn - 1, nn - 2])
                x = 0.75 * s
                y = x
                w = -0.4375 * s * s
            its += 1
            iters += 1
            m = nn - 2
            while m >= l:
                z = h[m, m]
                r = x - z
                s = y - z
                p = (r * s - w) / h[m + 1, m] + h[m, m + 1]
                q = h[m + 1, m + 1] - z - r - s
                r = h[m + 2, m + 1]
                s = fabs(p) + fabs(q) + fabs(r)
                p /= s
                q /= s
                r /= s
                if m == l:
                    break
                u = fabs(h[m, m - 1]) * (fabs(q) + fabs(r))
                v = fabs(p) * (fabs(h[m - 1, m - 1]) + fabs(z)
                               + fabs(h[m + 1, m + 1]))
                if u <= _EPS * v:
                    break
                m -= 1
            for i in range(m + 2, nn + 1):
                h[i, i - 2] = 0.0
                if i != m + 2:
                    h[i, i - 3] = 0.0
            for k in range(m, nn):
                if k != m:
                    p = h[k, k - 1]
                    q = h[k + 1, k - 1]
                    r = 0.0
                    if k != nn - 1:
                        r = h[k + 2, k - 1]
                    x = fabs(p) + fabs(q) + fabs(r)
                    if x == 0.0:
                        continue
                    p /= x
                    q /= x
                    r /= x
                s = sqrt(p * p + q * q + r * r)
                if p < 0.0:
                    s = -s
                if k == m:
                    if l != m:
                        h[k, k - 1] = -h[k, k - 1]
                else:
                    h[k, k - 1] = -s * x
                p += s
                x = p / s
                y = q / s
                z = r / s
                q /= p
                r /= p
                for j in range(k, nn + 1):
                    p2 = h[k, j] + q * h[k + 1, j]
                    if k != nn - 1:
                        p2 += r * h[k + 2, j]
                        h[k + 2, j] -= p2 * z
                    h[k + 1, j] -= p2 * y
                    h[k, j] -= p2 * x
                mmin = k + 3
                if mmin > nn:
                    mmin = nn
                for i in range(l, mmin + 1):
                    p2 = x * h[i, k] + y * h[i, k + 1]
                    if k != nn - 1:
                        p2 += z * h[i, k + 2]
                        h[i, k + 2] -= p2 * r
                    h[i, k + 1] -= p2 * q
                    h[i, k] -= p2
    return found


def hessenberg_qr_eigvals(a, Py_ssize_t max_iters):
    """All eigenvalues of a general real matrix.

    Returns ``(wr, wi, n_found, h_partial)``; ``n_found < n`` means the
    sweep budget ran out and only the trailing ``n_found`` entries are
    deflated eigenvalues.
    """
    cdef Py_ssize_t n = a.shape[0]
    h_arr = np.array(a, dtype=np.float64, copy=True, order="C")
    wr_arr = np.empty(n)
    wi_arr = np.empty(n)
    scratch_arr = np.ones(n)
    cdef double[:, ::1] h = h_arr
    cdef double[::1] wr = wr_arr
    cdef double[::1] wi = wi_arr
    cdef double[::1] scratch = scratch_arr
    _balance(h, n, scratch)
    _hessenberg(h, n, scratch)
    cdef Py_ssize_t found = _hqr(h, n, max_iters, wr, wi)
    return wr_arr, wi_arr, found, h_arr


def cholesky_lower(m):
    """Lower Cholesky factor: ``(L, fail_index)`` with -1 meaning success."""
    cdef Py_ssize_t n = m.shape[0]
    a_arr = np.ascontiguousarray(m, dtype=np.float64)
    low_arr = np.zeros((n, n))
    cdef const double[:, ::1] a = a_arr
    cdef double[:, ::1] low = low_arr
    cdef Py_ssize_t i, j, k
    cdef double d, s, inv
    for j in range(n):
        d = a[j, j]
        for k in range(j):
            d -= low[j, k] * low[j, k]
        if not d > 0.0:  # catches NaN as well
            return low_arr, j
        d = sqrt(d)
        low[j, j] = d
        inv = 1.0 / d
        for i in range(j + 1, n):
            s = a[i, j]
            for k in range(j):
                s -= low[i, k] * low[j, k]
            low[i, j] = s * inv
    return low_arr, -1


def rk4_propagator(b, double total_t, Py_ssize_t n_steps):
    """Fundamental matrix of y' = B y over [0, total_t], classical RK4
    with n_steps fixed steps, all basis vectors propagated at once."""
    cdef Py_ssize_t n = b.shape[0]
    cdef const double[:, ::1] bm = np.ascontiguousarray(b, dtype=np.float64)
    y_arr = np.eye(n)
    cdef double[:, ::1] y = y_arr
    cdef double[:, ::1] k1 = np.empty((n, n))
    cdef double[:, ::1] k2 = np.empty((n, n))
    cdef double[:, ::1] k3 = np.empty((n, n))
    cdef double[:, ::1] k4 = np.empty((n, n))
    cdef double[:, ::1] stage = np.empty((n, n))
    cdef double h = total_t / n_steps
    cdef double h2 = 0.5 * h
    cdef double h6 = h / 6.0
    cdef Py_ssize_t step, i, j
    with nogil:
        for step in range(n_steps):
            _mm_into(bm, y, k1, n)
            for i in range(n):
                for j in range(n):
                    stage[i, j] = y[i, j] + h2 * k1[i, j]
            _mm_into(bm, stage, k2, n)
            for i in range(n):
                for j in range(n):
                    stage[i, j] = y[i, j] + h2 * k2[i, j]
            _mm_into(bm, stage, k3, n)
            for i in range(n):
                for j in range(n):
                    stage[i, j] = y[i, j] + h * k3[i, j]
            _mm_into(bm, stage, k4, n)
            for i in range(n):
                for j in range(n):
                    y[i, j] += h6 * (k1[i, j] + 2.0 * (k2[i, j] + k3[i, j])
                                     + k4[i, j])
    return y_arr
