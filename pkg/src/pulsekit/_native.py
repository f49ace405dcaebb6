"""Pure-Python twin of the compiled kernel module.

Same functions, same semantics as ``pulsekit._speedups``; selected at import
time by ``pulsekit._backend`` when the extension is unavailable (or when
``PULSEKIT_BACKEND=python`` forces it). Hot loops run over plain nested
lists, which beats elementwise ndarray indexing for the small matrices this
package works with.

Kernels never validate: callers (``pulsekit.linalg``) check finiteness,
shape, and symmetry, and translate failure flags into typed exceptions.
"""

import math

import numpy as np

BACKEND = "python"

_EPS = 2.220446049250313e-16

# [6/6] Pade numerator coefficients for exp(x); with the scaled norm held
# below 0.5 the truncation error sits around 1e-20, beyond double precision.
_PADE_B = (665280.0, 332640.0, 75600.0, 10080.0, 840.0, 42.0, 1.0)


def _mm(a, b, n):
    out = [[0.0] * n for _ in range(n)]
    for i in range(n):
        ai = a[i]
        oi = out[i]
        for k in range(n):
            aik = ai[k]
            if aik != 0.0:
                bk = b[k]
                for j in range(n):
                    oi[j] += aik * bk[j]
    return out


def _solve_matrix(a, b, n):
    # Gaussian elimination with partial pivoting; solves A X = B for the
    # matrix RHS in place and returns B.
    for k in range(n):
        pmax = abs(a[k][k])
        pk = k
        for i in range(k + 1, n):
            v = abs(a[i][k])
            if v > pmax:
                pmax = v
                pk = i
        if pmax == 0.0:
            raise ArithmeticError("singular linear system")
        if pk != k:
            a[k], a[pk] = a[pk], a[k]
            b[k], b[pk] = b[pk], b[k]
        ak = a[k]
        bk = b[k]
        akk = ak[k]
        for i in range(k + 1, n):
            m = a[i][k] / akk
            if m != 0.0:
                ai = a[i]
                bi = b[i]
                for j in range(k + 1, n):
                    ai[j] -= m * ak[j]
                for j in range(n):
                    bi[j] -= m * bk[j]
    for k in range(n - 1, -1, -1):
        ak = a[k]
        bk = b[k]
        akk = ak[k]
        for j in range(n):
            s = bk[j]
            for i in range(k + 1, n):
                s -= ak[i] * b[i][j]
            bk[j] = s / akk
    return b


def mat_exp(a, t):
    """exp(t*a) by scaling and squaring around a [6/6] Pade approximant.

    The matrix is balanced first (exact powers of two, undone at the end),
    which keeps the squaring count low when entry magnitudes are wildly
    mixed.
    """
    n = a.shape[0]
    m = (np.asarray(a, dtype=float) * float(t)).tolist()
    dscale = [1.0] * n
    _balance(m, n, dscale)
    nrm = 0.0
    for row in m:
        r = 0.0
        for x in row:
            r += abs(x)
        if r > nrm:
            nrm = r
    s = 0
    if nrm > 0.5:
        s = int(math.ceil(math.log2(nrm) + 1.0))
        f = 2.0 ** (-s)
        m = [[x * f for x in row] for row in m]

    b = _PADE_B
    a2 = _mm(m, m, n)
    a4 = _mm(a2, a2, n)
    a6 = _mm(a2, a4, n)
    u = [[b[1] * (1.0 if i == j else 0.0) + b[3] * a2[i][j] + b[5] * a4[i][j]
          for j in range(n)] for i in range(n)]
    u = _mm(m, u, n)
    v = [[b[0] * (1.0 if i == j else 0.0) + b[2] * a2[i][j]
          + b[4] * a4[i][j] + b[6] * a6[i][j]
          for j in range(n)] for i in range(n)]
    num = [[v[i][j] + u[i][j] for j in range(n)] for i in range(n)]
    den = [[v[i][j] - u[i][j] for j in range(n)] for i in range(n)]
    r = _solve_matrix(den, num, n)
    for _ in range(s):
        r = _mm(r, r, n)
    # undo balancing: exp(t*a) = D exp(D^-1 (t*a) D) D^-1, all exact
    for i in range(n):
        di = dscale[i]
        ri = r[i]
        for j in range(n):
            ri[j] *= di / dscale[j]
    return np.array(r, dtype=float)


def jacobi_eigh(s):
    """Cyclic Jacobi sweeps on a symmetric matrix.

    Returns ``(w, q, converged)`` with eigenvalues ascending and
    ``s == q @ diag(w) @ q.T``. Convergence: off-diagonal Frobenius norm
    below 1e-13 times the Frobenius norm of the input.
    """
    n = s.shape[0]
    a = np.asarray(s, dtype=float).tolist()
    v = [[1.0 if i == j else 0.0 for j in range(n)] for i in range(n)]

    frob = 0.0
    for row in a:
        for x in row:
            frob += x * x
    frob = math.sqrt(frob)
    tol = 1e-13 * frob

    converged = frob == 0.0
    for _ in range(100):
        off = 0.0
        for i in range(n - 1):
            ai = a[i]
            for j in range(i + 1, n):
                off += ai[j] * ai[j]
        if math.sqrt(2.0 * off) <= tol:
            converged = True
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p][q]
                if apq == 0.0:
                    continue
                theta = 0.5 * (a[q][q] - a[p][p]) / apq
                if abs(theta) > 1e150:
                    tr = 0.5 / theta
                else:
                    tr = math.copysign(1.0, theta) / (
                        abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(tr * tr + 1.0)
                sn = tr * c
                tau = sn / (1.0 + c)
                a[p][p] -= tr * apq
                a[q][q] += tr * apq
                a[p][q] = a[q][p] = 0.0
                for i in range(n):
                    if i != p and i != q:
                        aip = a[i][p]
                        aiq = a[i][q]
                        a[i][p] = a[p][i] = aip - sn * (aiq + tau * aip)
                        a[i][q] = a[q][i] = aiq + sn * (aip - tau * aiq)
                for i in range(n):
                    vip = v[i][p]
                    viq = v[i][q]
                    v[i][p] = vip - sn * (viq + tau * vip)
                    v[i][q] = viq + sn * (vip - tau * viq)

    w = [a[i][i] for i in range(n)]
    order = sorted(range(n), key=w.__getitem__)
    w_sorted = np.array([w[i] for i in order], dtype=float)
    q_sorted = np.array([[v[i][order[j]] for j in range(n)] for i in range(n)],
                        dtype=float)
    return w_sorted, q_sorted, converged


def _balance(a, n, scale):
    # Exact powers-of-two row/column equilibration, a similarity transform
    # so eigenvalues are untouched; matters here because rate matrices can
    # mix magnitudes from 1e-8 to 5e3. ``scale[i]`` accumulates the
    # diagonal D with A_balanced = D^-1 A D.
    radix = 2.0
    radix2 = radix * radix
    done = False
    while not done:
        done = True
        for i in range(n):
            c = 0.0
            r = 0.0
            for j in range(n):
                if j != i:
                    c += abs(a[j][i])
                    r += abs(a[i][j])
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
                    ai = a[i]
                    for j in range(n):
                        ai[j] *= g
                    for j in range(n):
                        a[j][i] *= f


def _hessenberg(a, n):
    # Householder similarity reduction to upper Hessenberg form.
    for k in range(n - 2):
        scale = 0.0
        for i in range(k + 1, n):
            scale += abs(a[i][k])
        if scale == 0.0:
            continue
        m = n - k - 1
        v = [a[k + 1 + i][k] / scale for i in range(m)]
        sigma = math.sqrt(sum(x * x for x in v))
        if sigma == 0.0:
            continue
        if v[0] < 0.0:
            sigma = -sigma
        v[0] += sigma
        beta = 1.0 / (sigma * v[0])
        # rows: A <- H A
        for j in range(n):
            s = 0.0
            for i in range(m):
                s += v[i] * a[k + 1 + i][j]
            s *= beta
            for i in range(m):
                a[k + 1 + i][j] -= s * v[i]
        # columns: A <- A H
        for i in range(n):
            ai = a[i]
            s = 0.0
            for j in range(m):
                s += ai[k + 1 + j] * v[j]
            s *= beta
            for j in range(m):
                ai[k + 1 + j] -= s * v[j]
        a[k + 1][k] = -sigma * scale
        for i in range(k + 2, n):
            a[i][k] = 0.0


def _hqr(h, n, max_iters):
    # Francis implicit double-shift QR on an upper Hessenberg matrix,
    # eigenvalues only, deflating 1x1 and 2x2 blocks off the bottom.
    wr = [0.0] * n
    wi = [0.0] * n
    anorm = 0.0
    for i in range(n):
        for j in range(max(0, i - 1), n):
            anorm += abs(h[i][j])
    if anorm == 0.0:
        return wr, wi, n
    found = 0
    iters = 0
    t = 0.0
    nn = n - 1
    while nn >= 0:
        its = 0
        while True:
            l = nn
            while l >= 1:
                s = abs(h[l - 1][l - 1]) + abs(h[l][l])
                if s == 0.0:
                    s = anorm
                if abs(h[l][l - 1]) <= _EPS * s:
                    h[l][l - 1] = 0.0
                    break
                l -= 1
            x = h[nn][nn]
            if l == nn:
                wr[nn] = x + t
                wi[nn] = 0.0
                found += 1
                nn -= 1
                break
            y = h[nn - 1][nn - 1]
            w = h[nn][nn - 1] * h[nn - 1][nn]
            if l == nn - 1:
                p = 0.5 * (y - x)
                q = p * p + w
                z = math.sqrt(abs(q))
                x += t
                if q >= 0.0:
                    z = p + math.copysign(z, p)
                    wr[nn - 1] = wr[nn] = x + z
                    if z != 0.0:
                        wr[nn] = x - w / z
                    wi[nn - 1] = wi[nn] = 0.0
                else:
                    wr[nn - 1] = wr[nn] = x + p
                    wi[nn - 1] = -z
                    wi[nn] = z
                found += 2
                nn -= 2
                break
            if iters >= max_iters:
                return wr, wi, found
            if its == 10 or its == 20:
                # exceptional shift to break limit cycles
                t += x
                for i in range(nn + 1):
                    h[i][i] -= x
                s = abs(h[nn][nn - 1]) + abs(h[nn - 1][nn - 2])
                y = x = 0.75 * s
                w = -0.4375 * s * s
            its += 1
            iters += 1
            m = nn - 2
            while m >= l:
                z = h[m][m]
                r = x - z
                s = y - z
                p = (r * s - w) / h[m + 1][m] + h[m][m + 1]
                q = h[m + 1][m + 1] - z - r - s
                r = h[m + 2][m + 1]
                s = abs(p) + abs(q) + abs(r)
                p /= s
                q /= s
                r /= s
                if m == l:
                    break
                u = abs(h[m][m - 1]) * (abs(q) + abs(r))
                v = abs(p) * (abs(h[m - 1][m - 1]) + abs(z)
                              + abs(h[m + 1][m + 1]))
                if u <= _EPS * v:
                    break
                m -= 1
            for i in range(m + 2, nn + 1):
                h[i][i - 2] = 0.0
                if i != m + 2:
                    h[i][i - 3] = 0.0
            for k in range(m, nn):
                if k != m:
                    p = h[k][k - 1]
                    q = h[k + 1][k - 1]
                    r = h[k + 2][k - 1] if k != nn - 1 else 0.0
                    x = abs(p) + abs(q) + abs(r)
                    if x == 0.0:
                        continue
                    p /= x
                    q /= x
                    r /= x
                s = math.sqrt(p * p + q * q + r * r)
                if p < 0.0:
                    s = -s
                if k == m:
                    if l != m:
                        h[k][k - 1] = -h[k][k - 1]
                else:
                    h[k][k - 1] = -s * x
                p += s
                x = p / s
                y = q / s
                z = r / s
                q /= p
                r /= p
                for j in range(k, nn + 1):
                    p2 = h[k][j] + q * h[k + 1][j]
                    if k != nn - 1:
                        p2 += r * h[k + 2][j]
                        h[k + 2][j] -= p2 * z
                    h[k + 1][j] -= p2 * y
                    h[k][j] -= p2 * x
                mmin = nn if k + 3 > nn else k + 3
                for i in range(l, mmin + 1):
                    p2 = x * h[i][k] + y * h[i][k + 1]
                    if k != nn - 1:
                        p2 += z * h[i][k + 2]
                        h[i][k + 2] -= p2 * r
                    h[i][k + 1] -= p2 * q
                    h[i][k] -= p2
    return wr, wi, found


def hessenberg_qr_eigvals(a, max_iters):
    """All eigenvalues of a general real matrix.

    Balancing, Householder Hessenberg reduction, then Francis double-shift
    QR. Returns ``(wr, wi, n_found, h_partial)``; when ``n_found < n`` the
    sweep budget ran out and only the trailing ``n_found`` entries of
    ``wr``/``wi`` are deflated eigenvalues.
    """
    n = a.shape[0]
    h = np.asarray(a, dtype=float).tolist()
    _balance(h, n, [1.0] * n)
    _hessenberg(h, n)
    wr, wi, found = _hqr(h, n, max_iters)
    return (np.array(wr, dtype=float), np.array(wi, dtype=float), found,
            np.array(h, dtype=float))


def cholesky_lower(m):
    """Lower Cholesky factor. Returns ``(L, fail_index)``; ``fail_index``
    is -1 on success, else the row whose pivot was not positive."""
    n = m.shape[0]
    a = np.asarray(m, dtype=float).tolist()
    low = [[0.0] * n for _ in range(n)]
    for j in range(n):
        lj = low[j]
        d = a[j][j]
        for k in range(j):
            d -= lj[k] * lj[k]
        if not d > 0.0:  # catches NaN as well
            return np.array(low, dtype=float), j
        d = math.sqrt(d)
        lj[j] = d
        inv = 1.0 / d
        for i in range(j + 1, n):
            li = low[i]
            s = a[i][j]
            for k in range(j):
                s -= li[k] * lj[k]
            li[j] = s * inv
    return np.array(low, dtype=float), -1


def rk4_propagator(b, total_t, n_steps):
    """Fundamental matrix of y' = B y over [0, total_t] by classical
    fixed-step RK4 applied to every basis vector at once."""
    n = b.shape[0]
    bm = np.asarray(b, dtype=float).tolist()
    y = [[1.0 if i == j else 0.0 for j in range(n)] for i in range(n)]
    h = total_t / n_steps
    h2 = 0.5 * h
    h6 = h / 6.0
    for _ in range(n_steps):
        k1 = _mm(bm, y, n)
        y2 = [[y[i][j] + h2 * k1[i][j] for j in range(n)] for i in range(n)]
        k2 = _mm(bm, y2, n)
        y3 = [[y[i][j] + h2 * k2[i][j] for j in range(n)] for i in range(n)]
        k3 = _mm(bm, y3, n)
        y4 = [[y[i][j] + h * k3[i][j] for j in range(n)] for i in range(n)]
        k4 = _mm(bm, y4, n)
        y = [[y[i][j] + h6 * (k1[i][j] + 2.0 * (k2[i][j] + k3[i][j])
                              + k4[i][j])
              for j in range(n)] for i in range(n)]
    return np.array(y, dtype=float)
