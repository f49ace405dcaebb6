"""Shared generators and oracles for the test suite."""

import numpy as np
import pytest

from pulsekit.spectral import ControlSystem, DiagonalControl


def random_symmetrizable_matrix(rng, n, diag_bound=3.0, off_bound=1.5,
                                t_low=0.7, t_high=1.4):
    """Random diagonally symmetrizable A with entries in [-3, 3].

    Built as T S T^-1 from a random symmetric S and a mild positive
    diagonal T, so symmetrizability holds by construction and entry
    bounds survive the similarity (ratio of T entries stays below 2).
    """
    s = rng.uniform(-off_bound, off_bound, (n, n))
    s = 0.5 * (s + s.T)
    s[np.diag_indices(n)] = rng.uniform(-diag_bound, diag_bound, n)
    t = rng.uniform(t_low, t_high, n)
    return (t[:, np.newaxis] / t[np.newaxis, :]) * s


def random_control(rng, n, low=0.05):
    """Pulse diagonal in (0, 1]^n; draws are distinct almost surely."""
    return rng.uniform(low, 1.0, n)


def random_system(rng, n=None, time_unit="time units"):
    if n is None:
        n = int(rng.integers(2, 5))
    a = random_symmetrizable_matrix(rng, n)
    d = random_control(rng, n)
    return ControlSystem(a=a, control=DiagonalControl(d=d),
                         time_unit=time_unit)


def char_poly_eig2(m):
    """Eigenvalues of a 2x2 matrix from the characteristic polynomial.

    Independent oracle: trace/determinant quadratic, returned ascending
    by real part (real case) or as a conjugate pair.
    """
    tr = m[0][0] + m[1][1]
    det = m[0][0] * m[1][1] - m[0][1] * m[1][0]
    disc = tr * tr - 4.0 * det
    if disc >= 0.0:
        root = np.sqrt(disc)
        return np.array(sorted([(tr - root) / 2.0, (tr + root) / 2.0]),
                        dtype=complex)
    root = np.sqrt(-disc)
    return np.array([complex(tr / 2.0, -root / 2.0),
                     complex(tr / 2.0, root / 2.0)])


def rotation_counterexample_radius(tau, d):
    """Closed-form spectral radius for the planar-rotation system.

    For D = diag(1, d) and the 90-degree rotation generator, the pulsed
    map has trace (1+d) cos(tau) and determinant d, so the radius is
    (1+d)/2 (|cos tau| + sqrt(cos^2 tau - 4d/(1+d)^2)) while the
    discriminant is nonnegative and sqrt(d) otherwise (a conjugate pair
    of constant modulus). Verified against direct 2x2 eigenvalues.
    """
    c = np.cos(tau)
    q = 4.0 * d / (1.0 + d) ** 2
    disc = c * c - q
    if disc >= 0.0:
        return 0.5 * (1.0 + d) * (abs(c) + np.sqrt(disc))
    return np.sqrt(d)


def random_sign_symmetric_matrix(rng, n):
    """Sign-symmetric with independent magnitudes and optional zero pairs;
    generically violates the cycle condition once an off-tree cycle
    exists."""
    a = rng.uniform(-3, 3, (n, n))
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < 0.25:
                a[i, j] = 0.0
                a[j, i] = 0.0
            else:
                a[j, i] = np.sign(a[i, j]) * abs(a[j, i])
    return a


def random_mixed_sign_symmetric(rng, n):
    """Mix of exactly symmetrizable (sparse patterns included), generic
    sign-symmetric, and planted decisive cycle violations."""
    kind = rng.integers(0, 3)
    if kind == 0:
        a = random_symmetrizable_matrix(rng, n)
        for i in range(n):
            for j in range(i + 1, n):
                if rng.random() < 0.3:
                    a[i, j] = 0.0
                    a[j, i] = 0.0
        return a
    if kind == 1:
        return random_sign_symmetric_matrix(rng, n)
    a = random_symmetrizable_matrix(rng, n)
    i, j = rng.choice(n, size=2, replace=False)
    a[i, j] *= 1.0 + 10.0 ** rng.uniform(-5, 0)  # far beyond tolerance
    return a


def second_difference(f, x, h):
    return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h)


@pytest.fixture
def rng():
    return np.random.default_rng(20260808)
