"""Diagonal symmetrizability of a real square matrix.

A matrix A is diagonally symmetrizable when some invertible diagonal T
makes T^-1 A T symmetric. That holds exactly when A is sign-symmetric
(off-diagonal pairs agree in sign, with zero counting as its own sign) and
every directed simple cycle has the same weight product as its reversal.

``symmetrize`` decides the question constructively with a spanning-tree
sweep and returns a certificate either way; ``check_sign_symmetric`` and
``check_cycle_condition`` are the slow, direct oracles it is tested
against.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from itertools import combinations, permutations

import numpy as np

from pulsekit.errors import InvalidInputError, PreconditionError
from pulsekit.linalg import as_square_matrix, max_norm

__all__ = [
    "Verdict",
    "SymmetrizationCertificate",
    "check_sign_symmetric",
    "check_cycle_condition",
    "symmetrize",
]

# Entries at or below this magnitude count as exact zeros for sign
# classification, making the discontinuous sgn deterministic.
SIGN_FLOOR = 1e-300

# Relative tolerance for cycle products and non-tree balance checks; the
# products can span many orders of magnitude, so it must be relative.
CYCLE_RTOL = 1e-9

_BRUTE_FORCE_MAX_N = 8


class Verdict(str, enum.Enum):
    SYMMETRIZABLE = "Symmetrizable"
    NOT_SIGN_SYMMETRIC = "NotSignSymmetric"
    CYCLE_VIOLATION = "CycleViolation"
    ZERO_PATTERN_ASYMMETRIC = "ZeroPatternAsymmetric"


@dataclass(frozen=True)
class SymmetrizationCertificate:
    """Outcome of a symmetrizability decision.

    On success ``t`` holds the positive diagonal of T (first index of each
    connected component normalized to 1), ``symmetrized`` is T^-1 A T, and
    ``residual`` its worst asymmetry. On failure ``witness`` is the
    offending index pair or index cycle (0-based), and for a cycle
    violation ``cycle_products`` carries the forward and reverse products.
    """

    verdict: Verdict
    t: np.ndarray | None = None
    symmetrized: np.ndarray | None = None
    witness: tuple[int, ...] | None = None
    cycle_products: tuple[float, float] | None = None
    residual: float | None = None

    @property
    def symmetrizable(self) -> bool:
        return self.verdict is Verdict.SYMMETRIZABLE


def _sgn(x: float) -> int:
    if abs(x) <= SIGN_FLOOR:
        return 0
    return 1 if x > 0.0 else -1


def check_sign_symmetric(a) -> tuple[bool, tuple[int, int] | None]:
    """True when sgn(A_ij) == sgn(A_ji) for every off-diagonal pair.

    On failure returns the first violating (i, j) in row-major order.
    """
    m = as_square_matrix(a, "a")
    n = m.shape[0]
    for i in range(n):
        for j in range(n):
            if i != j and _sgn(m[i, j]) != _sgn(m[j, i]):
                return False, (i, j)
    return True, None


def _products_close(fwd: float, rev: float) -> bool:
    return abs(fwd - rev) <= CYCLE_RTOL * max(abs(fwd), abs(rev))


def check_cycle_condition(a) -> tuple[bool, tuple[int, ...] | None]:
    """Brute-force cycle condition over all simple cycles (n <= 8).

    Requires a sign-symmetric input. 2-cycles hold identically, so only
    lengths 3..n are enumerated, each once up to rotation and direction.
    This is the oracle for ``symmetrize``; for larger matrices use
    ``symmetrize`` itself.
    """
    m = as_square_matrix(a, "a")
    n = m.shape[0]
    if n > _BRUTE_FORCE_MAX_N:
        raise InvalidInputError(
            f"brute-force cycle enumeration is limited to n <= "
            f"{_BRUTE_FORCE_MAX_N}; use symmetrize() for n = {n}")
    ok, pair = check_sign_symmetric(m)
    if not ok:
        raise PreconditionError(
            f"cycle condition requires a sign-symmetric matrix; "
            f"sgn mismatch at {pair}")
    for k in range(3, n + 1):
        for subset in combinations(range(n), k):
            anchor = subset[0]
            for rest in permutations(subset[1:]):
                if rest[0] > rest[-1]:
                    continue  # each cycle once, not once per direction
                cycle = (anchor,) + rest
                fwd = 1.0
                rev = 1.0
                for idx in range(k):
                    u = cycle[idx]
                    v = cycle[(idx + 1) % k]
                    fwd *= m[u, v]
                    rev *= m[v, u]
                if not _products_close(fwd, rev):
                    return False, cycle
    return True, None


def _first_pattern_violation(m, n):
    """First row-major off-diagonal violation, classified by kind."""
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            si, sj = _sgn(m[i, j]), _sgn(m[j, i])
            if si == sj:
                continue
            if si == 0 or sj == 0:
                return Verdict.ZERO_PATTERN_ASYMMETRIC, (i, j)
            return Verdict.NOT_SIGN_SYMMETRIC, (i, j)
    return None, None


def symmetrize(a) -> SymmetrizationCertificate:
    """Decide diagonal symmetrizability and construct T when it exists.

    T is built by breadth-first traversal of the off-diagonal support
    graph: each component root gets T_ii = 1 and crossing an edge i -> j
    sets T_jj = T_ii * sqrt(A_ji / A_ij). Every non-tree edge is then
    checked against the balance relation A_ij = A_ji (T_ii/T_jj)^2; a
    failing edge is reported as its fundamental cycle.
    """
    m = as_square_matrix(a, "a")
    n = m.shape[0]

    verdict, pair = _first_pattern_violation(m, n)
    if verdict is not None:
        return SymmetrizationCertificate(verdict=verdict, witness=pair)

    # support graph: both directions nonzero (pattern symmetric by now)
    adj = [[] for _ in range(n)]
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            if _sgn(m[i, j]) != 0:
                adj[i].append(j)
                adj[j].append(i)
                edges.append((i, j))

    t = [0.0] * n
    parent = [-1] * n
    depth = [0] * n
    visited = [False] * n
    tree_edges = set()
    for root in range(n):
        if visited[root]:
            continue
        t[root] = 1.0
        visited[root] = True
        queue = [root]
        while queue:
            i = queue.pop(0)
            for j in adj[i]:
                if not visited[j]:
                    visited[j] = True
                    t[j] = t[i] * math.sqrt(m[j, i] / m[i, j])
                    parent[j] = i
                    depth[j] = depth[i] + 1
                    tree_edges.add((min(i, j), max(i, j)))
                    queue.append(j)

    for i, j in edges:
        if (i, j) in tree_edges:
            continue
        lhs = m[i, j] * t[j] * t[j]
        rhs = m[j, i] * t[i] * t[i]
        if not _products_close(lhs, rhs):
            cycle = _fundamental_cycle(i, j, parent, depth)
            fwd = 1.0
            rev = 1.0
            k = len(cycle)
            for idx in range(k):
                u = cycle[idx]
                v = cycle[(idx + 1) % k]
                fwd *= m[u, v]
                rev *= m[v, u]
            return SymmetrizationCertificate(
                verdict=Verdict.CYCLE_VIOLATION,
                witness=cycle,
                cycle_products=(fwd, rev))

    tv = np.array(t)
    a_tilde = m * (tv[np.newaxis, :] / tv[:, np.newaxis])
    residual = max_norm(a_tilde - a_tilde.T)
    return SymmetrizationCertificate(
        verdict=Verdict.SYMMETRIZABLE,
        t=tv,
        symmetrized=a_tilde,
        residual=float(residual))


def _fundamental_cycle(i, j, parent, depth) -> tuple[int, ...]:
    """Vertex cycle formed by the tree path i..j plus the edge (j, i)."""
    up_i = []
    up_j = []
    while depth[i] > depth[j]:
        up_i.append(i)
        i = parent[i]
    while depth[j] > depth[i]:
        up_j.append(j)
        j = parent[j]
    while i != j:
        up_i.append(i)
        up_j.append(j)
        i = parent[i]
        j = parent[j]
    return tuple(up_i) + (i,) + tuple(reversed(up_j))
