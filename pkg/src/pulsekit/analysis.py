"""Regime classification, stability threshold tau_s, optimal period tau_m.

For a symmetrizable system with a unique weakest-controlled class k and
all pulse factors in (0, 1], the radius map falls into one of three
shapes, decided by the sign of the leading eigenvalue of A and of the
self-rate A_kk:

* leading eigenvalue < 0: strictly decreasing, never pulse
  (``StableNeverControl``);
* leading eigenvalue > 0 and A_kk > 0: strictly increasing, pulse as
  often as possible (``UnstableSelfPromotingWeakClass``, tau_m = 0);
* leading eigenvalue > 0 and A_kk < 0 with A nonsingular: convex dip
  below one with a unique interior minimizer and a unique unit crossing
  (``UnstableInteriorOptimum``).

Anything outside those hypotheses is reported as ``OutOfTheoryScope``
with per-hypothesis diagnostics rather than an exception.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from pulsekit import linalg
from pulsekit.errors import (
    NoCrossingError,
    NoMinimizerError,
    NotApplicableError,
    PreconditionError,
)
from pulsekit.spectral import (
    NONSINGULAR_RTOL,
    ControlSystem,
    _radius_evaluator,
    _symmetrized_a,
)

__all__ = [
    "Regime",
    "LongRunBehavior",
    "HypothesisCheck",
    "AnalysisReport",
    "classify",
    "find_tau_s",
    "find_tau_m",
    "limit_at_infinity",
    "stable_diagonal_check",
]

# Bisection stops at this relative bracket width; the unit crossing is
# then pinned far below the 1e-10 requirement on |r(tau_s) - 1|.
_BISECT_RTOL = 1e-12

# Golden-section stops at this fraction of the initial bracket [0, tau_s].
_GOLDEN_RTOL = 1e-9

_INVGOLD = 0.6180339887498949  # (sqrt(5) - 1) / 2


class Regime(str, enum.Enum):
    STABLE_NEVER_CONTROL = "StableNeverControl"
    UNSTABLE_SELF_PROMOTING_WEAK_CLASS = "UnstableSelfPromotingWeakClass"
    UNSTABLE_INTERIOR_OPTIMUM = "UnstableInteriorOptimum"
    OUT_OF_THEORY_SCOPE = "OutOfTheoryScope"


class LongRunBehavior(str, enum.Enum):
    DIVERGES_TO_INFINITY = "DivergesToInfinity"
    DECAYS_TO_ZERO = "DecaysToZero"


@dataclass(frozen=True)
class HypothesisCheck:
    name: str
    ok: bool
    detail: str


@dataclass(frozen=True)
class AnalysisReport:
    """Classification outcome plus the quantities the regime defines.

    ``k`` is the 0-based index of the unique largest pulse factor (None
    on a tie). ``tau_s`` and ``tau_m`` are in the system's time units and
    present only where the regime defines them.
    """

    regime: Regime
    lambda_max: float
    k: int | None
    tau_s: float | None
    tau_m: float | None
    r_at_tau_m: float | None
    diagnostics: tuple[HypothesisCheck, ...]


def _spectrum(sys: ControlSystem) -> np.ndarray:
    w, _ = linalg.sym_eig(_symmetrized_a(sys))
    return w


def _eig_threshold(sys: ControlSystem) -> float:
    return NONSINGULAR_RTOL * max(1.0, linalg.max_norm(sys.a))


def classify(sys: ControlSystem) -> AnalysisReport:
    """Classify the system into the three regimes, or out of scope.

    Hypothesis failures never raise; they land in the diagnostics and the
    regime becomes ``OutOfTheoryScope``. Curves remain computable for
    such systems through ``sample_curve``.
    """
    checks: list[HypothesisCheck] = []
    cert = sys.certificate
    sym_ok = cert.symmetrizable
    checks.append(HypothesisCheck(
        "symmetrizable", sym_ok, f"verdict {cert.verdict.value}"))

    k = sys.control.unique_weakest_class
    checks.append(HypothesisCheck(
        "unique_weakest_class", k is not None,
        f"k = {k}" if k is not None else "largest pulse factor is tied"))

    constrained = sys.control.control_constrained
    checks.append(HypothesisCheck(
        "control_in_unit_interval", constrained,
        f"max d = {np.max(sys.d)!r}"))

    if sym_ok:
        eigs = _spectrum(sys)
        lam1 = float(eigs[-1])
    else:
        eigs = None
        lam1 = float(np.max(linalg.general_eigenvalues(sys.a).real))

    thr = _eig_threshold(sys)
    nonsingular = eigs is not None and bool(np.min(np.abs(eigs)) > thr)
    checks.append(HypothesisCheck(
        "nonsingular", nonsingular,
        f"min |eigenvalue| threshold {thr:.3e}"))

    lam1_decisive = abs(lam1) > thr
    checks.append(HypothesisCheck(
        "leading_eigenvalue_nonzero", lam1_decisive,
        f"lambda_max = {lam1!r}"))

    def out_of_scope() -> AnalysisReport:
        return AnalysisReport(
            regime=Regime.OUT_OF_THEORY_SCOPE, lambda_max=lam1, k=k,
            tau_s=None, tau_m=None, r_at_tau_m=None,
            diagnostics=tuple(checks))

    if not (sym_ok and k is not None and constrained and lam1_decisive):
        return out_of_scope()

    if lam1 < 0.0:
        checks.append(HypothesisCheck(
            "all_diagonal_negative", stable_diagonal_check(sys),
            "stable matrices have negative self-rates"))
        return AnalysisReport(
            regime=Regime.STABLE_NEVER_CONTROL, lambda_max=lam1, k=k,
            tau_s=None, tau_m=None, r_at_tau_m=None,
            diagnostics=tuple(checks))

    akk = float(sys.a[k, k])
    akk_decisive = abs(akk) > thr
    checks.append(HypothesisCheck(
        "weak_class_self_rate_nonzero", akk_decisive, f"A_kk = {akk!r}"))
    if not akk_decisive:
        return out_of_scope()

    d_k = float(sys.d[k])
    if akk > 0.0:
        if d_k < 1.0:
            tau_s = find_tau_s(sys)
        else:
            tau_s = None
            checks.append(HypothesisCheck(
                "unit_crossing_exists", False,
                "r(0) = D_kk = 1 and r is increasing, so r >= 1 for all "
                "tau; no threshold"))
        return AnalysisReport(
            regime=Regime.UNSTABLE_SELF_PROMOTING_WEAK_CLASS,
            lambda_max=lam1, k=k, tau_s=tau_s, tau_m=0.0, r_at_tau_m=d_k,
            diagnostics=tuple(checks))

    if not nonsingular:
        return out_of_scope()
    tau_s = find_tau_s(sys)
    tau_m, r_min = _golden_min(_radius_evaluator(sys), tau_s)
    return AnalysisReport(
        regime=Regime.UNSTABLE_INTERIOR_OPTIMUM, lambda_max=lam1, k=k,
        tau_s=tau_s, tau_m=tau_m, r_at_tau_m=r_min,
        diagnostics=tuple(checks))


def find_tau_s(sys: ControlSystem) -> float:
    """Unique period with r = 1: below it pulsing stabilizes, above it
    does not.

    Expands a geometric bracket from 0.1 / lambda_max until the radius
    exceeds one, then bisects; uniqueness of the crossing makes any sign
    change the right one. |r(tau_s) - 1| ends below 1e-10.
    """
    eigs = _spectrum(sys)
    lam1 = float(eigs[-1])
    if lam1 <= _eig_threshold(sys):
        raise PreconditionError(
            "tau_s is defined only for unstable systems "
            f"(lambda_max = {lam1!r})")
    k = sys.control.unique_weakest_class
    if k is not None and sys.a[k, k] > 0.0 and sys.d[k] >= 1.0:
        raise PreconditionError(
            "r(0) = D_kk >= 1 with an increasing radius map: no unit "
            "crossing exists")

    radius = _radius_evaluator(sys)
    tau0 = 0.1 / lam1
    lo = tau0
    shrinks = 0
    while radius(lo) >= 1.0:
        lo *= 0.5
        shrinks += 1
        if shrinks > 200:
            raise NoCrossingError(
                "no period with radius below one was found while "
                "shrinking toward zero")
    hi = 2.0 * lo
    while radius(hi) <= 1.0:
        lo = hi
        hi *= 2.0
        if hi > tau0 * 2.0 ** 60:
            raise NoCrossingError(
                "radius never exceeded one during bracket expansion")
    while hi - lo > _BISECT_RTOL * hi:
        mid = 0.5 * (lo + hi)
        if radius(mid) < 1.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _golden_min(radius, tau_s: float) -> tuple[float, float]:
    a, b = 0.0, tau_s
    tol = _GOLDEN_RTOL * tau_s
    c = b - _INVGOLD * (b - a)
    d = a + _INVGOLD * (b - a)
    fc = radius(c)
    fd = radius(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _INVGOLD * (b - a)
            fc = radius(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVGOLD * (b - a)
            fd = radius(d)
    mid = 0.5 * (a + b)
    return mid, radius(mid)


def find_tau_m(sys: ControlSystem) -> tuple[float, float]:
    """Minimizer of the radius map and the radius there.

    Interior-optimum systems get a golden-section search on [0, tau_s],
    valid because the map is strictly convex on that bracket; the
    self-promoting regime returns (0, D_kk). Stable systems have no
    minimizer (the infimum is only approached as tau grows) and raise.
    """
    report_regimeless = classify(sys)
    regime = report_regimeless.regime
    if regime is Regime.STABLE_NEVER_CONTROL:
        raise NoMinimizerError(
            "the radius map is strictly decreasing; the infimum is "
            "approached only as tau grows without bound")
    if regime is Regime.UNSTABLE_SELF_PROMOTING_WEAK_CLASS:
        k = report_regimeless.k
        return 0.0, float(sys.d[k])
    if regime is not Regime.UNSTABLE_INTERIOR_OPTIMUM:
        raise NotApplicableError(
            f"no minimizer theory for regime {regime.value}")
    return report_regimeless.tau_m, report_regimeless.r_at_tau_m


def limit_at_infinity(sys: ControlSystem) -> LongRunBehavior:
    """Whether the radius map blows up or dies out as tau grows.

    Decided by the sign of the leading eigenvalue of A; a leading
    eigenvalue at zero (within threshold) leaves the limit undecided
    and raises.
    """
    eigs = _spectrum(sys)
    lam1 = float(eigs[-1])
    if abs(lam1) <= _eig_threshold(sys):
        raise NotApplicableError(
            "leading eigenvalue is zero within threshold; the limit is "
            "indeterminate here")
    if lam1 > 0.0:
        return LongRunBehavior.DIVERGES_TO_INFINITY
    return LongRunBehavior.DECAYS_TO_ZERO


def stable_diagonal_check(sys: ControlSystem) -> bool:
    """Stable symmetrizable matrices must have all-negative diagonals.

    Returns whether that implication's conclusion holds (vacuously true
    when A is not stable); used as a diagnostics entry and test oracle.
    """
    eigs = _spectrum(sys)
    if float(eigs[-1]) >= 0.0:
        return True
    return bool((np.diag(sys.a) < 0.0).all())
