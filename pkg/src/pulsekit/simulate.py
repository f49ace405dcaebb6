"""Closed-form simulation of the pulsed system and its Floquet check.

Between pulses the state follows x' = A x exactly (matrix exponential
stepping, no integrator); at each pulse time n*tau the state is scaled
entrywise by the pulse diagonal. The convention is pulse-first: the jump
is applied at t = 0 before the first flow, which makes the per-period
map exactly exp(tau A) D, the monodromy matrix.

``verify_floquet_equivalence`` is the one place a numerical integrator
exists: it rebuilds the monodromy from the equivalent periodically
switched system (log(D) on a unit interval, then A for tau) with
fixed-step RK4 and reports the max-norm gap.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

import numpy as np

from pulsekit import linalg
from pulsekit._backend import kernels
from pulsekit.errors import (
    InvalidInputError,
    PreconditionError,
    TrajectoryOverflowError,
)
from pulsekit.spectral import ControlSystem

__all__ = [
    "SampleTag",
    "TrajectorySample",
    "ImpulseTrajectory",
    "propagate",
    "monodromy",
    "verify_floquet_equivalence",
    "empirical_growth_factor",
]

# log(d) entries beyond this magnitude make the switched system stiff for
# the default step; the step is refined tenfold and a warning emitted.
_STIFF_LOG = 50.0


class SampleTag(str, enum.Enum):
    PRE_JUMP = "PreJump"
    POST_JUMP = "PostJump"
    INTERIOR = "Interior"


@dataclass(frozen=True)
class TrajectorySample:
    t: float
    x: np.ndarray
    tag: SampleTag


@dataclass(frozen=True)
class ImpulseTrajectory:
    """Time-stamped states, with pre- and post-jump values at each pulse."""

    samples: tuple[TrajectorySample, ...]
    period: float
    n_periods: int

    def pre_jump_states(self) -> tuple[np.ndarray, np.ndarray]:
        """Times and states tagged PreJump, one per pulse instant."""
        pre = [s for s in self.samples if s.tag is SampleTag.PRE_JUMP]
        return (np.array([s.t for s in pre]),
                np.array([s.x for s in pre]))


def propagate(sys: ControlSystem, x0, tau: float, n_periods: int,
              interior_samples_per_period: int = 0) -> ImpulseTrajectory:
    """Simulate n_periods pulse cycles from x0 with period tau.

    Exact closed-form stepping: the post-jump state advances by
    exp(tau A) each period, with optional equally spaced interior samples
    from partial exponentials. Raises TrajectoryOverflowError (carrying
    the last finite sample) if an unstable run leaves double range.
    """
    x = np.asarray(x0, dtype=float).reshape(-1)
    if x.size != sys.n or not np.isfinite(x).all():
        raise InvalidInputError(
            f"x0 must be a finite vector of length {sys.n}")
    if not tau > 0.0 or not math.isfinite(tau):
        raise InvalidInputError(f"tau must be positive, got {tau}")
    if int(n_periods) != n_periods or n_periods < 1:
        raise InvalidInputError("n_periods must be a positive integer")
    m = int(interior_samples_per_period)
    if m != interior_samples_per_period or m < 0:
        raise InvalidInputError(
            "interior_samples_per_period must be a non-negative integer")
    n_periods = int(n_periods)
    tau = float(tau)

    full = linalg.mat_exp(sys.a, tau)
    partials = [linalg.mat_exp(sys.a, tau * j / (m + 1))
                for j in range(1, m + 1)]
    d = sys.d

    samples = [TrajectorySample(0.0, x, SampleTag.PRE_JUMP)]
    y = d * x
    samples.append(TrajectorySample(0.0, y, SampleTag.POST_JUMP))
    for period in range(n_periods):
        t0 = period * tau
        for j, part in enumerate(partials, start=1):
            xi = part @ y
            _check_finite(xi, samples)
            samples.append(TrajectorySample(
                t0 + tau * j / (m + 1), xi, SampleTag.INTERIOR))
        t1 = (period + 1) * tau
        x_pre = full @ y
        _check_finite(x_pre, samples)
        samples.append(TrajectorySample(t1, x_pre, SampleTag.PRE_JUMP))
        if period + 1 < n_periods:
            y = d * x_pre
            samples.append(TrajectorySample(t1, y, SampleTag.POST_JUMP))
    return ImpulseTrajectory(samples=tuple(samples), period=tau,
                             n_periods=n_periods)


def _check_finite(x: np.ndarray, samples) -> None:
    if not np.isfinite(x).all():
        last = samples[-1]
        raise TrajectoryOverflowError(
            f"state left double range after t = {last.t}",
            last_sample=(last.t, last.x))


def monodromy(sys: ControlSystem, tau: float) -> np.ndarray:
    """Per-period map exp(tau A) D (pulse first, then flow)."""
    if not tau > 0.0 or not math.isfinite(tau):
        raise InvalidInputError(f"tau must be positive, got {tau}")
    return linalg.mat_exp(sys.a, float(tau)) * sys.d[np.newaxis, :]


def verify_floquet_equivalence(sys: ControlSystem, tau: float,
                               step: float | None = None) -> float:
    """Max-norm gap between the RK4-integrated monodromy and exp(tau A) D.

    Integrates y' = B(t) y over one full period of the switched system
    (B = log(D) on [0, 1), B = A on [1, 1 + tau)) from each basis vector
    with classical fixed-step RK4. At the default step 1e-3 * (tau + 1)
    the residual stays below 1e-6 * (1 + ||exp(tau A) D||), and halving
    the step shrinks it about sixteenfold.
    """
    if not tau > 0.0 or not math.isfinite(tau):
        raise InvalidInputError(f"tau must be positive, got {tau}")
    tau = float(tau)
    log_d = np.log(sys.d)
    if step is None:
        step = 1e-3 * (tau + 1.0)
    else:
        step = float(step)
        if not step > 0.0:
            raise InvalidInputError("step must be positive")
    if np.max(np.abs(log_d)) > _STIFF_LOG:
        warnings.warn(
            "pulse factors below exp(-50) make the switched system stiff; "
            "refining the integrator step tenfold", stacklevel=2)
        step /= 10.0

    n1 = max(1, math.ceil(1.0 / step))
    n2 = max(1, math.ceil(tau / step))
    phi_pulse = kernels.rk4_propagator(np.diag(log_d), 1.0, n1)
    phi_flow = kernels.rk4_propagator(sys.a, tau, n2)
    numerical = phi_flow @ phi_pulse
    return linalg.max_norm(numerical - monodromy(sys, tau))


def empirical_growth_factor(traj: ImpulseTrajectory) -> float:
    """Geometric-mean growth of pre-jump state norms over the last half.

    Converges to r(tau) for generic initial states. Needs at least 10
    periods. A state that underflowed to exactly zero makes the factor
    0.0, the exact-death flag.
    """
    if traj.n_periods < 10:
        raise PreconditionError(
            f"need at least 10 periods, got {traj.n_periods}")
    _, states = traj.pre_jump_states()
    norms = np.linalg.norm(states, axis=1)
    if norms[0] == 0.0:
        raise PreconditionError("initial state is zero")
    start = traj.n_periods // 2
    if norms[start] == 0.0 or norms[-1] == 0.0:
        return 0.0
    span = traj.n_periods - start
    return float((norms[-1] / norms[start]) ** (1.0 / span))
