"""Periodic impulsive control of linear systems.

The state follows x' = A x between pulses and jumps to D x at every
multiple of the period tau; whether the pulsed system dies out is decided
by the spectral radius of the monodromy matrix exp(tau A) D. This package
certifies diagonal symmetrizability of A (which makes that radius map
convex in tau), evaluates and classifies the map, computes the stability
threshold tau_s and the optimal period tau_m, and simulates and
cross-validates the pulsed dynamics.
"""

from pulsekit._backend import BACKEND
from pulsekit.analysis import (
    AnalysisReport,
    HypothesisCheck,
    LongRunBehavior,
    Regime,
    classify,
    find_tau_m,
    find_tau_s,
    limit_at_infinity,
    stable_diagonal_check,
)
from pulsekit.presets import PRESETS, Preset, get_preset, preset_ids
from pulsekit.simulate import (
    ImpulseTrajectory,
    SampleTag,
    TrajectorySample,
    empirical_growth_factor,
    monodromy,
    propagate,
    verify_floquet_equivalence,
)
from pulsekit.spectral import (
    ControlSystem,
    DiagonalControl,
    SpectralCurve,
    control_system,
    derivative_at_zero,
    r_tau,
    r_tau_general,
    sample_curve,
    strong_convexity_parameter,
)
from pulsekit.symmetrize import (
    SymmetrizationCertificate,
    Verdict,
    check_cycle_condition,
    check_sign_symmetric,
    symmetrize,
)
from pulsekit.systemfile import load_system, save_system

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "__version__",
    "AnalysisReport",
    "HypothesisCheck",
    "LongRunBehavior",
    "Regime",
    "classify",
    "find_tau_m",
    "find_tau_s",
    "limit_at_infinity",
    "stable_diagonal_check",
    "PRESETS",
    "Preset",
    "get_preset",
    "preset_ids",
    "ImpulseTrajectory",
    "SampleTag",
    "TrajectorySample",
    "empirical_growth_factor",
    "monodromy",
    "propagate",
    "verify_floquet_equivalence",
    "ControlSystem",
    "DiagonalControl",
    "SpectralCurve",
    "control_system",
    "derivative_at_zero",
    "r_tau",
    "r_tau_general",
    "sample_curve",
    "strong_convexity_parameter",
    "SymmetrizationCertificate",
    "Verdict",
    "check_cycle_condition",
    "check_sign_symmetric",
    "symmetrize",
    "load_system",
    "save_system",
]
