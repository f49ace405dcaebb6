"""Kernel backend selection.

The compiled extension ``pulsekit._speedups`` is preferred when importable;
``pulsekit._native`` is the pure-Python fallback. Set ``PULSEKIT_BACKEND``
to ``c`` or ``python`` to force one (forcing ``c`` without a built
extension raises, so misconfiguration is loud).
"""

import os

_forced = os.environ.get("PULSEKIT_BACKEND", "").strip().lower()

if _forced == "python":
    from pulsekit import _native as kernels
elif _forced == "c":
    from pulsekit import _speedups as kernels  # type: ignore[no-redef]
elif _forced == "":
    try:
        from pulsekit import _speedups as kernels  # type: ignore[no-redef]
    except ImportError:
        from pulsekit import _native as kernels
else:
    raise ImportError(
        f"PULSEKIT_BACKEND={_forced!r}: expected 'c', 'python', or unset")

BACKEND = kernels.BACKEND
