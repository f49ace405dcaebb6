"""Command-line front end.

    pulsekit symmetrize (--input FILE | --preset ID)
    pulsekit curve      (--input FILE | --preset ID) --tau-max F --samples N --out FILE
    pulsekit analyze    (--input FILE | --preset ID)
    pulsekit simulate   (--input FILE | --preset ID) --tau F --periods N [--x0 LIST] --out FILE
    pulsekit preset

Reports are JSON on stdout with a fixed key order; curves and
trajectories are CSV files with LF line endings and floats at 17
significant digits, so repeated runs are byte-identical. Indices in
reports (the weakest-class k, symmetrization witnesses) are 1-based.
Exit codes: 0 success, 1 input or I/O error, 2 a negative symmetrize
verdict.
"""

from __future__ import annotations

import argparse
import json
import sys as _sys

import numpy as np

from pulsekit.analysis import classify
from pulsekit.errors import PulsekitError
from pulsekit.presets import PRESETS, get_preset
from pulsekit.simulate import empirical_growth_factor, propagate
from pulsekit.spectral import ControlSystem, r_tau, r_tau_general, sample_curve
from pulsekit.systemfile import load_system

__all__ = ["main"]


def _add_source(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument("--input", metavar="PATH",
                       help="JSON system file")
    group.add_argument("--preset", metavar="ID",
                       help="built-in system id (see 'pulsekit preset')")


def _resolve_system(args) -> ControlSystem:
    if args.preset is not None:
        return get_preset(args.preset).system
    return load_system(args.input)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pulsekit",
        description="Periodic impulsive control of linear systems: "
                    "certify symmetrizability, sweep the spectral radius, "
                    "find stability thresholds and optimal pulse periods, "
                    "and simulate the pulsed dynamics.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("symmetrize",
                       help="certificate of diagonal symmetrizability")
    _add_source(p)

    p = sub.add_parser("curve", help="sample tau -> r(D exp(tau A)) to CSV")
    _add_source(p)
    p.add_argument("--tau-max", type=float, required=True, metavar="F")
    p.add_argument("--samples", type=int, required=True, metavar="N")
    p.add_argument("--out", required=True, metavar="PATH")

    p = sub.add_parser("analyze",
                       help="regime classification, tau_s and tau_m")
    _add_source(p)

    p = sub.add_parser("simulate", help="pulsed trajectory to CSV "
                                        "plus a growth-factor summary")
    _add_source(p)
    p.add_argument("--tau", type=float, required=True, metavar="F")
    p.add_argument("--periods", type=int, required=True, metavar="N")
    p.add_argument("--x0", metavar="LIST",
                   help="comma-separated initial state (default: all ones)")
    p.add_argument("--out", required=True, metavar="PATH")

    sub.add_parser("preset", help="list built-in systems")
    return parser


def _one_based(indices) -> list[int] | None:
    if indices is None:
        return None
    return [int(i) + 1 for i in indices]


def _cmd_symmetrize(args) -> int:
    system = _resolve_system(args)
    cert = system.certificate
    report = {
        "verdict": cert.verdict.value,
        "T": None if cert.t is None else [float(v) for v in cert.t],
        "residual": cert.residual,
        "witness": _one_based(cert.witness),
        "cycle_products": (None if cert.cycle_products is None
                           else list(cert.cycle_products)),
    }
    print(json.dumps(report, indent=2))
    return 0 if cert.symmetrizable else 2


def _cmd_curve(args) -> int:
    system = _resolve_system(args)
    curve = sample_curve(system, args.tau_max, args.samples)
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("tau,r,method\n")
        for tau, r, method in zip(curve.taus, curve.radii, curve.methods):
            fh.write(f"{tau:.17g},{r:.17g},{method}\n")
    return 0


def _cmd_analyze(args) -> int:
    system = _resolve_system(args)
    rep = classify(system)
    report = {
        "regime": rep.regime.value,
        "lambda_max": rep.lambda_max,
        "k": None if rep.k is None else rep.k + 1,
        "tau_s": rep.tau_s,
        "tau_m": rep.tau_m,
        "r_at_tau_m": rep.r_at_tau_m,
        "diagnostics": [
            {"check": c.name, "ok": c.ok, "detail": c.detail}
            for c in rep.diagnostics
        ],
        "time_unit": system.time_unit,
    }
    print(json.dumps(report, indent=2))
    return 0


def _cmd_simulate(args) -> int:
    system = _resolve_system(args)
    if args.x0 is not None:
        try:
            x0 = [float(tok) for tok in args.x0.split(",")]
        except ValueError:
            print(f"pulsekit: cannot parse --x0 {args.x0!r}",
                  file=_sys.stderr)
            return 1
    else:
        x0 = np.ones(system.n)
    traj = propagate(system, x0, args.tau, args.periods)
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        header = ",".join(["t", "tag"]
                          + [f"x{i + 1}" for i in range(system.n)])
        fh.write(header + "\n")
        for s in traj.samples:
            vals = ",".join(f"{v:.17g}" for v in s.x)
            fh.write(f"{s.t:.17g},{s.tag.value},{vals}\n")
    if system.certificate.symmetrizable:
        r, method = r_tau(system, args.tau), "Symmetrized"
    else:
        r, method = r_tau_general(system, args.tau), "General"
    summary = {
        "tau": args.tau,
        "periods": args.periods,
        "empirical_growth_factor": empirical_growth_factor(traj),
        "r": r,
        "method": method,
        "time_unit": system.time_unit,
    }
    print(json.dumps(summary, indent=2))
    return 0


def _fmt_matrix(a) -> str:
    rows = ", ".join(
        "[" + ", ".join(f"{v:g}" for v in row) + "]" for row in a)
    return f"[{rows}]"


def _cmd_preset(_args) -> int:
    rows = []
    for preset in PRESETS.values():
        system = preset.system
        rows.append((
            preset.id,
            str(system.n),
            system.time_unit,
            _fmt_matrix(system.a),
            "diag(" + ", ".join(f"{v:g}" for v in system.d) + ")",
            preset.provenance,
        ))
    headers = ("id", "n", "time_unit", "A", "D", "provenance")
    widths = [max(len(headers[c]), *(len(r[c]) for r in rows))
              for c in range(len(headers))]
    line = "  ".join(h.ljust(w) for h, w in zip(headers, widths))
    print(line.rstrip())
    for row in rows:
        print("  ".join(v.ljust(w) for v, w in zip(row, widths)).rstrip())
    return 0


_HANDLERS = {
    "symmetrize": _cmd_symmetrize,
    "curve": _cmd_curve,
    "analyze": _cmd_analyze,
    "simulate": _cmd_simulate,
    "preset": _cmd_preset,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except (PulsekitError, OSError) as exc:
        print(f"pulsekit: {exc}", file=_sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
