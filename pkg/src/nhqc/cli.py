"""Command-line interface: pulse synthesis, single-shot evolution, sweeps.

Data goes to stdout as CSV; commentary and progress go to stderr.  Exit
codes: 0 success, 2 usage error, 3 domain error, 4 numerical-invariant
failure.

Units at the CLI surface: angles in radians (or degrees with ``--degrees``),
frequencies in MHz (converted internally as ``value * 2 pi * 1e6`` rad/s),
durations in ns.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from dataclasses import replace

import numpy as np

from . import dynamics, experiments, gates, schemes
from .dynamics import DecoherenceRates, ErrorInjection
from .errors import DomainError, InvariantError
from .gates import NAMED_GATES
from .schemes import GateSpec

TWO_PI = 2.0 * math.pi

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DOMAIN = 3
EXIT_INVARIANT = 4


def _mhz(value: float) -> float:
    return value * TWO_PI * 1e6


def _angle(value: float, degrees: bool) -> float:
    return math.radians(value) if degrees else value


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nhqc",
        description="Holonomic single-qubit gate pulses on a three-level "
                    "system: synthesis, evolution, robustness sweeps.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_scheme_flags(p):
        p.add_argument("--scheme", choices=("circular", "oss", "snhqc", "square"),
                       help="pulse scheme")
        p.add_argument("--gamma", type=float, help="geometric phase (rad)")
        p.add_argument("--theta", type=float, default=0.0,
                       help="rotation-axis polar angle (rad, default 0)")
        p.add_argument("--phi", type=float, default=0.0,
                       help="rotation-axis azimuth (rad, default 0)")
        p.add_argument("--k", type=float, default=1.0,
                       help="circular-scheme exponent (default 1)")
        p.add_argument("--ceiling", type=float, default=10.0,
                       help="Rabi ceiling in MHz (default 10)")
        p.add_argument("--tau", type=float, default=None,
                       help="impose a duration in ns instead of the ceiling")
        p.add_argument("--samples", type=int, default=schemes.DEFAULT_SAMPLES,
                       help="schedule samples")
        p.add_argument("--degrees", action="store_true",
                       help="interpret angle flags in degrees")

    p_synth = sub.add_parser("synth", help="synthesize a pulse schedule CSV")
    add_scheme_flags(p_synth)
    p_synth.add_argument("--out", default=None, help="output file (default stdout)")

    p_evolve = sub.add_parser("evolve", help="evolve a state through a schedule")
    add_scheme_flags(p_evolve)
    p_evolve.add_argument("--schedule", default=None,
                          help="schedule CSV file (instead of inline scheme flags)")
    p_evolve.add_argument("--theta0", type=float, default=None,
                          help="initial-state amplitude angle (rad)")
    p_evolve.add_argument("--phi0", type=float, default=0.0,
                          help="initial-state phase angle (rad)")
    p_evolve.add_argument("--average", action="store_true",
                          help="average fidelity over the initial-state grid")
    p_evolve.add_argument("--delta", type=float, default=0.0,
                          help="static detuning error (MHz)")
    p_evolve.add_argument("--eps", type=float, default=0.0,
                          help="multiplicative Rabi error")
    p_evolve.add_argument("--gamma1", type=float, default=0.0,
                          help="decay rate Gamma_1 (MHz)")
    p_evolve.add_argument("--gamma2", type=float, default=0.0,
                          help="dephasing rate Gamma_2 (MHz)")
    p_evolve.add_argument("--steps", type=int, default=dynamics.DEFAULT_STEPS,
                          help="RK4 steps")
    p_evolve.add_argument("--reduced", action="store_true",
                          help="use the reduced 121-state average grid")

    p_sweep = sub.add_parser("sweep", help="run a sweep campaign")
    p_sweep.add_argument("--preset", choices=experiments.PRESETS,
                         help="named campaign")
    p_sweep.add_argument("--gate", default="T", choices=tuple(NAMED_GATES),
                         help="named gate for the per-gate campaigns")
    p_sweep.add_argument("--config", default=None,
                         help="flat key=value config file")
    p_sweep.add_argument("--out", default=None, help="output file (default stdout)")
    p_sweep.add_argument("--jobs", type=int,
                         default=int(os.environ.get("NHQC_JOBS", "1")),
                         help="worker processes (default $NHQC_JOBS or 1)")
    p_sweep.add_argument("--reduced", action="store_true",
                         help="reduced grids: 121 states, 11 error points")
    p_sweep.add_argument("--steps", type=int, default=None, help="RK4 steps")
    p_sweep.add_argument("--ceiling", type=float, default=None,
                         help="Rabi ceiling (MHz)")
    p_sweep.add_argument("--delta-max", type=float, default=None,
                         help="detuning grid half-width (MHz)")
    p_sweep.add_argument("--delta-points", type=int, default=None)
    p_sweep.add_argument("--eps-max", type=float, default=None,
                         help="Rabi-error grid half-width")
    p_sweep.add_argument("--eps-points", type=int, default=None)

    sub.add_parser("named-gates", help="list the named gates as CSV")
    return parser


def _spec_from_flags(args) -> GateSpec:
    if args.gamma is None:
        raise DomainError("--gamma is required")
    return GateSpec(_angle(args.gamma, args.degrees),
                    _angle(args.theta, args.degrees),
                    _angle(args.phi, args.degrees))


def _synthesize(args) -> schemes.PulseSchedule:
    if args.scheme is None:
        raise DomainError("--scheme is required")
    spec = _spec_from_flags(args)
    ceiling = _mhz(args.ceiling)
    if args.scheme == "circular":
        if args.tau is not None:
            return schemes.synth_circular_fixed_tau(spec, args.k,
                                                    args.tau * 1e-9, args.samples)
        return schemes.synth_circular(spec, args.k, ceiling, args.samples)
    if args.scheme == "oss":
        if args.tau is not None:
            return schemes.synth_oss_fixed_tau(spec, args.tau * 1e-9, args.samples)
        return schemes.synth_oss(spec, ceiling, args.samples)
    if args.scheme == "snhqc":
        return schemes.synth_snhqc(spec, ceiling, args.samples)
    return schemes.synth_square(spec, ceiling, args.samples)


def _cmd_synth(args) -> int:
    sched = _synthesize(args)
    if args.out:
        schemes.write_schedule(sched, args.out)
    else:
        schemes.write_schedule(sched, sys.stdout)
    print(f"scheme={sched.scheme} gamma={sched.gamma:.6g} "
          f"tau_ns={sched.tau * 1e9:.4f} peak_MHz={sched.omega.max() / TWO_PI / 1e6:.4f}",
          file=sys.stderr)
    return EXIT_OK


def _cmd_evolve(args) -> int:
    if args.schedule:
        sched = schemes.read_schedule(args.schedule)
    else:
        sched = _synthesize(args)
    err = ErrorInjection(_mhz(args.delta), args.eps)
    rates = DecoherenceRates(_mhz(args.gamma1), _mhz(args.gamma2))
    spec = GateSpec(sched.gamma, sched.theta, sched.phi)
    rows = [("scheme", sched.scheme), ("tau_ns", repr(sched.tau * 1e9))]
    if args.average:
        grid = (11, 11) if args.reduced else (11, 91)
        fid = gates.average_fidelity(spec, sched, err, rates,
                                     n_steps=args.steps, grid=grid)
        rows += [("states", str(grid[0] * grid[1])),
                 ("avg_fidelity", repr(fid))]
    else:
        theta0 = _angle(args.theta0 or 0.0, args.degrees)
        phi0 = _angle(args.phi0, args.degrees)
        psi0 = gates.InitialState(theta0, phi0).ket()
        rho, info = dynamics.evolve_lindblad(
            dynamics.density_from_ket(psi0), sched, err, rates,
            n_steps=args.steps, return_info=True)
        target = np.zeros(4, dtype=complex)
        target[:2] = gates.target_unitary(spec) @ psi0[:2]
        pops = np.real(np.diag(rho))
        rows += [("p0", repr(float(pops[0]))), ("p1", repr(float(pops[1]))),
                 ("pe", repr(float(pops[2]))), ("ph", repr(float(pops[3]))),
                 ("fidelity", repr(gates.state_fidelity(rho, target))),
                 ("trace_drift", repr(info["trace_drift"])),
                 ("herm_drift", repr(info["herm_drift"])),
                 ("min_eig", repr(info["min_eig"]))]
    print("key,value")
    for key, val in rows:
        print(f"{key},{val}")
    return EXIT_OK


def _cmd_sweep(args) -> int:
    cfg = experiments.SweepConfig(jobs=args.jobs)
    if args.config:
        cfg = experiments.load_config(args.config, cfg)
    if args.ceiling is not None:
        cfg = replace(cfg, ceiling=_mhz(args.ceiling))
    if args.steps is not None:
        cfg = replace(cfg, n_steps=args.steps)
    if args.delta_max is not None or args.delta_points is not None:
        dmax = _mhz(args.delta_max) if args.delta_max is not None else max(cfg.delta_grid)
        dpts = args.delta_points or len(cfg.delta_grid)
        cfg = replace(cfg, delta_grid=tuple(np.linspace(-dmax, dmax, dpts)))
    if args.eps_max is not None or args.eps_points is not None:
        emax = args.eps_max if args.eps_max is not None else max(cfg.eps_grid)
        epts = args.eps_points or len(cfg.eps_grid)
        cfg = replace(cfg, eps_grid=tuple(np.linspace(-emax, emax, epts)))
    if args.reduced:
        cfg = experiments.reduced(cfg)
    preset = args.preset
    if preset is None:
        raise DomainError("--preset is required (or provide a full --config)")
    out = args.out or (cfg.out_path or None)
    text = experiments.run_preset(preset, args.gate, cfg, out)
    if out is None:
        sys.stdout.write(text)
    else:
        print(f"wrote {out}", file=sys.stderr)
    return EXIT_OK


def _cmd_named_gates(_args) -> int:
    print("name,gamma_rad,theta_rad,phi_rad")
    for name, ng in NAMED_GATES.items():
        print(f"{name},{ng.spec.gamma!r},{ng.spec.theta!r},{ng.spec.phi!r}")
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {"synth": _cmd_synth, "evolve": _cmd_evolve,
                "sweep": _cmd_sweep, "named-gates": _cmd_named_gates}
    try:
        return handlers[args.command](args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except InvariantError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
