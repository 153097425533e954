#!/usr/bin/env python3
"""Benchmark the compiled RK4 kernels against the pure-numpy fallback.

Times one full T-gate integration (4000 steps) per kernel and backend:

    python3 benchmarks/bench_backends.py [--steps N] [--repeat R]

The two backends implement identical discretizations, so the reported
max |difference| lines should sit at rounding level.
"""

import argparse
import math
import time

import numpy as np

from nhqc import _core, _kernels_py, dynamics, gates, schemes

TWO_PI = 2.0 * math.pi


def _time(fn, repeat):
    best = math.inf
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--steps", type=int, default=4000)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    try:
        backends = [("compiled", _core), ("python", _kernels_py)]
        _ = _core.BACKEND
    except AttributeError:
        backends = [("python", _kernels_py)]

    spec = gates.NAMED_GATES["T"].spec
    sched = schemes.synth_circular(spec, 1.0, TWO_PI * 10e6)
    err = dynamics.ErrorInjection(TWO_PI * 0.5e6, 0.02)
    rates = dynamics.DecoherenceRates(TWO_PI * 3e3, TWO_PI * 3e3)
    op, os_, es = dynamics.sample_controls(sched, err, args.steps)
    h = sched.tau / args.steps

    rng = np.random.default_rng(1)
    v = rng.normal(size=4) + 1j * rng.normal(size=4)
    v[2:] = 0.0
    v /= np.linalg.norm(v)
    rho0 = np.outer(v, v.conj())

    print(f"T-gate schedule, {args.steps} RK4 steps, best of {args.repeat}")
    print(f"{'kernel':<22}{'backend':<10}{'time':>12}")
    results = {}
    for name, mod in backends:
        t, out = _time(lambda m=mod: m.lindblad_rk4(
            np.ascontiguousarray(rho0.reshape(16)) if name == "compiled" else rho0.copy(),
            op, os_, es, rates.gamma1, rates.gamma2, h), args.repeat)
        results[("lindblad_rk4", name)] = (t, np.asarray(out[0]))
        print(f"{'lindblad_rk4':<22}{name:<10}{t * 1e3:>10.2f} ms")
    for name, mod in backends:
        t, out = _time(lambda m=mod: m.lindblad_rk4_propagator(
            op, os_, es, rates.gamma1, rates.gamma2, h), args.repeat)
        results[("propagator", name)] = (t, np.asarray(out))
        print(f"{'lindblad_propagator':<22}{name:<10}{t * 1e3:>10.2f} ms")
    for name, mod in backends:
        t, out = _time(lambda m=mod: m.schrodinger_rk4(
            np.ascontiguousarray(v), op, os_, es, h, True), args.repeat)
        results[("schrodinger", name)] = (t, np.asarray(out[0]))
        print(f"{'schrodinger_rk4':<22}{name:<10}{t * 1e3:>10.2f} ms")

    if len(backends) == 2:
        print()
        for kernel in ("lindblad_rk4", "propagator", "schrodinger"):
            tc, oc = results[(kernel, "compiled")]
            tp, op_ = results[(kernel, "python")]
            print(f"{kernel:<22}speedup {tp / tc:>6.1f}x   "
                  f"max|diff| {np.max(np.abs(oc - op_)):.2e}")


if __name__ == "__main__":
    main()
