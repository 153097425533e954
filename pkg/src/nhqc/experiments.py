"""Deterministic sweep campaigns producing plot-ready CSV tables.

Each campaign mirrors one study: gate duration versus geometric phase at a
fixed Rabi ceiling, pulse envelopes at a fixed duration, and average-fidelity
robustness against detuning and Rabi errors under decoherence.  Campaigns
are configured by :class:`SweepConfig`, run grid points as independent jobs,
and write CSV with all floats in shortest round-trip form, so identical
configurations give byte-identical files.

Two duration conventions appear, following the studies reproduced here:

fixed ceiling
    every scheme is solved for the duration that puts its Rabi peak at
    ``cfg.ceiling`` (duration sweep);
fixed tau
    the k = 1 circular duration at ``cfg.ceiling`` is imposed on every
    pulse of a gate, so all variants see the same decoherence exposure
    (envelope and robustness sweeps).
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Optional, Sequence, TextIO, Union

import numpy as np

from . import gates, schemes
from .dynamics import DecoherenceRates, ErrorInjection
from .errors import DomainError, SingularSchemeError
from .gates import NAMED_GATES, NamedGate
from .schemes import GateSpec

TWO_PI = 2.0 * math.pi

#: decay/dephasing preset: Gamma_1 = Gamma_2 = 2 pi x 3 kHz
SUPERCONDUCTING_RATES = DecoherenceRates(TWO_PI * 3e3, TWO_PI * 3e3)


@dataclass(frozen=True)
class SweepConfig:
    """Grids and physics shared by the sweep campaigns."""

    scheme_set: tuple = ("circular", "oss", "snhqc", "square")
    k_list: tuple = (0.1, 1.0 / 3.0, 1.0, 5.0, 9.0)
    gamma_grid: tuple = tuple(np.linspace(math.pi / 40.0, math.pi, 40))
    ceiling: float = TWO_PI * 10e6
    delta_grid: tuple = tuple(np.linspace(-TWO_PI * 2e6, TWO_PI * 2e6, 41))
    eps_grid: tuple = tuple(np.linspace(-0.2, 0.2, 41))
    rates: DecoherenceRates = SUPERCONDUCTING_RATES
    n_steps: int = 4000
    n_samples: int = schemes.DEFAULT_SAMPLES
    theta_points: int = 11
    phi_points: int = 91
    jobs: int = 1
    out_path: Optional[str] = None

    def grid(self):
        return (self.theta_points, self.phi_points)


def reduced(cfg: SweepConfig) -> SweepConfig:
    """Shrink a config to quick-look grids: 121 states, 11 error points."""
    return replace(
        cfg,
        delta_grid=tuple(np.linspace(min(cfg.delta_grid), max(cfg.delta_grid), 11)),
        eps_grid=tuple(np.linspace(min(cfg.eps_grid), max(cfg.eps_grid), 11)),
        theta_points=11, phi_points=11,
    )


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return repr(x)
    return str(x)


def write_csv(rows: Sequence[dict], columns: Sequence[str],
              meta: Sequence[tuple], dest: Union[str, TextIO, None]) -> str:
    """Render rows to CSV text with ``# key=value`` metadata comments;
    writes to ``dest`` when given and returns the text either way."""
    lines = [f"# {key}={_fmt(val)}" for key, val in meta]
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(_fmt(row.get(col)) for col in columns))
    text = "\n".join(lines) + "\n"
    if isinstance(dest, str):
        with open(dest, "w") as fh:
            fh.write(text)
    elif dest is not None:
        dest.write(text)
    return text


def _run_jobs(worker, args_list, jobs: int):
    if jobs <= 1 or len(args_list) <= 1:
        return [worker(a) for a in args_list]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(worker, args_list, chunksize=1))


# ---------------------------------------------------------------------------
# duration versus geometric phase (fixed ceiling)


def _duration_row(args):
    scheme, k, gamma, ceiling = args
    row = {"scheme": scheme, "k": k, "gamma_rad": gamma, "status": "ok"}
    try:
        tau = schemes.duration_for_ceiling(scheme, GateSpec(gamma), k, ceiling)
        row["tau_ns"] = tau * 1e9
    except SingularSchemeError:
        row["tau_ns"] = None
        row["status"] = "singular"
    return row


def duration_vs_gamma(cfg: SweepConfig) -> list:
    """One row per (scheme, k, gamma); singular points are explicit rows."""
    jobs_args = []
    for scheme in cfg.scheme_set:
        ks = cfg.k_list if scheme == "circular" else (None,)
        for k in ks:
            for gamma in cfg.gamma_grid:
                jobs_args.append((scheme, k, float(gamma), cfg.ceiling))
    return _run_jobs(_duration_row, jobs_args, cfg.jobs)


DURATION_COLUMNS = ("scheme", "k", "gamma_rad", "tau_ns", "status")


# ---------------------------------------------------------------------------
# pulse envelopes at the gate's fixed duration


def _fixed_tau(gate: NamedGate, cfg: SweepConfig) -> float:
    return schemes.duration_for_ceiling("circular", gate.spec, 1.0, cfg.ceiling)


def _fixed_tau_schedule(gate: NamedGate, curve: str, tau: float,
                        cfg: SweepConfig):
    if curve == "oss":
        return schemes.synth_oss_fixed_tau(gate.spec, tau, cfg.n_samples)
    return schemes.synth_circular_fixed_tau(gate.spec, float(curve[2:]), tau,
                                            cfg.n_samples)


def envelope_export(gate: NamedGate, k_list=(1.0, 5.0, 9.0),
                    cfg: SweepConfig = SweepConfig(),
                    n_points: int = 501) -> list:
    """Rabi envelopes for the circular k variants and the orange-slice pulse,
    all rendered at the duration fixed by the k = 1 synthesis."""
    tau = _fixed_tau(gate, cfg)
    rows = []
    curves = [f"k={_fmt(float(k))}" for k in k_list] + ["oss"]
    for curve in curves:
        sched = _fixed_tau_schedule(gate, curve, tau, cfg)
        tq = np.linspace(0.0, tau, n_points)
        omega, _, _ = sched.controls_at(tq)
        for t, om in zip(tq, omega):
            rows.append({
                "gate": gate.name, "curve": curve, "tau_ns": tau * 1e9,
                "t_ns": float(t) * 1e9, "omega_MHz": float(om) / TWO_PI / 1e6,
            })
    return rows


ENVELOPE_COLUMNS = ("gate", "curve", "tau_ns", "t_ns", "omega_MHz")


# ---------------------------------------------------------------------------
# robustness sweeps (fixed tau, decoherence on)


def _fidelity_point(args):
    (gate, curve, tau, delta_err, eps_err, rates, n_steps, n_samples,
     grid) = args
    cfg = SweepConfig(n_samples=n_samples)
    sched = _fixed_tau_schedule(gate, curve, tau, cfg)
    return gates.average_fidelity(
        gate.spec, sched, ErrorInjection(delta_err, eps_err), rates,
        n_steps=n_steps, grid=grid)


def detuning_robustness(gate: NamedGate, k_list=(1.0, 5.0, 9.0),
                        cfg: SweepConfig = SweepConfig()) -> list:
    """Average fidelity versus static detuning shift, one curve per pulse."""
    tau = _fixed_tau(gate, cfg)
    curves = [f"k={_fmt(float(k))}" for k in k_list] + ["oss"]
    args, keys = [], []
    for curve in curves:
        for delta in cfg.delta_grid:
            args.append((gate, curve, tau, float(delta), 0.0, cfg.rates,
                         cfg.n_steps, cfg.n_samples, cfg.grid()))
            keys.append((curve, float(delta)))
    fids = _run_jobs(_fidelity_point, args, cfg.jobs)
    return [{"gate": gate.name, "curve": c, "delta_MHz": d / TWO_PI / 1e6,
             "avg_fidelity": f}
            for (c, d), f in zip(keys, fids)]


DETUNING_COLUMNS = ("gate", "curve", "delta_MHz", "avg_fidelity")


def rabi_robustness(gate: NamedGate, k_list=(1.0, 5.0, 9.0),
                    cfg: SweepConfig = SweepConfig()) -> list:
    """Average fidelity versus multiplicative Rabi error."""
    tau = _fixed_tau(gate, cfg)
    curves = [f"k={_fmt(float(k))}" for k in k_list] + ["oss"]
    args, keys = [], []
    for curve in curves:
        for eps in cfg.eps_grid:
            args.append((gate, curve, tau, 0.0, float(eps), cfg.rates,
                         cfg.n_steps, cfg.n_samples, cfg.grid()))
            keys.append((curve, float(eps)))
    fids = _run_jobs(_fidelity_point, args, cfg.jobs)
    return [{"gate": gate.name, "curve": c, "eps": e, "avg_fidelity": f}
            for (c, e), f in zip(keys, fids)]


RABI_COLUMNS = ("gate", "curve", "eps", "avg_fidelity")


def _ceiling_point(args):
    gate, ceiling, delta_err, rates, n_steps, n_samples, grid = args
    sched = schemes.synth_circular(gate.spec, 1.0, ceiling, n_samples)
    return gates.average_fidelity(
        gate.spec, sched, ErrorInjection(delta_err, 0.0), rates,
        n_steps=n_steps, grid=grid)


def ceiling_robustness(gate: NamedGate,
                       ceilings=(TWO_PI * 10e6, 1.5 * TWO_PI * 10e6,
                                 2.0 * TWO_PI * 10e6),
                       cfg: SweepConfig = SweepConfig()) -> list:
    """Detuning robustness of the k = 1 pulse at several Rabi ceilings;
    the duration is re-solved for each ceiling."""
    args, keys = [], []
    for ceiling in ceilings:
        for delta in cfg.delta_grid:
            args.append((gate, float(ceiling), float(delta), cfg.rates,
                         cfg.n_steps, cfg.n_samples, cfg.grid()))
            keys.append((float(ceiling), float(delta)))
    fids = _run_jobs(_ceiling_point, args, cfg.jobs)
    return [{"gate": gate.name, "ceiling_MHz": c / TWO_PI / 1e6,
             "delta_MHz": d / TWO_PI / 1e6, "avg_fidelity": f}
            for (c, d), f in zip(keys, fids)]


CEILING_COLUMNS = ("gate", "ceiling_MHz", "delta_MHz", "avg_fidelity")


# ---------------------------------------------------------------------------
# presets and config files

PRESETS = ("fig3", "fig4", "fig5", "fig6", "fig7")


def run_preset(preset: str, gate_name: str = "T",
               cfg: SweepConfig = SweepConfig(),
               dest: Union[str, TextIO, None] = None) -> str:
    """Run a named campaign and render its CSV."""
    if preset not in PRESETS:
        raise DomainError(f"unknown preset {preset!r}; choose from {PRESETS}")
    if gate_name not in NAMED_GATES:
        raise DomainError(f"unknown gate {gate_name!r}; "
                          f"choose from {tuple(NAMED_GATES)}")
    gate = NAMED_GATES[gate_name]
    meta = [("preset", preset), ("ceiling_MHz", cfg.ceiling / TWO_PI / 1e6),
            ("n_steps", cfg.n_steps),
            ("states", cfg.theta_points * cfg.phi_points)]
    if preset == "fig3":
        rows, cols = duration_vs_gamma(cfg), DURATION_COLUMNS
    elif preset == "fig4":
        meta.append(("gate", gate.name))
        rows, cols = envelope_export(gate, (1.0, 5.0, 9.0), cfg), ENVELOPE_COLUMNS
    elif preset == "fig5":
        meta.append(("gate", gate.name))
        rows, cols = detuning_robustness(gate, (1.0, 5.0, 9.0), cfg), DETUNING_COLUMNS
    elif preset == "fig6":
        meta.append(("gate", gate.name))
        rows, cols = rabi_robustness(gate, (1.0, 5.0, 9.0), cfg), RABI_COLUMNS
    else:
        meta.append(("gate", gate.name))
        rows, cols = ceiling_robustness(gate, cfg=cfg), CEILING_COLUMNS
    return write_csv(rows, cols, meta, dest)


_LIST_KEYS = {"k_list", "gamma_grid", "delta_grid", "eps_grid", "schemes"}


def load_config(path: str, base: SweepConfig = SweepConfig()) -> SweepConfig:
    """Read a flat ``key = value`` config file into a :class:`SweepConfig`.

    Lists are comma-separated; frequencies are given in MHz (keys ending in
    ``_mhz``) and converted to rad/s.
    """
    updates = {}
    with open(path) as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise DomainError(f"bad config line (need key = value): {raw!r}")
            key, val = (part.strip() for part in line.split("=", 1))
            key = key.lower()
            if key == "schemes":
                updates["scheme_set"] = tuple(v.strip() for v in val.split(","))
            elif key in _LIST_KEYS:
                updates[key] = tuple(float(v) for v in val.split(","))
            elif key == "ceiling_mhz":
                updates["ceiling"] = float(val) * TWO_PI * 1e6
            elif key == "delta_max_mhz":
                updates.setdefault("_delta_max", float(val) * TWO_PI * 1e6)
            elif key == "delta_points":
                updates.setdefault("_delta_points", int(val))
            elif key == "eps_max":
                updates.setdefault("_eps_max", float(val))
            elif key == "eps_points":
                updates.setdefault("_eps_points", int(val))
            elif key in ("gamma1_mhz", "gamma2_mhz"):
                updates[key] = float(val) * TWO_PI * 1e6
            elif key in ("n_steps", "n_samples", "theta_points", "phi_points",
                         "jobs", "gamma_points"):
                updates[key] = int(val)
            elif key == "out":
                updates["out_path"] = val
            else:
                raise DomainError(f"unknown config key {key!r}")
    cfg = base
    rates = cfg.rates
    if "gamma1_mhz" in updates or "gamma2_mhz" in updates:
        rates = DecoherenceRates(updates.pop("gamma1_mhz", rates.gamma1),
                                 updates.pop("gamma2_mhz", rates.gamma2))
        cfg = replace(cfg, rates=rates)
    if "gamma_points" in updates:
        n = updates.pop("gamma_points")
        cfg = replace(cfg, gamma_grid=tuple(np.linspace(math.pi / n, math.pi, n)))
    dmax = updates.pop("_delta_max", None)
    dpts = updates.pop("_delta_points", None)
    if dmax is not None or dpts is not None:
        dmax = dmax if dmax is not None else max(cfg.delta_grid)
        dpts = dpts if dpts is not None else len(cfg.delta_grid)
        cfg = replace(cfg, delta_grid=tuple(np.linspace(-dmax, dmax, dpts)))
    emax = updates.pop("_eps_max", None)
    epts = updates.pop("_eps_points", None)
    if emax is not None or epts is not None:
        emax = emax if emax is not None else max(cfg.eps_grid)
        epts = epts if epts is not None else len(cfg.eps_grid)
        cfg = replace(cfg, eps_grid=tuple(np.linspace(-emax, emax, epts)))
    return replace(cfg, **updates) if updates else cfg
