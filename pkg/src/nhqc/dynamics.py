"""Time-dependent Hamiltonian assembly and state propagation.

Works over the ordered basis (|0>, |1>, |e>, |h>).  The drive couples the
ground states to |e>; the third excited state |h> enters only through the
collapse operators.

Detuning convention: schedules store ``delta = (drive frequency) -
(transition frequency)``, so in the rotating frame the |e> level is shifted
by ``-(delta + delta_err)``.  Static control errors enter as
``delta -> delta + delta_err`` and ``omega -> (1 + eps_err) * omega``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _backend
from .errors import DomainError, InvariantError
from .schemes import PulseSchedule

#: collapse operator sigma_1 = |0><e| + sqrt(2) |e><1| + sqrt(3) |1><h|
SIGMA_1 = np.zeros((4, 4), dtype=complex)
SIGMA_1[0, 2] = 1.0
SIGMA_1[2, 1] = math.sqrt(2.0)
SIGMA_1[1, 3] = math.sqrt(3.0)

#: collapse operator sigma_2 = |e><e| + 2 |1><1| + 3 |h><h|
SIGMA_2 = np.diag([0.0, 2.0, 1.0, 3.0]).astype(complex)

DEFAULT_STEPS = 4000

TRACE_TOL = 1e-9
HERM_TOL = 1e-12
EIG_TOL = -1e-9


@dataclass(frozen=True)
class ErrorInjection:
    """Static control errors: detuning shift (rad/s) and Rabi scale."""

    delta_err: float = 0.0
    eps_err: float = 0.0


@dataclass(frozen=True)
class DecoherenceRates:
    """Decay and dephasing rates (rad/s) for the two collapse channels."""

    gamma1: float = 0.0
    gamma2: float = 0.0

    def __post_init__(self):
        if self.gamma1 < 0.0 or self.gamma2 < 0.0:
            raise DomainError("decoherence rates must be non-negative")


NO_ERROR = ErrorInjection()
NO_DECOHERENCE = DecoherenceRates()


def _drive_terms(omega, delta, xi, theta, phi, err: ErrorInjection):
    scale = 1.0 + err.eps_err
    omega_p = scale * omega * math.sin(0.5 * theta) * np.exp(-1j * np.asarray(xi))
    omega_s = -scale * omega * math.cos(0.5 * theta) * np.exp(1j * (phi - np.asarray(xi)))
    eshift = -(np.asarray(delta, dtype=float) + err.delta_err)
    return omega_p, omega_s, eshift


def hamiltonian_at(t: float, schedule: PulseSchedule,
                   err: ErrorInjection = NO_ERROR) -> np.ndarray:
    """Rotating-frame Hamiltonian (rad/s) at time ``t``, controls linearly
    interpolated, with the static errors folded in.  The |h> row and column
    are zero."""
    omega, delta, xi = schedule.controls_at(t)
    omega_p, omega_s, eshift = _drive_terms(
        omega, delta, xi, schedule.theta, schedule.phi, err)
    h = np.zeros((4, 4), dtype=complex)
    h[0, 2] = omega_p
    h[2, 0] = np.conj(omega_p)
    h[1, 2] = omega_s
    h[2, 1] = np.conj(omega_s)
    h[2, 2] = eshift
    return h


def sample_controls(schedule: PulseSchedule, err: ErrorInjection,
                    n_steps: int):
    """Render the drive onto the RK4 half-step grid (2 n_steps + 1 points).

    Returns contiguous arrays (omega_p, omega_s, eshift) as consumed by the
    integration kernels.
    """
    if n_steps < 1:
        raise DomainError("n_steps must be positive")
    tq = np.linspace(0.0, schedule.tau, 2 * n_steps + 1)
    omega = np.interp(tq, schedule.t, schedule.omega)
    delta = np.interp(tq, schedule.t, schedule.delta)
    xi = np.interp(tq, schedule.t, schedule.xi)
    omega_p, omega_s, eshift = _drive_terms(
        omega, delta, xi, schedule.theta, schedule.phi, err)
    return (np.ascontiguousarray(omega_p, dtype=complex),
            np.ascontiguousarray(omega_s, dtype=complex),
            np.ascontiguousarray(eshift, dtype=float))


def lindblad_rhs(rho: np.ndarray, h: np.ndarray,
                 rates: DecoherenceRates) -> np.ndarray:
    """Right-hand side ``i [rho, H] + (1/2) sum_j Gamma_j (2 s_j rho s_j^+
    - s_j^+ s_j rho - rho s_j^+ s_j)`` with the fixed collapse operators."""
    out = 1j * (rho @ h - h @ rho)
    for g, s in ((rates.gamma1, SIGMA_1), (rates.gamma2, SIGMA_2)):
        if g != 0.0:
            sds = s.conj().T @ s
            out = out + g * (s @ rho @ s.conj().T - 0.5 * (sds @ rho + rho @ sds))
    return out


def _check_density(rho: np.ndarray, what: str = "state"):
    tr = abs(np.trace(rho) - 1.0)
    herm = float(np.max(np.abs(rho - rho.conj().T)))
    mineig = float(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)).min())
    if tr > TRACE_TOL or herm > max(HERM_TOL, 1e-12) or mineig < EIG_TOL:
        raise InvariantError(
            f"{what} violates density-matrix invariants: "
            f"|tr-1|={tr:.3e}, herm={herm:.3e}, min eig={mineig:.3e}; "
            "reduce the step size")
    return tr, herm, mineig


def evolve_lindblad(rho0: np.ndarray, schedule: PulseSchedule,
                    err: ErrorInjection = NO_ERROR,
                    rates: DecoherenceRates = NO_DECOHERENCE,
                    n_steps: int = DEFAULT_STEPS,
                    return_info: bool = False):
    """Propagate a density matrix through the schedule with fixed-step RK4.

    The state is re-Hermitized after every step; on return the trace,
    Hermiticity and positivity invariants are enforced (raising
    :class:`InvariantError` if the integration drifted past thresholds).
    """
    if n_steps < 500:
        raise DomainError("n_steps must be at least 500 for a full gate")
    rho0 = np.asarray(rho0, dtype=complex)
    if rho0.shape != (4, 4):
        raise DomainError("rho0 must be a 4x4 matrix")
    _check_density(rho0, "initial state")
    op, os_, es = sample_controls(schedule, err, n_steps)
    h = schedule.tau / n_steps
    rho, tdrift, hdrift = _backend.lindblad_rk4(
        np.ascontiguousarray(rho0.reshape(16)), op, os_, es,
        rates.gamma1, rates.gamma2, h)
    rho = np.asarray(rho)
    if tdrift > TRACE_TOL or hdrift > 100.0 * HERM_TOL:
        raise InvariantError(
            f"integration drift too large: trace {tdrift:.3e}, "
            f"Hermiticity {hdrift:.3e}; reduce the step size")
    mineig = float(np.linalg.eigvalsh(rho).min())
    if mineig < EIG_TOL:
        raise InvariantError(f"final state not positive: min eig {mineig:.3e}")
    if return_info:
        return rho, {"trace_drift": tdrift, "herm_drift": hdrift,
                     "min_eig": mineig}
    return rho


def lindblad_propagator(schedule: PulseSchedule,
                        err: ErrorInjection = NO_ERROR,
                        rates: DecoherenceRates = NO_DECOHERENCE,
                        n_steps: int = DEFAULT_STEPS) -> np.ndarray:
    """16x16 superoperator mapping ``rho0.reshape(16)`` to the final state.

    Built with the same RK4 step map as :func:`evolve_lindblad`; applying it
    to an initial state reproduces the per-state integration to rounding,
    which makes fidelity averages over many initial states cheap.
    """
    op, os_, es = sample_controls(schedule, err, n_steps)
    h = schedule.tau / n_steps
    return np.asarray(_backend.lindblad_rk4_propagator(
        op, os_, es, rates.gamma1, rates.gamma2, h))


def apply_propagator(prop: np.ndarray, rho0: np.ndarray) -> np.ndarray:
    """Evolve ``rho0`` with a propagator from :func:`lindblad_propagator`."""
    rho = (prop @ np.asarray(rho0, dtype=complex).reshape(16)).reshape(4, 4)
    return 0.5 * (rho + rho.conj().T)


def evolve_unitary(psi0: np.ndarray, schedule: PulseSchedule,
                   err: ErrorInjection = NO_ERROR,
                   n_steps: int = DEFAULT_STEPS) -> np.ndarray:
    """Propagate a pure state (no dissipation), renormalizing each step."""
    psi0 = np.asarray(psi0, dtype=complex).reshape(4)
    norm = np.linalg.norm(psi0)
    if abs(norm - 1.0) > 1e-9:
        raise DomainError(f"psi0 must be normalized, |psi0| = {norm:.12g}")
    op, os_, es = sample_controls(schedule, err, n_steps)
    h = schedule.tau / n_steps
    psi, drift = _backend.schrodinger_rk4(
        np.ascontiguousarray(psi0), op, os_, es, h, True)
    if drift > 1e-8:
        raise InvariantError(f"norm drift {drift:.3e} exceeds 1e-8; "
                             "reduce the step size")
    return np.asarray(psi)


def unitary_propagator(schedule: PulseSchedule,
                       err: ErrorInjection = NO_ERROR,
                       n_steps: int = DEFAULT_STEPS) -> np.ndarray:
    """4x4 propagator of the error-injected drive (no renormalization)."""
    op, os_, es = sample_controls(schedule, err, n_steps)
    h = schedule.tau / n_steps
    cols = []
    for m in range(4):
        e = np.zeros(4, dtype=complex)
        e[m] = 1.0
        psi, _ = _backend.schrodinger_rk4(e, op, os_, es, h, False)
        cols.append(np.asarray(psi))
    return np.column_stack(cols)


def density_from_ket(psi: np.ndarray) -> np.ndarray:
    """Rank-one density matrix of a (2- or 4-component) ket."""
    psi = np.asarray(psi, dtype=complex).ravel()
    if psi.size == 2:
        psi = np.concatenate([psi, [0.0, 0.0]])
    if psi.size != 4:
        raise DomainError("ket must have 2 or 4 components")
    return np.outer(psi, psi.conj())


def density_diagnostics(rho: np.ndarray) -> dict:
    """Trace, Hermiticity and positivity diagnostics of a density matrix."""
    rho = np.asarray(rho, dtype=complex)
    return {
        "trace_drift": float(abs(np.trace(rho) - 1.0)),
        "herm_drift": float(np.max(np.abs(rho - rho.conj().T))),
        "min_eig": float(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)).min()),
    }


def backend_name() -> str:
    """Name of the active integration backend ('compiled' or 'python')."""
    return _backend.backend_name()
