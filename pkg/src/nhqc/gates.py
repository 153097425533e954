"""Target unitaries, fidelity, and fidelity averages over initial states.

The computational qubit lives on (|0>, |1>); a gate is specified by a
geometric phase ``gamma`` and a rotation axis (theta, phi).  The realized
operation multiplies the bright state by ``exp(i gamma)`` and leaves the
dark state alone, which on the computational subspace is the SU(2) rotation
``exp(i gamma / 2) * exp(-i (gamma / 2) n . sigma)`` up to the ignorable
global phase.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import fsum

import numpy as np

from . import dynamics
from .dynamics import DecoherenceRates, ErrorInjection, NO_DECOHERENCE, NO_ERROR
from .errors import DomainError
from .schemes import GateSpec, PulseSchedule

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class InitialState:
    """Computational-subspace ket ``cos(theta0)|0> + sin(theta0) e^{i phi0}|1>``.

    Note the amplitude angle is theta0 itself, not theta0/2; the grid over
    [0, pi] x [0, 2 pi) then covers every qubit state (twice over).
    """

    theta0: float
    phi0: float

    def ket(self) -> np.ndarray:
        return np.array([math.cos(self.theta0),
                         math.sin(self.theta0) * np.exp(1j * self.phi0),
                         0.0, 0.0], dtype=complex)


@dataclass(frozen=True)
class NamedGate:
    name: str
    spec: GateSpec


NAMED_GATES = {
    "T": NamedGate("T", GateSpec(math.pi / 4, 0.0, 0.0)),
    "S": NamedGate("S", GateSpec(math.pi / 2, 0.0, 0.0)),
    "NOT": NamedGate("NOT", GateSpec(math.pi, math.pi / 2, 0.0)),
    "Hadamard": NamedGate("Hadamard", GateSpec(math.pi, math.pi / 4, 0.0)),
}


def dark_bright(theta: float, phi: float):
    """Orthonormal dark/bright pair in span{|0>, |1>} for axis (theta, phi)."""
    half = 0.5 * theta
    dark = np.array([math.cos(half),
                     math.sin(half) * np.exp(1j * phi)], dtype=complex)
    bright = np.array([math.sin(half),
                       -math.cos(half) * np.exp(1j * phi)], dtype=complex)
    return dark, bright


def target_unitary(spec: GateSpec) -> np.ndarray:
    """2x2 target ``|d><d| + e^{i gamma} |b><b|`` on the computational basis."""
    dark, bright = dark_bright(spec.theta, spec.phi)
    return (np.outer(dark, dark.conj())
            + np.exp(1j * spec.gamma) * np.outer(bright, bright.conj()))


def state_fidelity(rho: np.ndarray, target: np.ndarray) -> float:
    """Overlap ``<target| rho |target>`` of a 4x4 state with a pure target."""
    rho = np.asarray(rho, dtype=complex)
    target = np.asarray(target, dtype=complex).ravel()
    if target.size == 2:
        target = np.concatenate([target, [0.0, 0.0]])
    if rho.shape != (4, 4) or target.size != 4:
        raise DomainError("need a 4x4 state and a 2- or 4-component target")
    val = target.conj() @ rho @ target
    if abs(val.imag) > 1e-12:
        raise DomainError(f"fidelity has imaginary residue {val.imag:.3e}; "
                          "rho is not Hermitian enough")
    return float(val.real)


def state_grid(n_theta: int = 11, n_phi: int = 91):
    """Product grid of initial states: theta0 over [0, pi] inclusive,
    phi0 over [0, 2 pi) excluding the endpoint.  11 x 91 = 1001 states."""
    thetas = np.linspace(0.0, math.pi, n_theta)
    phis = np.linspace(0.0, TWO_PI, n_phi, endpoint=False)
    return [InitialState(float(t), float(p)) for t in thetas for p in phis]


def _target_kets(spec: GateSpec, states) -> np.ndarray:
    u = target_unitary(spec)
    out = np.zeros((len(states), 4), dtype=complex)
    for i, st in enumerate(states):
        ket = st.ket()
        out[i, :2] = u @ ket[:2]
    return out


def average_fidelity(spec: GateSpec, schedule: PulseSchedule,
                     err: ErrorInjection = NO_ERROR,
                     rates: DecoherenceRates = NO_DECOHERENCE,
                     n_steps: int = dynamics.DEFAULT_STEPS,
                     grid=(11, 91)) -> float:
    """Mean fidelity against the target gate over the initial-state grid.

    One superoperator propagation serves every initial state; the average
    is a compensated (exact) sum in grid order, so results are bit-stable
    and invariant under grid permutations.
    """
    states = state_grid(*grid)
    prop = dynamics.lindblad_propagator(schedule, err, rates, n_steps)
    targets = _target_kets(spec, states)
    kets = np.array([st.ket() for st in states])
    rho0 = np.einsum("ni,nj->nij", kets, kets.conj()).reshape(len(states), 16)
    rho_final = (prop @ rho0.T).T.reshape(len(states), 4, 4)
    fids = np.einsum("ni,nij,nj->n", targets.conj(), rho_final, targets).real
    return fsum(float(f) for f in fids)/len(states)
