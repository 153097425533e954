"""Pure-numpy fallback for the RK4 integration kernels.

Mirrors the compiled extension ``nhqc._core`` exactly: same signatures,
same discretization, same collapse operators.  All kernels take the drive
already rendered onto the half-step grid ``t_j = j * h / 2`` for
``j = 0 .. 2 n_steps``:

``op``      complex pump coupling  (drives |0> <-> |e>)
``os``      complex Stokes coupling (drives |1> <-> |e>)
``eshift``  real energy shift of |e> in the rotating frame

The Hamiltonian at grid index j is::

    H = eshift[j] |e><e| + op[j] |0><e| + os[j] |1><e| + h.c.

over the ordered basis (|0>, |1>, |e>, |h>); |h> is touched only by the
collapse operators  sigma_1 = |0><e| + sqrt(2) |e><1| + sqrt(3) |1><h|  and
sigma_2 = diag(0, 2, 1, 3)  entering as
``sum_j Gamma_j (sigma_j rho sigma_j^+ - {sigma_j^+ sigma_j, rho}/2)``.
"""

from __future__ import annotations

import math

import numpy as np

BACKEND = "python"

_SQRT2 = math.sqrt(2.0)
_SQRT3 = math.sqrt(3.0)
_SQRT6 = math.sqrt(6.0)

# sigma_1^+ sigma_1, sigma_2 and sigma_2^+ sigma_2 are all diagonal
_D1 = np.array([0.0, 2.0, 1.0, 3.0])
_S2 = np.array([0.0, 2.0, 1.0, 3.0])
_D2 = _S2 * _S2


def _apply_h(op, os_, es, psi):
    out = np.empty(4, dtype=complex)
    out[0] = op * psi[2]
    out[1] = os_ * psi[2]
    out[2] = np.conj(op) * psi[0] + np.conj(os_) * psi[1] + es * psi[2]
    out[3] = 0.0
    return out


def _h_matrix(op, os_, es):
    h = np.zeros((4, 4), dtype=complex)
    h[0, 2] = op
    h[2, 0] = np.conj(op)
    h[1, 2] = os_
    h[2, 1] = np.conj(os_)
    h[2, 2] = es
    return h


def _dissipator(rho, g1, g2):
    out = np.zeros_like(rho)
    if g1 != 0.0:
        m = np.zeros_like(rho)
        m[0, 0] = rho[2, 2]
        m[0, 2] = _SQRT2 * rho[2, 1]
        m[0, 1] = _SQRT3 * rho[2, 3]
        m[2, 0] = _SQRT2 * rho[1, 2]
        m[2, 2] = 2.0 * rho[1, 1]
        m[2, 1] = _SQRT6 * rho[1, 3]
        m[1, 0] = _SQRT3 * rho[3, 2]
        m[1, 2] = _SQRT6 * rho[3, 1]
        m[1, 1] = 3.0 * rho[3, 3]
        out += g1 * (m - 0.5 * (_D1[:, None] + _D1[None, :]) * rho)
    if g2 != 0.0:
        out += g2 * (np.outer(_S2, _S2) * rho
                     - 0.5 * (_D2[:, None] + _D2[None, :]) * rho)
    return out


def _lindblad_rhs(rho, op, os_, es, g1, g2):
    h = _h_matrix(op, os_, es)
    return 1j * (rho @ h - h @ rho) + _dissipator(rho, g1, g2)


def lindblad_rk4(rho0, op, os_, es, g1, g2, h):
    """Classic RK4 on one density matrix; re-Hermitized every step.

    Returns ``(rho, max_trace_drift, max_herm_drift)`` where the drifts are
    the largest per-step deviations seen before re-Hermitization.
    """
    n_steps = (len(op) - 1) // 2
    rho = np.array(rho0, dtype=complex)
    tdrift = 0.0
    hdrift = 0.0
    for j in range(n_steps):
        a, b, c = 2 * j, 2 * j + 1, 2 * j + 2
        k1 = _lindblad_rhs(rho, op[a], os_[a], es[a], g1, g2)
        k2 = _lindblad_rhs(rho + 0.5 * h * k1, op[b], os_[b], es[b], g1, g2)
        k3 = _lindblad_rhs(rho + 0.5 * h * k2, op[b], os_[b], es[b], g1, g2)
        k4 = _lindblad_rhs(rho + h * k3, op[c], os_[c], es[c], g1, g2)
        rho = rho + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        tdrift = max(tdrift, abs(np.trace(rho) - 1.0))
        hdrift = max(hdrift, float(np.max(np.abs(rho - rho.conj().T))))
        rho = 0.5 * (rho + rho.conj().T)
    return rho, tdrift, hdrift


def lindblad_rk4_propagator(op, os_, es, g1, g2, h):
    """RK4 on the 16x16 superoperator; acts on row-major ``rho.reshape(16)``.

    Identical step map to :func:`lindblad_rk4` (the flow is linear), so
    applying the result to any initial state reproduces the per-state
    integration up to rounding.
    """
    n_steps = (len(op) - 1) // 2
    eye = np.eye(4)
    static = np.zeros((16, 16), dtype=complex)
    if g1 != 0.0:
        s1 = np.zeros((4, 4), dtype=complex)
        s1[0, 2] = 1.0
        s1[2, 1] = _SQRT2
        s1[1, 3] = _SQRT3
        d1 = s1.conj().T @ s1
        static += g1 * (np.kron(s1, s1.conj())
                        - 0.5 * np.kron(d1, eye) - 0.5 * np.kron(eye, d1.T))
    if g2 != 0.0:
        s2 = np.diag(_S2).astype(complex)
        d2 = s2.conj().T @ s2
        static += g2 * (np.kron(s2, s2.conj())
                        - 0.5 * np.kron(d2, eye) - 0.5 * np.kron(eye, d2.T))

    def liouvillian(idx):
        hmat = _h_matrix(op[idx], os_[idx], es[idx])
        return 1j * (np.kron(eye, hmat.T) - np.kron(hmat, eye)) + static

    prop = np.eye(16, dtype=complex)
    for j in range(n_steps):
        a, b, c = 2 * j, 2 * j + 1, 2 * j + 2
        la, lb, lc = liouvillian(a), liouvillian(b), liouvillian(c)
        k1 = la @ prop
        k2 = lb @ (prop + 0.5 * h * k1)
        k3 = lb @ (prop + 0.5 * h * k2)
        k4 = lc @ (prop + h * k3)
        prop = prop + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return prop


def schrodinger_rk4(psi0, op, os_, es, h, renormalize=True):
    """RK4 for the pure state; optionally renormalized each step.

    Returns ``(psi, max_norm_drift)`` with the drift measured before
    renormalization.
    """
    n_steps = (len(op) - 1) // 2
    psi = np.array(psi0, dtype=complex)
    drift = 0.0
    for j in range(n_steps):
        a, b, c = 2 * j, 2 * j + 1, 2 * j + 2
        k1 = -1j * _apply_h(op[a], os_[a], es[a], psi)
        k2 = -1j * _apply_h(op[b], os_[b], es[b], psi + 0.5 * h * k1)
        k3 = -1j * _apply_h(op[b], os_[b], es[b], psi + 0.5 * h * k2)
        k4 = -1j * _apply_h(op[c], os_[c], es[c], psi + h * k3)
        psi = psi + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        norm = float(np.linalg.norm(psi))
        drift = max(drift, abs(norm - 1.0))
        if renormalize and norm > 0.0:
            psi = psi / norm
    return psi, drift
