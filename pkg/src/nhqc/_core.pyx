# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled RK4 kernels for the 4-level master-equation integrators.

Hand-rolled 4x4 updates exploiting the sparsity of the drive Hamiltonian
and the fixed collapse operators.  Mirrors ``nhqc._kernels_py`` (same
signatures, same discretization); see that module for the conventions.
"""

from libc.math cimport sqrt, fabs

import numpy as np

BACKEND = "compiled"

cdef double SQRT2 = sqrt(2.0)
cdef double SQRT3 = sqrt(3.0)
cdef double SQRT6 = sqrt(6.0)

# diagonals of sigma_1^+ sigma_1, sigma_2 and sigma_2^+ sigma_2
cdef double[4] D1 = [0.0, 2.0, 1.0, 3.0]
cdef double[4] S2 = [0.0, 2.0, 1.0, 3.0]
cdef double[4] D2 = [0.0, 4.0, 1.0, 9.0]


cdef inline void _lindblad_rhs(const double complex* rho,
                               double complex op, double complex os,
                               double es, double g1, double g2,
                               double complex* out) noexcept:
    """out = i (rho H - H rho) + dissipator(rho)."""
    cdef double complex cop = op.conjugate()
    cdef double complex cos_ = os.conjugate()
    cdef double complex hr0, hr1, hr2      # rows of H rho
    cdef double complex rh0, rh1, rh2      # cols of rho H
    cdef Py_ssize_t i, j
    cdef double complex imag_unit = 1j

    # commutator part: out = i (rho H - H rho)
    for j in range(4):
        hr0 = op * rho[8 + j]                       # (H rho)[0, j]
        hr1 = os * rho[8 + j]                       # (H rho)[1, j]
        hr2 = cop * rho[j] + cos_ * rho[4 + j] + es * rho[8 + j]
        out[j] = -imag_unit * hr0
        out[4 + j] = -imag_unit * hr1
        out[8 + j] = -imag_unit * hr2
        out[12 + j] = 0.0
    for i in range(4):
        rh0 = rho[4 * i + 2] * cop                  # (rho H)[i, 0]
        rh1 = rho[4 * i + 2] * cos_
        rh2 = rho[4 * i] * op + rho[4 * i + 1] * os + rho[4 * i + 2] * es
        out[4 * i] = out[4 * i] + imag_unit * rh0
        out[4 * i + 1] = out[4 * i + 1] + imag_unit * rh1
        out[4 * i + 2] = out[4 * i + 2] + imag_unit * rh2

    if g1 != 0.0:
        # sigma_1 rho sigma_1^+ with sigma_1 = |0><e| + sqrt2 |e><1| + sqrt3 |1><h|
        out[0] += g1 * rho[10]
        out[1] += g1 * SQRT3 * rho[11]
        out[2] += g1 * SQRT2 * rho[9]
        out[4] += g1 * SQRT3 * rho[14]
        out[5] += g1 * 3.0 * rho[15]
        out[6] += g1 * SQRT6 * rho[13]
        out[8] += g1 * SQRT2 * rho[6]
        out[9] += g1 * SQRT6 * rho[7]
        out[10] += g1 * 2.0 * rho[5]
        for i in range(4):
            for j in range(4):
                out[4 * i + j] -= g1 * 0.5 * (D1[i] + D1[j]) * rho[4 * i + j]
    if g2 != 0.0:
        for i in range(4):
            for j in range(4):
                out[4 * i + j] += g2 * (S2[i] * S2[j]
                                        - 0.5 * (D2[i] + D2[j])) * rho[4 * i + j]


cdef inline void _apply_h(const double complex* psi,
                          double complex op, double complex os, double es,
                          double complex* out) noexcept:
    out[0] = op * psi[2]
    out[1] = os * psi[2]
    out[2] = op.conjugate() * psi[0] + os.conjugate() * psi[1] + es * psi[2]
    out[3] = 0.0


def lindblad_rk4(double complex[::1] rho0,
                 double complex[::1] op, double complex[::1] os,
                 double[::1] es, double g1, double g2, double h):
    """RK4 on one density matrix; re-Hermitized every step.

    Returns (rho as a (4, 4) array, max trace drift, max Hermiticity drift).
    """
    cdef Py_ssize_t n_steps = (op.shape[0] - 1) // 2
    cdef double complex rho[16]
    cdef double complex k1[16]
    cdef double complex k2[16]
    cdef double complex k3[16]
    cdef double complex k4[16]
    cdef double complex tmp[16]
    cdef double complex tr, dij
    cdef double tdrift = 0.0, hdrift = 0.0, mag
    cdef Py_ssize_t j, m, a, b, c, i2, j2

    for m in range(16):
        rho[m] = rho0[m]
    for j in range(n_steps):
        a = 2 * j
        b = a + 1
        c = a + 2
        _lindblad_rhs(rho, op[a], os[a], es[a], g1, g2, k1)
        for m in range(16):
            tmp[m] = rho[m] + 0.5 * h * k1[m]
        _lindblad_rhs(tmp, op[b], os[b], es[b], g1, g2, k2)
        for m in range(16):
            tmp[m] = rho[m] + 0.5 * h * k2[m]
        _lindblad_rhs(tmp, op[b], os[b], es[b], g1, g2, k3)
        for m in range(16):
            tmp[m] = rho[m] + h * k3[m]
        _lindblad_rhs(tmp, op[c], os[c], es[c], g1, g2, k4)
        for m in range(16):
            rho[m] = rho[m] + (h / 6.0) * (k1[m] + 2.0 * k2[m] + 2.0 * k3[m] + k4[m])
        tr = rho[0] + rho[5] + rho[10] + rho[15]
        mag = abs(tr - 1.0)
        if mag > tdrift:
            tdrift = mag
        for i2 in range(4):
            for j2 in range(i2, 4):
                dij = rho[4 * i2 + j2] - (rho[4 * j2 + i2]).conjugate()
                mag = abs(dij)
                if mag > hdrift:
                    hdrift = mag
        # re-Hermitize
        for i2 in range(4):
            rho[4 * i2 + i2] = rho[4 * i2 + i2].real + 0.0j
            for j2 in range(i2 + 1, 4):
                dij = 0.5 * (rho[4 * i2 + j2] + (rho[4 * j2 + i2]).conjugate())
                rho[4 * i2 + j2] = dij
                rho[4 * j2 + i2] = dij.conjugate()

    out = np.empty((4, 4), dtype=complex)
    for i2 in range(4):
        for j2 in range(4):
            out[i2, j2] = rho[4 * i2 + j2]
    return out, tdrift, hdrift


def lindblad_rk4_propagator(double complex[::1] op, double complex[::1] os,
                            double[::1] es, double g1, double g2, double h):
    """RK4 on the 16x16 superoperator acting on row-major rho.reshape(16).

    Same per-step linear map as :func:`lindblad_rk4` applied column by
    column, so P @ rho0.reshape(16) reproduces the per-state integration.
    """
    cdef Py_ssize_t n_steps = (op.shape[0] - 1) // 2
    # column c of the propagator lives at cols[16 c .. 16 c + 15]
    cdef double complex cols[256]
    cdef double complex k1[256]
    cdef double complex k2[256]
    cdef double complex k3[256]
    cdef double complex k4[256]
    cdef double complex tmp[256]
    cdef Py_ssize_t j, m, cidx, a, b, c

    for m in range(256):
        cols[m] = 0.0
    for m in range(16):
        cols[17 * m] = 1.0
    for j in range(n_steps):
        a = 2 * j
        b = a + 1
        c = a + 2
        for cidx in range(16):
            _lindblad_rhs(&cols[16 * cidx], op[a], os[a], es[a], g1, g2, &k1[16 * cidx])
        for m in range(256):
            tmp[m] = cols[m] + 0.5 * h * k1[m]
        for cidx in range(16):
            _lindblad_rhs(&tmp[16 * cidx], op[b], os[b], es[b], g1, g2, &k2[16 * cidx])
        for m in range(256):
            tmp[m] = cols[m] + 0.5 * h * k2[m]
        for cidx in range(16):
            _lindblad_rhs(&tmp[16 * cidx], op[b], os[b], es[b], g1, g2, &k3[16 * cidx])
        for m in range(256):
            tmp[m] = cols[m] + h * k3[m]
        for cidx in range(16):
            _lindblad_rhs(&tmp[16 * cidx], op[c], os[c], es[c], g1, g2, &k4[16 * cidx])
        for m in range(256):
            cols[m] = cols[m] + (h / 6.0) * (k1[m] + 2.0 * k2[m] + 2.0 * k3[m] + k4[m])

    out = np.empty((16, 16), dtype=complex)
    for cidx in range(16):
        for m in range(16):
            out[m, cidx] = cols[16 * cidx + m]
    return out


def schrodinger_rk4(double complex[::1] psi0,
                    double complex[::1] op, double complex[::1] os,
                    double[::1] es, double h, bint renormalize=True):
    """RK4 for the pure state; optionally renormalized each step.

    Returns (psi as a length-4 array, max norm drift before renormalizing).
    """
    cdef Py_ssize_t n_steps = (op.shape[0] - 1) // 2
    cdef double complex psi[4]
    cdef double complex k1[4]
    cdef double complex k2[4]
    cdef double complex k3[4]
    cdef double complex k4[4]
    cdef double complex tmp[4]
    cdef double complex minus_i = -1j
    cdef double drift = 0.0, norm
    cdef Py_ssize_t j, m, a, b, c

    for m in range(4):
        psi[m] = psi0[m]
    for j in range(n_steps):
        a = 2 * j
        b = a + 1
        c = a + 2
        _apply_h(psi, op[a], os[a], es[a], k1)
        for m in range(4):
            k1[m] = minus_i * k1[m]
            tmp[m] = psi[m] + 0.5 * h * k1[m]
        _apply_h(tmp, op[b], os[b], es[b], k2)
        for m in range(4):
            k2[m] = minus_i * k2[m]
            tmp[m] = psi[m] + 0.5 * h * k2[m]
        _apply_h(tmp, op[b], os[b], es[b], k3)
        for m in range(4):
            k3[m] = minus_i * k3[m]
            tmp[m] = psi[m] + h * k3[m]
        _apply_h(tmp, op[c], os[c], es[c], k4)
        for m in range(4):
            k4[m] = minus_i * k4[m]
            psi[m] = psi[m] + (h / 6.0) * (k1[m] + 2.0 * k2[m] + 2.0 * k3[m] + k4[m])
        norm = 0.0
        for m in range(4):
            norm += psi[m].real * psi[m].real + psi[m].imag * psi[m].imag
        norm = sqrt(norm)
        if fabs(norm - 1.0) > drift:
            drift = fabs(norm - 1.0)
        if renormalize and norm > 0.0:
            for m in range(4):
                psi[m] = psi[m] / norm

    out = np.empty(4, dtype=complex)
    for m in range(4):
        out[m] = psi[m]
    return out, drift
