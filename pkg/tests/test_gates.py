"""Dark/bright construction, target unitaries, fidelity and its averages."""

import math
from math import fsum

import numpy as np
import pytest

from nhqc import dynamics, gates, schemes
from nhqc.dynamics import DecoherenceRates, ErrorInjection
from nhqc.errors import DomainError
from nhqc.gates import NAMED_GATES
from nhqc.schemes import GateSpec

TWO_PI = 2.0 * math.pi
CEILING = TWO_PI * 10e6
RATES = DecoherenceRates(TWO_PI * 3e3, TWO_PI * 3e3)


class TestDarkBright:
    def test_theta_zero(self):
        d, b = gates.dark_bright(0.0, 0.0)
        np.testing.assert_allclose(d, [1.0, 0.0], atol=0)
        np.testing.assert_allclose(b, [0.0, -1.0], atol=0)

    def test_equator(self):
        d, b = gates.dark_bright(math.pi / 2, 0.0)
        s = 1 / math.sqrt(2)
        np.testing.assert_allclose(d, [s, s], rtol=1e-15)
        np.testing.assert_allclose(b, [s, -s], rtol=1e-15)

    @pytest.mark.parametrize("theta,phi", [(0.3, 1.2), (2.8, 5.1), (math.pi, 0.0),
                                           (1.5707, 3.1)])
    def test_orthonormal(self, theta, phi):
        d, b = gates.dark_bright(theta, phi)
        assert abs(np.vdot(d, b)) < 1e-15
        assert np.linalg.norm(d) == pytest.approx(1.0, abs=1e-15)
        assert np.linalg.norm(b) == pytest.approx(1.0, abs=1e-15)


class TestTargetUnitary:
    def test_t_gate_diagonal(self):
        u = gates.target_unitary(NAMED_GATES["T"].spec)
        expected = np.diag([1.0, np.exp(1j * math.pi / 4)])
        np.testing.assert_allclose(u, expected, atol=1e-15)

    def test_not_is_pauli_x_up_to_phase(self):
        u = gates.target_unitary(NAMED_GATES["NOT"].spec)
        sx = np.array([[0, 1], [1, 0]], dtype=complex)
        # e^{i pi/2} e^{-i (pi/2) sx} = sx exactly
        np.testing.assert_allclose(u, sx, atol=1e-15)

    def test_hadamard(self):
        u = gates.target_unitary(NAMED_GATES["Hadamard"].spec)
        h = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
        np.testing.assert_allclose(u, h, atol=1e-15)

    @pytest.mark.parametrize("gamma,theta,phi", [(0.7, 1.1, 2.2), (2.9, 0.4, 4.0)])
    def test_projector_equals_rotation_form(self, gamma, theta, phi):
        u = gates.target_unitary(GateSpec(gamma, theta, phi))
        n = np.array([math.sin(theta) * math.cos(phi),
                      math.sin(theta) * math.sin(phi), math.cos(theta)])
        paulis = [np.array([[0, 1], [1, 0]], dtype=complex),
                  np.array([[0, -1j], [1j, 0]]),
                  np.diag([1.0, -1.0]).astype(complex)]
        ns = sum(c * p for c, p in zip(n, paulis))
        form = np.exp(1j * gamma / 2) * (math.cos(gamma / 2) * np.eye(2)
                                         - 1j * math.sin(gamma / 2) * ns)
        np.testing.assert_allclose(u, form, atol=1e-14)
        np.testing.assert_allclose(u @ u.conj().T, np.eye(2), atol=1e-14)


class TestStateFidelity:
    def test_pure_match(self):
        psi = np.array([0.6, 0.8, 0, 0], dtype=complex)
        rho = np.outer(psi, psi.conj())
        assert gates.state_fidelity(rho, psi) == pytest.approx(1.0, abs=1e-15)

    def test_orthogonal(self):
        psi = np.array([1, 0, 0, 0], dtype=complex)
        phi = np.array([0, 1, 0, 0], dtype=complex)
        assert gates.state_fidelity(np.outer(psi, psi.conj()), phi) == 0.0

    def test_maximally_mixed_qubit(self):
        rho = np.diag([0.5, 0.5, 0.0, 0.0]).astype(complex)
        psi = np.array([1, 1j, 0, 0], dtype=complex) / math.sqrt(2)
        assert gates.state_fidelity(rho, psi) == pytest.approx(0.5, abs=1e-15)

    def test_two_component_target_accepted(self):
        rho = np.diag([1.0, 0.0, 0.0, 0.0]).astype(complex)
        assert gates.state_fidelity(rho, np.array([1.0, 0.0])) == 1.0

    def test_depolarizing_admixture_monotone(self):
        psi = np.array([0.6, 0.8j, 0, 0], dtype=complex)
        rho = np.outer(psi, psi.conj())
        eye4 = np.eye(4, dtype=complex) / 4.0
        fids = [gates.state_fidelity((1 - p) * rho + p * eye4, psi)
                for p in np.linspace(0, 1, 11)]
        assert np.all(np.diff(fids) <= 1e-15)

    def test_rejects_non_hermitian(self):
        rho = np.zeros((4, 4), dtype=complex)
        rho[0, 1] = 1.0j
        rho[0, 0] = 1.0
        with pytest.raises(DomainError):
            gates.state_fidelity(rho, np.array([1, 1, 0, 0]) / math.sqrt(2))


class TestStateGrid:
    def test_grid_count(self):
        assert len(gates.state_grid()) == 1001
        assert len(gates.state_grid(11, 11)) == 121

    def test_bounds(self):
        grid = gates.state_grid()
        thetas = {s.theta0 for s in grid}
        phis = {s.phi0 for s in grid}
        assert min(thetas) == 0.0 and max(thetas) == math.pi
        assert min(phis) == 0.0 and max(phis) < TWO_PI

    def test_kets_normalized(self):
        for st in gates.state_grid(5, 7):
            assert np.linalg.norm(st.ket()) == pytest.approx(1.0, abs=1e-15)


class TestAverageFidelity:
    def test_ideal_schedule_near_unity(self):
        ng = NAMED_GATES["Hadamard"]
        sched = schemes.synth_circular(ng.spec, 1.0, CEILING, 2001)
        fid = gates.average_fidelity(ng.spec, sched, n_steps=2000, grid=(11, 11))
        assert fid >= 1.0 - 1e-5

    def test_peaked_at_zero_detuning(self):
        ng = NAMED_GATES["T"]
        sched = schemes.synth_circular(ng.spec, 1.0, CEILING, 2001)
        center = gates.average_fidelity(ng.spec, sched, rates=RATES,
                                        n_steps=2000, grid=(5, 9))
        for sign in (-1.0, 1.0):
            err = ErrorInjection(sign * TWO_PI * 1e6, 0.0)
            off = gates.average_fidelity(ng.spec, sched, err, RATES,
                                         n_steps=2000, grid=(5, 9))
            assert off < center

    def test_no_drive_equals_overlap_average(self):
        # eps = -1 nulls the drive, so the state never moves
        ng = NAMED_GATES["NOT"]
        sched = schemes.synth_circular(ng.spec, 1.0, CEILING, 2001)
        err = ErrorInjection(0.0, -1.0)
        got = gates.average_fidelity(ng.spec, sched, err, grid=(11, 11),
                                     n_steps=2000)
        states = gates.state_grid(11, 11)
        u = gates.target_unitary(ng.spec)
        expected = fsum(abs(np.vdot(u @ st.ket()[:2], st.ket()[:2])) ** 2
                        for st in states) / len(states)
        assert got == pytest.approx(expected, abs=1e-9)

    def test_grid_reversal_invariance(self):
        # fsum is exactly rounded, so summation order cannot matter
        ng = NAMED_GATES["S"]
        sched = schemes.synth_circular(ng.spec, 1.0, CEILING, 1001)
        prop = dynamics.lindblad_propagator(sched, rates=RATES, n_steps=1000)
        states = gates.state_grid(5, 9)
        fids = []
        for st in states:
            rho = dynamics.apply_propagator(prop, dynamics.density_from_ket(st.ket()))
            tgt = np.zeros(4, dtype=complex)
            tgt[:2] = gates.target_unitary(ng.spec) @ st.ket()[:2]
            fids.append(gates.state_fidelity(rho, tgt))
        assert fsum(fids) == fsum(reversed(fids))

    @pytest.mark.parametrize("name", ["T", "S", "NOT", "Hadamard"])
    def test_ideal_propagator_fidelity_random_states(self, name):
        ng = NAMED_GATES[name]
        sched = schemes.synth_circular(ng.spec, 1.0, CEILING, 2001)
        u4 = dynamics.unitary_propagator(sched, n_steps=2000)
        u = gates.target_unitary(ng.spec)
        rng = np.random.default_rng(21)
        for _ in range(100):
            v = rng.normal(size=2) + 1j * rng.normal(size=2)
            v /= np.linalg.norm(v)
            psi0 = np.concatenate([v, [0.0, 0.0]])
            out = u4 @ psi0
            assert abs(np.vdot(u @ v, out[:2])) ** 2 >= 1.0 - 1e-4
