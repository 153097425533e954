"""Pulse synthesis for the four single-qubit gate schemes.

Every scheme produces a :class:`PulseSchedule`: sampled Rabi frequency
``omega(t)``, detuning ``delta(t)`` and drive phase ``xi(t)`` over a duration
``tau``, together with the rotation-axis angles (theta, phi) that split the
drive into pump and Stokes tones.  The schemes are

``circular``
    Shortest-path scheme: the driven state traces the circle that encloses
    solid angle ``2*gamma``, with polar-angle ansatz
    ``alpha(t) = alpha_m * (4 t/tau (1 - t/tau))**(k+1)``.  Detuning and
    Rabi frequency stay proportional:
    ``delta(t) = -2 omega(t) (pi - gamma)/sqrt(2 pi gamma - gamma**2)``.
``oss``
    Orange-slice path: pole-to-pole meridians with a phase jump at the
    pole.  Duration is independent of gamma.
``snhqc``
    Prior circular-path scheme with a sine-squared azimuth schedule;
    singular at gamma = pi.
``square``
    Constant Rabi and detuning; the duration lower bound
    ``tau = sqrt(2 pi gamma - gamma**2) / omega0``.

Angular frequencies are rad/s throughout; CSV headers report ns and the
stored columns keep rad/s.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional, TextIO, Union

import numpy as np
from scipy import integrate, optimize

from . import geometry
from .errors import DomainError, SingularSchemeError, SolverError

TWO_PI = 2.0 * math.pi

#: Default number of schedule samples.  Chosen so the on-grid peak of the
#: sharpest spec'd profile (k = 9) matches the continuous peak to < 1e-6
#: relative, which keeps the sampled series consistent with the Rabi
#: ceiling it was solved for.
DEFAULT_SAMPLES = 8001


@dataclass(frozen=True)
class GateSpec:
    """Target rotation: geometric phase ``gamma`` about the axis
    ``n = (sin(theta) cos(phi), sin(theta) sin(phi), cos(theta))``."""

    gamma: float
    theta: float = 0.0
    phi: float = 0.0


@dataclass(frozen=True)
class PulseSchedule:
    """Sampled control schedule for one gate.

    ``t`` is a uniform closed grid over ``[0, tau]`` in seconds (with a
    duplicated sample where a control jumps).  ``alpha``/``beta`` record the
    Bloch-sphere path the synthesis used; they are not serialized.
    """

    scheme: str
    gamma: float
    theta: float
    phi: float
    k: Optional[float]
    tau: float
    t: np.ndarray
    omega: np.ndarray
    delta: np.ndarray
    xi: np.ndarray
    alpha: Optional[np.ndarray] = field(default=None, repr=False)
    beta: Optional[np.ndarray] = field(default=None, repr=False)

    def controls_at(self, tq):
        """Linear interpolation of (omega, delta, xi) at times ``tq``."""
        tq = np.asarray(tq, dtype=float)
        if np.any(tq < -1e-12 * self.tau) or np.any(tq > self.tau * (1.0 + 1e-12)):
            raise DomainError("query time outside the schedule support [0, tau]")
        return (np.interp(tq, self.t, self.omega),
                np.interp(tq, self.t, self.delta),
                np.interp(tq, self.t, self.xi))


@dataclass(frozen=True)
class PumpStokesEnvelope:
    """Complex pump/Stokes drive tones for a schedule."""

    omega_p: np.ndarray
    omega_s: np.ndarray


def detuning_ratio(gamma: float) -> float:
    """The constant ``delta(t)/omega(t) = -2 (pi-gamma)/sqrt(2 pi gamma - gamma^2)``."""
    return -2.0 * geometry.cot_ratio(gamma)


def _snap_gamma(gamma: float) -> float:
    # Inputs quoted to ~10 digits (CLI, config files) should hit the exact
    # pi branch points: detuning identically zero, scheme singularities.
    return math.pi if abs(gamma - math.pi) < 1e-9 else gamma


# ---------------------------------------------------------------------------
# unit-interval profiles
#
# Each scheme has a dimensionless profile omega_s(s) on s in [0, 1] such that
# omega(t) = omega_s(t/tau) / tau.  Durations follow from the profile peak:
# fixing the ceiling gives tau = peak(omega_s) / ceiling.


@dataclass(frozen=True)
class _Profile:
    omega_s: Callable[[np.ndarray], np.ndarray]
    alpha_s: Callable[[np.ndarray], np.ndarray]
    beta_s: Callable[[np.ndarray], np.ndarray]
    breakpoints: tuple


def _circular_profile(gamma: float, k: float) -> _Profile:
    a_m = geometry.alpha_max(gamma)
    chi = 0.5 * a_m                       # angular radius of the circle
    sin_chi = math.sin(chi)
    kp1 = k + 1.0

    def alpha_s(s):
        abar = 4.0 * s * (1.0 - s)
        return a_m * abar ** kp1

    def beta_s(s):
        alpha = np.minimum(alpha_s(s), a_m)
        return np.where(
            s <= 0.5,
            geometry.beta_from_alpha(alpha, gamma, "rising"),
            geometry.beta_from_alpha(alpha, gamma, "falling"),
        )

    def omega_s(s):
        # omega = |alpha_dot| / (2 sqrt(1 - cos^2(beta))) recast so the
        # apex 0/0 cancels analytically:
        #   omega = 2 a_m (k+1) abar^k cos(a/2) sin(chi) / sqrt(r sin(chi + a/2))
        # with r = sin((a_m - a)/2) / u^2 and u = 1 - 2 s.
        s = np.asarray(s, dtype=float)
        u = 1.0 - 2.0 * s
        u2 = u * u
        with np.errstate(divide="ignore", invalid="ignore"):
            log_abar = np.log1p(-u2)          # log(4 s (1-s))
            alpha = a_m * np.exp(kp1 * log_abar)
            # a_m - alpha, computed without cancellation near the apex
            defect = a_m * (-np.expm1(kp1 * log_abar))
            x = 0.5 * defect
            small = np.abs(x) < 1e-8
            safe_x = np.where(small, 1.0, x)
            sinc_x = np.where(small, 1.0 - x * x / 6.0, np.sin(safe_x) / safe_x)
            q = np.where(u2 > 0.0, defect / np.where(u2 > 0.0, u2, 1.0), kp1 * a_m)
            r = 0.5 * q * sinc_x
            abar_k = np.exp(k * log_abar)
        val = (2.0 * a_m * kp1 * abar_k * np.cos(0.5 * alpha) * sin_chi
               / np.sqrt(r * np.sin(chi + 0.5 * alpha)))
        val = np.where((s <= 0.0) | (s >= 1.0), 0.0, val)
        return val if val.ndim else float(val)

    return _Profile(omega_s, alpha_s, beta_s, breakpoints=(0.5,))


def _oss_profile(gamma: float) -> _Profile:
    def alpha_s(s):
        return math.pi * np.sin(math.pi * np.asarray(s, dtype=float)) ** 2

    def beta_s(s):
        return np.where(np.asarray(s, dtype=float) < 0.5, gamma, 0.0)

    def omega_s(s):
        # |alpha_dot| / 2
        return 0.5 * math.pi**2 * np.abs(np.sin(TWO_PI * np.asarray(s, dtype=float)))

    return _Profile(omega_s, alpha_s, beta_s, breakpoints=(0.25, 0.5, 0.75))


def _snhqc_profile(gamma: float) -> _Profile:
    amp = math.sqrt(2.0 * math.pi * gamma - gamma**2) / (math.pi - gamma)

    def _beta_pol(s):
        return math.pi * np.sin(0.5 * math.pi * np.asarray(s, dtype=float)) ** 2

    def alpha_s(s):
        return 2.0 * np.arctan(amp * np.sin(_beta_pol(s)))

    def beta_s(s):
        return _beta_pol(s) - 0.5 * math.pi

    def omega_s(s):
        s = np.asarray(s, dtype=float)
        bpol = _beta_pol(s)
        bdot = 0.5 * math.pi**2 * np.sin(math.pi * s)
        denom = 1.0 + (amp * np.sin(bpol)) ** 2
        adot = 2.0 * amp * np.cos(bpol) * bdot / denom
        alpha = 2.0 * np.arctan(amp * np.sin(bpol))
        val = 0.5 * np.sqrt((bdot * np.sin(alpha)) ** 2 + adot**2)
        return val if val.ndim else float(val)

    return _Profile(omega_s, alpha_s, beta_s, breakpoints=(0.5,))


def _profile_for(scheme: str, gamma: float, k: Optional[float]) -> _Profile:
    if scheme == "circular":
        return _circular_profile(gamma, k)
    if scheme == "oss":
        return _oss_profile(gamma)
    if scheme == "snhqc":
        return _snhqc_profile(gamma)
    raise DomainError(f"no unit profile for scheme {scheme!r}")


def profile_peak(profile: _Profile, n_dense: int = 4097) -> float:
    """Peak of a unit-interval profile: dense grid plus bounded refinement."""
    s = np.linspace(0.0, 1.0, n_dense)
    vals = profile.omega_s(s)
    i = int(np.argmax(vals))
    lo = s[max(i - 1, 0)]
    hi = s[min(i + 1, n_dense - 1)]
    res = optimize.minimize_scalar(
        lambda x: -float(profile.omega_s(np.asarray([x]))[0]),
        bounds=(lo, hi), method="bounded",
        options={"xatol": 1e-13},
    )
    if not res.success:
        raise SolverError(f"profile peak refinement failed: {res.message}")
    return max(float(vals[i]), float(-res.fun))


def cyclic_integral(scheme: str, gamma: float, k: Optional[float] = None) -> float:
    """Adaptive quadrature of the unit profile: equals ``integral(omega dt)``
    of any schedule built from it, independent of tau."""
    profile = _profile_for(scheme, gamma, k)
    val, _ = integrate.quad(
        lambda x: float(profile.omega_s(np.asarray([x]))[0]),
        0.0, 1.0, points=list(profile.breakpoints), limit=200,
        epsabs=1e-12, epsrel=1e-12,
    )
    return val


# ---------------------------------------------------------------------------
# synthesis


def _check_ceiling(ceiling: float) -> None:
    if not (ceiling > 0.0) or not math.isfinite(ceiling):
        raise DomainError(f"Rabi ceiling must be positive, got {ceiling!r}")


def _check_samples(n_samples: int) -> None:
    if n_samples < 100:
        raise DomainError(f"n_samples must be at least 100, got {n_samples}")


def _sample_circular(gate: GateSpec, k: float, tau: float, n_samples: int,
                     scheme: str = "circular") -> PulseSchedule:
    profile = _profile_for(scheme, gate.gamma, k)
    s = np.linspace(0.0, 1.0, n_samples)
    omega = profile.omega_s(s) / tau
    omega[0] = 0.0
    omega[-1] = 0.0
    delta = detuning_ratio(gate.gamma) * omega + 0.0
    return PulseSchedule(
        scheme=scheme, gamma=gate.gamma, theta=gate.theta, phi=gate.phi,
        k=(k if scheme == "circular" else None), tau=tau,
        t=s * tau, omega=omega, delta=delta, xi=np.zeros_like(s),
        alpha=profile.alpha_s(s), beta=profile.beta_s(s),
    )


def synth_circular(gate: GateSpec, k: float = 1.0,
                   ceiling: float = TWO_PI * 10e6,
                   n_samples: int = DEFAULT_SAMPLES) -> PulseSchedule:
    """Shortest-path schedule with peak Rabi frequency at ``ceiling``.

    The profile scales as 1/tau, so the duration solve is exact after one
    profile evaluation: ``tau = peak(omega_s) / ceiling``.
    """
    gate = replace(gate, gamma=_snap_gamma(gate.gamma))
    geometry._check_gamma(gate.gamma, hi=math.pi + 1e-12)
    if k <= 0.0:
        raise DomainError(f"k must be positive, got {k!r}")
    _check_ceiling(ceiling)
    _check_samples(n_samples)
    peak = profile_peak(_profile_for("circular", gate.gamma, k))
    return _sample_circular(gate, k, peak / ceiling, n_samples)


def synth_circular_fixed_tau(gate: GateSpec, k: float, tau: float,
                             n_samples: int = DEFAULT_SAMPLES) -> PulseSchedule:
    """Same path shape as :func:`synth_circular` but with ``tau`` imposed;
    the peak Rabi frequency then grows with ``k``."""
    gate = replace(gate, gamma=_snap_gamma(gate.gamma))
    geometry._check_gamma(gate.gamma, hi=math.pi + 1e-12)
    if k <= 0.0:
        raise DomainError(f"k must be positive, got {k!r}")
    if not (tau > 0.0):
        raise DomainError(f"tau must be positive, got {tau!r}")
    _check_samples(n_samples)
    return _sample_circular(gate, k, tau, n_samples)


def _insert_jump(s: np.ndarray, s_jump: float) -> np.ndarray:
    """Duplicate the grid point at ``s_jump`` (left/right copies of a jump)."""
    i = int(np.searchsorted(s, s_jump))
    if not math.isclose(s[i], s_jump, rel_tol=0.0, abs_tol=1e-12):
        return s
    return np.insert(s, i, s[i])


def synth_oss_fixed_tau(gate: GateSpec, tau: float,
                        n_samples: int = DEFAULT_SAMPLES) -> PulseSchedule:
    """Orange-slice schedule at an imposed duration."""
    gate = replace(gate, gamma=_snap_gamma(gate.gamma))
    geometry._check_gamma(gate.gamma)
    if not (tau > 0.0):
        raise DomainError(f"tau must be positive, got {tau!r}")
    _check_samples(n_samples)
    profile = _oss_profile(gate.gamma)
    s = _insert_jump(np.linspace(0.0, 1.0, n_samples), 0.5)
    jump = int(np.searchsorted(s, 0.5))      # first copy of the midpoint
    side = np.arange(s.size) <= jump         # left-closed halves
    omega = profile.omega_s(s) / tau
    omega[0] = 0.0
    omega[-1] = 0.0
    xi = np.where(side, gate.gamma - 0.5 * math.pi, 0.5 * math.pi)
    beta = np.where(side, gate.gamma, 0.0)
    return PulseSchedule(
        scheme="oss", gamma=gate.gamma, theta=gate.theta, phi=gate.phi,
        k=None, tau=tau, t=s * tau, omega=omega,
        delta=np.zeros_like(s), xi=xi,
        alpha=profile.alpha_s(s), beta=beta,
    )


def synth_oss(gate: GateSpec, ceiling: float = TWO_PI * 10e6,
              n_samples: int = DEFAULT_SAMPLES) -> PulseSchedule:
    """Orange-slice schedule; ``tau = pi**2 / (2 * ceiling)`` for any gamma."""
    _check_ceiling(ceiling)
    return synth_oss_fixed_tau(gate, 0.5 * math.pi**2 / ceiling, n_samples)


def synth_snhqc(gate: GateSpec, ceiling: float = TWO_PI * 10e6,
                n_samples: int = DEFAULT_SAMPLES) -> PulseSchedule:
    """Sine-squared circular-path schedule.  Rejects ``gamma = pi``, where
    the parametrization collapses onto the south pole."""
    gate = replace(gate, gamma=_snap_gamma(gate.gamma))
    if gate.gamma == math.pi:
        raise SingularSchemeError("the sine-squared scheme is singular at gamma = pi")
    geometry._check_gamma(gate.gamma, hi=math.pi)
    _check_ceiling(ceiling)
    _check_samples(n_samples)
    profile = _profile_for("snhqc", gate.gamma, None)
    tau = profile_peak(profile) / ceiling
    return _sample_circular(gate, None, tau, n_samples, scheme="snhqc")


def synth_square(gate: GateSpec, omega0: float = TWO_PI * 10e6,
                 n_samples: int = DEFAULT_SAMPLES) -> PulseSchedule:
    """Constant-control schedule: ``tau = sqrt(2 pi gamma - gamma**2)/omega0``."""
    gate = replace(gate, gamma=_snap_gamma(gate.gamma))
    geometry._check_gamma(gate.gamma)
    _check_ceiling(omega0)
    _check_samples(n_samples)
    gamma = gate.gamma
    tau = math.sqrt(2.0 * math.pi * gamma - gamma**2) / omega0
    s = np.linspace(0.0, 1.0, n_samples)
    omega = np.full_like(s, omega0)
    delta = np.full_like(s, detuning_ratio(gamma) * omega0 + 0.0)
    # Closed-form path: uniform precession about the circle axis.
    chi = 0.5 * geometry.alpha_max(gamma)
    rot = TWO_PI * s
    cos_a = np.clip(math.cos(chi) ** 2 + math.sin(chi) ** 2 * np.cos(rot), -1.0, 1.0)
    alpha = np.arccos(cos_a)
    y = -math.sin(chi) * np.sin(rot)
    x = (1.0 - np.cos(rot)) * math.cos(chi) * math.sin(chi)
    beta = np.arctan2(y, x)
    beta[0] = -0.5 * math.pi
    beta[-1] = 0.5 * math.pi
    return PulseSchedule(
        scheme="square", gamma=gamma, theta=gate.theta, phi=gate.phi,
        k=None, tau=tau, t=s * tau, omega=omega, delta=delta,
        xi=np.zeros_like(s), alpha=alpha, beta=beta,
    )


def duration_for_ceiling(scheme: str, gate: GateSpec,
                         k: Optional[float] = None,
                         ceiling: float = TWO_PI * 10e6) -> float:
    """Gate duration in seconds for a fixed Rabi ceiling (or ``omega0``
    for the square scheme)."""
    gate = replace(gate, gamma=_snap_gamma(gate.gamma))
    _check_ceiling(ceiling)
    if scheme == "square":
        geometry._check_gamma(gate.gamma)
        return math.sqrt(2.0 * math.pi * gate.gamma - gate.gamma**2) / ceiling
    if scheme == "oss":
        geometry._check_gamma(gate.gamma)
        return 0.5 * math.pi**2 / ceiling
    if scheme == "snhqc":
        if gate.gamma == math.pi:
            raise SingularSchemeError("the sine-squared scheme is singular at gamma = pi")
        geometry._check_gamma(gate.gamma, hi=math.pi)
        return profile_peak(_profile_for("snhqc", gate.gamma, None)) / ceiling
    if scheme == "circular":
        geometry._check_gamma(gate.gamma, hi=math.pi + 1e-12)
        if k is None or k <= 0.0:
            raise DomainError(f"circular scheme needs k > 0, got {k!r}")
        return profile_peak(_profile_for("circular", gate.gamma, k)) / ceiling
    raise DomainError(f"unknown scheme {scheme!r}")


def pump_stokes(schedule: PulseSchedule) -> PumpStokesEnvelope:
    """Split a schedule into its complex pump and Stokes tones."""
    half = 0.5 * schedule.theta
    omega_p = schedule.omega * math.sin(half) * np.exp(-1j * schedule.xi)
    omega_s = (-schedule.omega * math.cos(half)
               * np.exp(1j * (schedule.phi - schedule.xi)))
    return PumpStokesEnvelope(omega_p, omega_s)


def parallel_transport_residual(schedule: PulseSchedule) -> float:
    """Max |<chi+|H|chi+>| over the samples, from the recorded path.

    Zero (to rounding) for every synthesized schedule: the drive keeps the
    instantaneous state's energy expectation null, which is what removes the
    dynamical phase.
    """
    if schedule.alpha is None or schedule.beta is None:
        raise DomainError("schedule carries no path record")
    expect = (schedule.delta * np.sin(0.5 * schedule.alpha) ** 2
              + schedule.omega * np.sin(schedule.alpha)
              * np.cos(schedule.beta - schedule.xi))
    return float(np.max(np.abs(expect)))


# ---------------------------------------------------------------------------
# schedule CSV format

_CSV_HEADER = "t_ns,omega_rad_per_s,delta_rad_per_s,xi_rad"


def write_schedule(schedule: PulseSchedule, dest: Union[str, TextIO]) -> None:
    """Write the schedule file format: one metadata comment line, a header
    row, then one row per sample."""
    k_txt = "nan" if schedule.k is None else repr(float(schedule.k))
    meta = (f"# scheme={schedule.scheme}, gamma={float(schedule.gamma)!r}, "
            f"theta={float(schedule.theta)!r}, phi={float(schedule.phi)!r}, "
            f"k={k_txt}, tau_ns={float(schedule.tau) * 1e9!r}")
    lines = [meta, _CSV_HEADER]
    for t, om, de, xi in zip(schedule.t, schedule.omega, schedule.delta, schedule.xi):
        lines.append(f"{float(t) * 1e9!r},{float(om)!r},{float(de)!r},{float(xi)!r}")
    text = "\n".join(lines) + "\n"
    if isinstance(dest, str):
        with open(dest, "w") as fh:
            fh.write(text)
    else:
        dest.write(text)


def read_schedule(src: Union[str, TextIO]) -> PulseSchedule:
    """Parse a schedule CSV produced by :func:`write_schedule`."""
    if isinstance(src, str):
        with open(src) as fh:
            return read_schedule(fh)
    meta = {}
    header_seen = False
    rows = []
    for line in src:
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            for part in line[1:].split(","):
                if "=" in part:
                    key, val = part.split("=", 1)
                    meta[key.strip()] = val.strip()
            continue
        if not header_seen:
            if line != _CSV_HEADER:
                raise DomainError(f"unexpected schedule header: {line!r}")
            header_seen = True
            continue
        rows.append([float(x) for x in line.split(",")])
    if not rows:
        raise DomainError("schedule file contains no samples")
    data = np.asarray(rows, dtype=float)
    k_val = float(meta.get("k", "nan"))
    return PulseSchedule(
        scheme=meta.get("scheme", "unknown"),
        gamma=float(meta.get("gamma", "nan")),
        theta=float(meta.get("theta", "0")),
        phi=float(meta.get("phi", "0")),
        k=None if math.isnan(k_val) else k_val,
        tau=float(meta.get("tau_ns", float(data[-1, 0]))) * 1e-9,
        t=data[:, 0] * 1e-9, omega=data[:, 1], delta=data[:, 2], xi=data[:, 3],
    )
