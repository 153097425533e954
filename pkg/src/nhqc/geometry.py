"""Circular-path geometry on the Bloch sphere of the driven two-level subspace.

The effective dynamics of the bright/excited pair traces a closed curve on a
Bloch sphere whose north pole is the bright state.  A circle through the
north pole is the shortest closed curve enclosing a given solid angle, so a
target phase ``gamma`` maps onto a unique circle::

    (pi - gamma) * (1 - cos(alpha)) = (ell_c / 2) * sin(alpha) * cos(beta)

with circumference ``ell_c = 2*sqrt(2*pi*gamma - gamma**2)``.  ``alpha`` is
the polar angle from the north pole and ``beta`` the azimuth.  This module
holds the closed forms for that circle and the quadrature that recovers the
accumulated geometric phase from any sampled path.

All angles are radians.  Path time samples are dimensionless fractions of
the total duration unless stated otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class CircleGeometry:
    """Derived constants of the circle realizing geometric phase ``gamma``."""

    gamma: float
    ell_c: float
    alpha_m: float


@dataclass(frozen=True)
class PathSample:
    """One point of a sampled Bloch-sphere path."""

    t: float
    alpha: float
    beta: float
    xi: float = 0.0


@dataclass(frozen=True)
class BlochPath:
    """A sampled path, stored as parallel arrays for numeric work."""

    t: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray
    xi: np.ndarray

    def samples(self):
        return [PathSample(float(t), float(a), float(b), float(x))
                for t, a, b, x in zip(self.t, self.alpha, self.beta, self.xi)]


def _check_gamma(gamma: float, hi: float = TWO_PI) -> None:
    if not (0.0 < gamma < hi):
        raise DomainError(f"gamma must lie in (0, {hi:.6g}), got {gamma!r}")


def circumference(gamma: float) -> float:
    """Circumference of the circle enclosing solid angle ``2*gamma``."""
    _check_gamma(gamma)
    return 2.0 * math.sqrt(2.0 * math.pi * gamma - gamma * gamma)


def alpha_max(gamma: float) -> float:
    """Largest polar angle reached by the circle, at the half-way point."""
    _check_gamma(gamma)
    arg = (math.pi**2 - 4.0 * math.pi * gamma + 2.0 * gamma**2) / math.pi**2
    return math.acos(min(1.0, max(-1.0, arg)))


def circle_geometry(gamma: float) -> CircleGeometry:
    return CircleGeometry(gamma, circumference(gamma), alpha_max(gamma))


def cot_ratio(gamma: float) -> float:
    """The constant ``(pi - gamma)/sqrt(2*pi*gamma - gamma**2)``.

    Cotangent of the circle's angular radius; it fixes both the azimuth
    branch ``cos(beta) = cot_ratio * tan(alpha/2)`` and the detuning-to-Rabi
    proportionality of the synthesized pulses.
    """
    _check_gamma(gamma)
    return (math.pi - gamma) / math.sqrt(2.0 * math.pi * gamma - gamma**2)


def beta_from_alpha(alpha, gamma: float, half: str = "rising"):
    """Azimuth on the circle at polar angle ``alpha``.

    The rising half (``alpha`` increasing) runs from -pi/2 up to 0 at the
    apex; the falling half continues from 0 to +pi/2, so beta increases
    monotonically over a full traversal and ``beta(tau) - beta(0) = pi``.
    The constant offset is fixed so that beta vanishes at the apex.

    Accepts a scalar or an array ``alpha``; values must satisfy
    ``0 <= alpha <= alpha_max(gamma)``.
    """
    if half not in ("rising", "falling"):
        raise DomainError(f"half must be 'rising' or 'falling', got {half!r}")
    _check_gamma(gamma)
    a = np.asarray(alpha, dtype=float)
    if np.any(a < -1e-12) or np.any(a > math.pi + 1e-12):
        raise DomainError("alpha must lie in [0, pi]")
    am = alpha_max(gamma)
    if np.any(a > am * (1.0 + 1e-9) + 1e-12):
        raise DomainError(f"alpha exceeds alpha_max({gamma:.6g}) = {am:.6g}; "
                          "no point of the circle lies there")
    f = cot_ratio(gamma) * np.tan(a / 2.0)
    f = np.clip(f, -1.0, 1.0)
    # at gamma = pi the apex sits on the south pole where the azimuth is
    # degenerate; pin the fixed offset beta(apex) = 0 there as well
    f = np.where(np.abs(a - am) <= 1e-12, 1.0, f)
    mag = np.arccos(f)
    beta = -mag if half == "rising" else mag
    return beta if beta.ndim else float(beta)


def circle_residual(alpha, beta, gamma: float):
    """Residual of the circle equation at the given path points."""
    ell = circumference(gamma)
    return ((math.pi - gamma) * (1.0 - np.cos(alpha))
            - 0.5 * ell * np.sin(alpha) * np.cos(beta))


def geometric_phase(t, alpha, beta) -> float:
    """Unsigned geometric phase accumulated along a sampled cyclic path.

    Evaluates the quadrature of ``(1 - cos(alpha)) * d(beta)/dt / 2`` with
    beta-dot from centered finite differences, and returns its magnitude:
    the sign of the raw quadrature only encodes the traversal orientation
    of the bookkeeping, not the size of the phase.

    Requires at least 3 samples and strictly increasing ``t``.
    """
    t = np.asarray(t, dtype=float)
    alpha = np.asarray(alpha, dtype=float)
    beta = np.asarray(beta, dtype=float)
    if t.size < 3:
        raise DomainError("geometric_phase needs at least 3 samples")
    if np.any(np.diff(t) <= 0.0):
        raise DomainError("geometric_phase needs strictly increasing t")
    beta_dot = np.gradient(beta, t)
    quad = np.trapezoid(0.5 * (1.0 - np.cos(alpha)) * beta_dot, t)
    return float(abs(quad))


def enclosed_area(alpha, beta) -> float:
    """Spherical area swept by the path, as the integral of (1-cos a) d(beta)."""
    alpha = np.asarray(alpha, dtype=float)
    beta = np.asarray(beta, dtype=float)
    return float(np.trapezoid(1.0 - np.cos(alpha), x=beta))


def _alpha_profile(s, gamma: float, k: float):
    """Polar-angle ansatz ``alpha_m * (4 s (1-s))**(k+1)`` on s in [0, 1]."""
    abar = 4.0 * s * (1.0 - s)
    return alpha_max(gamma) * abar ** (k + 1.0)


def circular_path(gamma: float, n_samples: int = 1001, k: float = 1.0) -> BlochPath:
    """Sample a full traversal of the circle using the polynomial ansatz.

    Time is the dimensionless fraction s in [0, 1]; the apex sits at
    s = 1/2.  ``k > 0`` controls how sharply the path leaves the pole.
    """
    _check_gamma(gamma)
    if k <= 0.0:
        raise DomainError(f"k must be positive, got {k!r}")
    if n_samples < 3:
        raise DomainError("n_samples must be at least 3")
    s = np.linspace(0.0, 1.0, n_samples)
    alpha = _alpha_profile(s, gamma, k)
    np.minimum(alpha, alpha_max(gamma), out=alpha)
    beta = np.where(s <= 0.5,
                    beta_from_alpha(alpha, gamma, "rising"),
                    beta_from_alpha(alpha, gamma, "falling"))
    return BlochPath(s, alpha, beta, np.zeros_like(s))


def oss_path(beta1: float, beta2: float, n_samples: int = 1001) -> BlochPath:
    """Sample a pole-to-pole meridian path: down at azimuth ``beta1``, back
    up at ``beta2``.  The realized geometric phase is ``beta1 - beta2``."""
    if n_samples < 3:
        raise DomainError("n_samples must be at least 3")
    s = np.linspace(0.0, 1.0, n_samples)
    alpha = math.pi * np.sin(math.pi * s) ** 2
    beta = np.where(s < 0.5, beta1, beta2)
    return BlochPath(s, alpha, beta, np.zeros_like(s))
