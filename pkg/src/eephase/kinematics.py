"""Centre-of-mass elastic kinematics, constants and screened propagators.

Natural units (hbar = c = 1) with the electron mass as the unit of energy
internally.  Metric signature (+, -, -, -).
"""

from dataclasses import dataclass, field
from enum import Enum
from math import pi

import numpy as np

MEV_PER_ELECTRON_MASS = 0.51099895
HBAR_C_MEV_FM = 197.327


@dataclass(frozen=True)
class PhysicsConstants:
    alpha_em: float = 1 / 137.035999
    electron_mass: float = 1.0
    hbar_c: float = HBAR_C_MEV_FM

    @property
    def e_squared(self):
        # Heaviside-Lorentz
        return 4 * pi * self.alpha_em


CONSTANTS = PhysicsConstants()


class Channel(Enum):
    DIRECT = "Direct"
    EXCHANGE = "Exchange"


class ForwardSingularity(ZeroDivisionError):
    """Unscreened photon propagator evaluated at zero momentum transfer."""


@dataclass(frozen=True)
class ComKinematics:
    """Elastic CoM kinematics; p_vec and q_vec may carry batch dimensions.

    p1 = -p2 = p_vec and p3 = -p4 = q_vec.
    """

    m: float
    k: float
    x: np.ndarray
    p_vec: np.ndarray
    q_vec: np.ndarray
    E_single: float = field(init=False)
    E_total: float = field(init=False)

    def __post_init__(self):
        e = float(np.sqrt(self.k**2 + self.m**2))
        object.__setattr__(self, "E_single", e)
        object.__setattr__(self, "E_total", 2 * e)

    @property
    def p_dot_q(self):
        return np.einsum("...i,...i->...", self.p_vec, self.q_vec)

    @property
    def q_cross_p(self):
        return np.cross(self.q_vec, self.p_vec)

    @classmethod
    def from_vectors(cls, m, p_vec, q_vec):
        """Kinematics with arbitrary directions; |p| must equal |q|."""
        p_vec = np.asarray(p_vec, dtype=float)
        q_vec = np.asarray(q_vec, dtype=float)
        kp = np.linalg.norm(p_vec, axis=-1)
        kq = np.linalg.norm(q_vec, axis=-1)
        k = float(np.max(kp))
        if m <= 0 or k <= 0:
            raise ValueError("need m > 0 and |p| > 0")
        if not (np.allclose(kp, k, rtol=1e-12) and np.allclose(kq, k, rtol=1e-12)):
            raise ValueError("elastic kinematics needs |p| = |q| = k everywhere")
        x = np.clip(np.einsum("...i,...i->...", p_vec, q_vec) / k**2, -1.0, 1.0)
        return cls(float(m), k, x, p_vec, q_vec)


def build_kinematics(m, k, x):
    """CoM kinematics with p along +z and q = k (sin theta, 0, cos theta).

    ``x`` = cos theta may be a scalar or an array.
    """
    if m <= 0:
        raise ValueError(f"mass must be positive, got {m}")
    if k <= 0:
        raise ValueError(f"momentum must be positive, got {k}")
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > 1.0):
        raise ValueError("cos(theta) must lie in [-1, 1]")
    sin_t = np.sqrt(np.clip(1.0 - x * x, 0.0, None))
    zeros = np.zeros_like(x)
    q = k * np.stack([sin_t, zeros, x], axis=-1)
    p = np.broadcast_to(np.array([0.0, 0.0, float(k)]), q.shape).copy()
    return ComKinematics(float(m), float(k), x, p, q)


def screened_denominator(kin, channel, alpha):
    """Momentum transfer squared minus alpha^2.

    Direct uses (p1 - p3)^2 and Exchange uses (p2 - p3)^2.  Energy transfer
    vanishes in elastic CoM scattering, so both are minus a squared
    three-momentum: -(|dp|^2 + alpha^2) < 0 for alpha > 0.
    """
    if alpha < 0:
        raise ValueError("screening parameter must be non-negative")
    channel = Channel(channel)
    p1 = kin.p_vec
    p2 = -kin.p_vec
    dp = p1 - kin.q_vec if channel is Channel.DIRECT else p2 - kin.q_vec
    d = -(np.einsum("...i,...i->...", dp, dp) + alpha**2)
    if np.any(d == 0.0):
        raise ForwardSingularity(
            f"{channel.value} propagator diverges at zero momentum transfer with alpha=0"
        )
    return d


def screened_denominator_closed_form(k, x, channel, alpha):
    """Same quantity from cos(theta) alone: -(2k^2(1 -+ x) + alpha^2)."""
    sign = -1.0 if Channel(channel) is Channel.DIRECT else 1.0
    return -(2 * k * k * (1 + sign * np.asarray(x)) + alpha**2)
