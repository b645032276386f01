"""Quadrature rules and the special functions used by the angular projections.

Conventions: spherical harmonics and Clebsch-Gordan coefficients both carry
the Condon-Shortley phase.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import factorial, sqrt, pi

import numpy as np
from scipy.special import gammaln, hyp2f1, lpmv

DEFAULT_QUAD_ORDER = 64
_Q_SERIES_FROM = 1.1


@dataclass(frozen=True)
class QuadratureRule:
    order: int
    nodes: np.ndarray
    weights: np.ndarray

    def integrate(self, values):
        """Sum ``weights * values`` along the last axis."""
        return np.tensordot(np.asarray(values), self.weights, axes=([-1], [0]))


def gauss_legendre(order):
    """Gauss-Legendre rule on [-1, 1], exact for polynomials of degree 2*order-1.

    Nodes and weights are symmetrised explicitly so that odd integrands
    cancel to rounding level.
    """
    if int(order) != order or order < 1:
        raise ValueError(f"quadrature order must be a positive integer, got {order!r}")
    order = int(order)
    x, w = np.polynomial.legendre.leggauss(order)
    x = 0.5 * (x - x[::-1])
    w = 0.5 * (w + w[::-1])
    return QuadratureRule(order, x, w)


def legendre_p(l, x):
    """Legendre polynomial P_l(x) by the Bonnet forward recursion.

    Accepts scalar or array ``x``; every entry must satisfy |x| <= 1.
    """
    if l < 0:
        raise ValueError("l must be non-negative")
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > 1.0):
        raise ValueError("legendre_p requires |x| <= 1")
    p_prev = np.ones_like(x)
    if l == 0:
        return p_prev if p_prev.ndim else float(p_prev)
    p = x.copy()
    for n in range(2, l + 1):
        p_prev, p = p, ((2 * n - 1) * x * p - (n - 1) * p_prev) / n
    return p if p.ndim else float(p)


def legendre_q(l, z):
    """Legendre function of the second kind Q_l(z) for real z > 1.

    Near the branch point Q_0 = 0.5 ln((z+1)/(z-1)) is carried up with the
    three-term recursion shared with P_l.  For z >= 1.1 the recursion
    cancels catastrophically (Q_l ~ z^-(l+1)), so the hypergeometric form

        Q_l(z) = sqrt(pi) l! / (Gamma(l+3/2) (2z)^(l+1))
                 * 2F1((l+1)/2, (l+2)/2; l+3/2; 1/z^2)

    is used instead.
    """
    if l < 0:
        raise ValueError("l must be non-negative")
    z = np.asarray(z, dtype=float)
    if np.any(z <= 1.0):
        raise ValueError("legendre_q requires z > 1 (branch point at z = 1)")
    out = np.where(z >= _Q_SERIES_FROM, _legendre_q_series(l, np.maximum(z, _Q_SERIES_FROM)),
                   _legendre_q_recursion(l, np.minimum(z, _Q_SERIES_FROM)))
    return out if out.ndim else float(out)


def _legendre_q_recursion(l, z):
    q_prev = 0.5 * np.log1p(2.0 / (z - 1.0))
    if l == 0:
        return q_prev
    q = z * q_prev - 1.0
    for n in range(2, l + 1):
        q_prev, q = q, ((2 * n - 1) * z * q - (n - 1) * q_prev) / n
    return q


def _legendre_q_series(l, z):
    pref = np.exp(0.5 * np.log(pi) + gammaln(l + 1) - gammaln(l + 1.5))
    return pref / (2 * z) ** (l + 1) * hyp2f1((l + 1) / 2, (l + 2) / 2, l + 1.5, 1.0 / (z * z))


def spherical_harmonic(l, m, theta, phi):
    """Orthonormal Y_lm(theta, phi) with the Condon-Shortley phase."""
    if l < 0 or abs(m) > l:
        raise ValueError(f"need |m| <= l, got l={l}, m={m}")
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    am = abs(m)
    norm = sqrt((2 * l + 1) / (4 * pi) * factorial(l - am) / factorial(l + am))
    # lpmv already includes (-1)^m
    y = norm * lpmv(am, l, np.cos(theta)) * np.exp(1j * am * phi)
    if m < 0:
        y = (-1) ** am * np.conj(y)
    return y if y.ndim else complex(y)


def _half_integer(v, name):
    f = Fraction(v).limit_denominator(4)
    if abs(float(f) - float(v)) > 1e-12 or (2 * f).denominator != 1:
        raise ValueError(f"{name}={v!r} is not an integer or half-integer")
    return f


def clebsch_gordan(j1, m1, j2, m2, J, M):
    """<j1 m1; j2 m2 | J M> via the Racah closed form.

    Returns 0 for M != m1 + m2 or when the triangle rule fails.
    """
    j1, m1, j2, m2, J, M = (
        _half_integer(v, n)
        for v, n in zip((j1, m1, j2, m2, J, M), ("j1", "m1", "j2", "m2", "J", "M"))
    )
    for j, m in ((j1, m1), (j2, m2), (J, M)):
        if j < 0 or abs(m) > j or (j - m).denominator != 1:
            return 0.0
    if M != m1 + m2 or not abs(j1 - j2) <= J <= j1 + j2 or (j1 + j2 + J).denominator != 1:
        return 0.0

    def f(x):
        return factorial(int(x))

    pref = (2 * J + 1) * f(J + j1 - j2) * f(J - j1 + j2) * f(j1 + j2 - J) / f(j1 + j2 + J + 1)
    pref *= f(J + M) * f(J - M) * f(j1 - m1) * f(j1 + m1) * f(j2 - m2) * f(j2 + m2)
    kmin = int(max(0, j2 - J - m1, j1 - J + m2))
    kmax = int(min(j1 + j2 - J, j1 - m1, j2 + m2))
    total = 0.0
    for k in range(kmin, kmax + 1):
        total += (-1) ** k / (
            f(k) * f(j1 + j2 - J - k) * f(j1 - m1 - k) * f(j2 + m2 - k)
            * f(J - j2 + m1 + k) * f(J - j1 - m2 + k)
        )
    return sqrt(pref) * total
