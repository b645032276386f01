"""Partial-wave projection, Born phase shifts and derived estimates."""

import warnings
from dataclasses import asdict, dataclass, field
from math import pi

import numpy as np

from .dirac_amplitude import method_b_channel_numerators, method_b_singlet_amplitude
from .kinematics import CONSTANTS, ComKinematics, build_kinematics
from .numerics import (
    DEFAULT_QUAD_ORDER,
    clebsch_gordan,
    gauss_legendre,
    legendre_p,
    legendre_q,
    spherical_harmonic,
)
from .operator_amplitude import AmplitudeMode, channel_numerators, method_a_amplitude

WAVE_LABELS = "SPDFGHIK"
CONVERGENCE_RTOL = 1e-8
MAX_QUAD_ORDER = 4096
MAX_NUMERATOR_DEGREE = 32
CHOP_RTOL = 1e-13
HBAR_C_ROUNDED = 197.0


class ConvergenceError(RuntimeError):
    pass


class NonlinearityWarning(UserWarning):
    pass


def wave_label(l):
    return WAVE_LABELS[l]


def wave_index(label):
    return WAVE_LABELS.index(label.upper())


def parity(l):
    return (-1) ** l


@dataclass(frozen=True)
class PhaseShiftRecord:
    method: str
    mode: str
    l: int
    J: int
    k: float
    alpha: float
    delta: float
    im_residual: float
    quad_order: int
    error: str = ""
    # size of the cancelling contributions to delta; sets what counts as zero
    delta_scale: float = field(default=float("nan"), compare=False)

    @property
    def wave(self):
        return wave_label(self.l)

    @property
    def ok(self):
        return not self.error

    def as_dict(self):
        d = asdict(self)
        d["wave"] = self.wave
        return d


@dataclass(frozen=True)
class Projection:
    value: complex
    abs_scale: float  # size of the cancelling contributions; sets the rounding floor
    quad_order: int
    # rounding scale of the retained terms only; nan when not tracked
    resolution: float = float("nan")


def _project_once(amplitude, l, quad):
    x = quad.nodes
    integrand = legendre_p(l, x) * np.asarray(amplitude(x))
    value = complex(quad.integrate(integrand)) / (8 * pi)
    scale = float(quad.integrate(np.abs(integrand))) / (8 * pi)
    return Projection(value, scale, quad.order)


def _agrees(a, b, rtol=CONVERGENCE_RTOL):
    # relative test, with the cancelling scale as floor for near-vanishing waves
    floor = 1e-14 * max(a.abs_scale, b.abs_scale)
    return abs(a.value - b.value) <= rtol * abs(b.value) + floor


def project_l(amplitude, l, quad=None, check_convergence=False):
    """(1/8pi) int_{-1}^{1} P_l(x) amplitude(x) dx with a Gauss-Legendre rule.

    ``amplitude`` must accept an array of cos(theta) values.  With
    ``check_convergence`` the rule is doubled once and ConvergenceError is
    raised if the two results differ by more than 1e-8 relative.
    """
    quad = quad or gauss_legendre(DEFAULT_QUAD_ORDER)
    result = _project_once(amplitude, l, quad)
    if check_convergence:
        finer = _project_once(amplitude, l, gauss_legendre(2 * quad.order))
        if not _agrees(result, finer):
            raise ConvergenceError(
                f"l={l}: order {quad.order} -> {2 * quad.order} changed the projection "
                f"from {result.value} to {finer.value}"
            )
    return result.value


def project_l_adaptive(amplitude, l, order=DEFAULT_QUAD_ORDER, max_order=MAX_QUAD_ORDER):
    """Double the rule until two successive orders agree; returns a Projection."""
    coarse = _project_once(amplitude, l, gauss_legendre(order))
    while True:
        fine = _project_once(amplitude, l, gauss_legendre(2 * coarse.quad_order))
        if _agrees(coarse, fine):
            return fine
        if fine.quad_order >= max_order:
            raise ConvergenceError(
                f"l={l}: no agreement between successive rules up to order {fine.quad_order}"
            )
        coarse = fine


def screened_kernel(l, j, z):
    """int_{-1}^{1} P_l(x) P_j(x) / (z - x) dx = 2 P_min(z) Q_max(z) for z > 1."""
    lo, hi = min(l, j), max(l, j)
    return 2.0 * legendre_p_unbounded(lo, z) * legendre_q(hi, z)


def legendre_p_unbounded(l, z):
    """P_l at a real argument outside [-1, 1] (same recursion, no range check)."""
    p_prev, p = 1.0, z
    if l == 0:
        return 1.0
    for n in range(2, l + 1):
        p_prev, p = p, ((2 * n - 1) * z * p - (n - 1) * p_prev) / n
    return p


def legendre_coefficients(values, quad, degree):
    """c_j = (2j+1)/2 int P_j f for j <= degree, from samples on the rule's nodes."""
    return np.array(
        [(2 * j + 1) / 2 * complex(quad.integrate(legendre_p(j, quad.nodes) * values))
         for j in range(degree + 1)]
    )


def _chop(c, rtol=CHOP_RTOL):
    top = np.max(np.abs(c)) if c.size else 0.0
    c = c.copy()
    c[np.abs(c) <= rtol * top] = 0.0
    return c


def _project_screened_once(numerators, l, k, alpha, quad):
    z = 1.0 + alpha**2 / (2 * k * k)
    n_dir, n_ex = (np.asarray(n, dtype=complex) for n in numerators(quad.nodes))
    degree = min(quad.order - 1, MAX_NUMERATOR_DEGREE)
    c_dir = _chop(legendre_coefficients(n_dir, quad, degree))
    c_ex = _chop(legendre_coefficients(n_ex, quad, degree))
    top = max(np.abs(c_dir).max(), np.abs(c_ex).max())
    kept = np.flatnonzero((c_dir != 0) | (c_ex != 0))
    total = 0.0j
    scale = 0.0
    resolution = 0.0
    for j in range(int(kept.max()) + 2 if kept.size else 0):
        w = screened_kernel(l, j, z)
        # 1/(z + x) is the mirror image of 1/(z - x): P_l P_j picks up (-1)^(l+j)
        total += (c_dir[j] + (-1) ** (l + j) * c_ex[j]) * w if j <= degree else 0.0
        # every coefficient carries rounding noise of order eps * max|c|
        scale += (abs(c_dir[j]) + abs(c_ex[j]) if j <= degree else 0.0) * abs(w) + top * abs(w)
        if j in kept:
            resolution += (abs(c_dir[j]) + abs(c_ex[j]) + top) * abs(w)
    # D = -2k^2 (z -+ x) and the 1/(8 pi) normalisation
    norm = -1.0 / (16 * pi * k * k)
    return Projection(norm * total, abs(norm) * scale, quad.order, abs(norm) * resolution)


def project_l_screened(numerators, l, k, alpha, order=DEFAULT_QUAD_ORDER,
                       max_order=MAX_QUAD_ORDER):
    """Partial-wave projection of N_dir/D_dir + N_ex/D_ex with the poles handled exactly.

    ``numerators(x)`` returns the smooth channel numerators at cos(theta)
    = x; the screened denominators are D_dir = -(2k^2(1-x) + alpha^2) and
    D_ex = -(2k^2(1+x) + alpha^2).  The numerators are expanded in Legendre
    polynomials by Gauss quadrature (coefficients at rounding level are
    dropped) and each term is integrated against 1/(z -+ x) in closed form,
    which keeps high partial waves accurate when z = 1 + alpha^2/(2k^2) is
    large.  The rule is doubled until two orders agree to 1e-8.
    """
    if k <= 0 or alpha <= 0:
        raise ValueError("need k > 0 and alpha > 0")
    coarse = _project_screened_once(numerators, l, k, alpha, gauss_legendre(order))
    while True:
        fine = _project_screened_once(numerators, l, k, alpha, gauss_legendre(2 * coarse.quad_order))
        if _agrees(coarse, fine):
            return fine
        if fine.quad_order >= max_order:
            raise ConvergenceError(f"l={l}: numerator expansion did not converge")
        coarse = fine


class SphereProductGrid:
    """Product quadrature over two unit spheres: Gauss in cos(theta), uniform in phi."""

    def __init__(self, n_theta=24, n_phi=24):
        rule = gauss_legendre(n_theta)
        ct, w = rule.nodes, rule.weights
        phi = 2 * pi * np.arange(n_phi) / n_phi
        ct_g, phi_g = np.meshgrid(ct, phi, indexing="ij")
        self.theta = np.arccos(ct_g).ravel()
        self.phi = phi_g.ravel()
        self.weights = np.outer(w, np.full(n_phi, 2 * pi / n_phi)).ravel()
        st = np.sqrt(1 - ct_g**2).ravel()
        self.unit = np.stack(
            [st * np.cos(self.phi), st * np.sin(self.phi), ct_g.ravel()], axis=-1
        )
        self.n_theta, self.n_phi = n_theta, n_phi

    @property
    def size(self):
        return len(self.weights)

    def evaluate(self, amplitude, s, chunk=64):
        """Amplitude on every (p_hat, q_hat) pair for each (m_s, m_s') combination.

        Returns {(m_s, m_s'): array (n_points, n_points)} indexed [p, q].
        """
        n = self.size
        values = {}
        for ms in range(-s, s + 1):
            for msp in range(-s, s + 1):
                grid = np.empty((n, n), dtype=complex)
                for start in range(0, n, chunk):
                    stop = min(start + chunk, n)
                    p_hat = np.repeat(self.unit[start:stop], n, axis=0)
                    q_hat = np.tile(self.unit, (stop - start, 1))
                    grid[start:stop] = np.asarray(amplitude(p_hat, q_hat, ms, msp)).reshape(
                        stop - start, n
                    )
                values[(ms, msp)] = grid
        return values

    def project(self, values, J, l, s, M):
        if not abs(l - s) <= J <= l + s:
            raise ValueError(f"triangle rule violated for l={l}, s={s}, J={J}")
        if abs(M) > J:
            raise ValueError(f"|M| must not exceed J={J}")
        total = 0.0j
        for (ms, msp), grid in values.items():
            m, mp = M - ms, M - msp
            if abs(m) > l or abs(mp) > l:
                continue
            c = clebsch_gordan(l, m, s, ms, J, M) * clebsch_gordan(l, mp, s, msp, J, M)
            if c == 0.0:
                continue
            y_p = spherical_harmonic(l, m, self.theta, self.phi) * self.weights
            y_q = np.conj(spherical_harmonic(l, mp, self.theta, self.phi)) * self.weights
            total += c * (y_p @ grid @ y_q)
        return total / (4 * pi) ** 2


def project_Jl(amplitude, J, l, s=0, M=0, n_theta=24, n_phi=24, check_convergence=False):
    """Coupled (J, l) projection over both solid angles.

    ``amplitude(p_hat, q_hat, m_s, m_s')`` receives arrays of unit vectors of
    shape (n, 3).  The Clebsch-Gordan spin argument is the total spin ``s``.
    """
    grid = SphereProductGrid(n_theta, n_phi)
    value = grid.project(grid.evaluate(amplitude, s), J, l, s, M)
    if check_convergence:
        fine = SphereProductGrid(2 * n_theta, 2 * n_phi)
        v2 = fine.project(fine.evaluate(amplitude, s), J, l, s, M)
        if abs(v2 - value) > CONVERGENCE_RTOL * abs(v2) + 1e-300:
            raise ConvergenceError(f"(J={J}, l={l}) double-sphere projection not converged")
    return value


def method_a_direction_amplitude(m, k, alpha, mode=AmplitudeMode(), s=0, term_mask=None,
                                 constants=CONSTANTS):
    """Method A amplitude as a function of (p_hat, q_hat, m_s, m_s') for project_Jl."""
    def amplitude(p_hat, q_hat, ms, msp):
        kin = ComKinematics.from_vectors(m, k * p_hat, k * q_hat)
        return method_a_amplitude(kin, alpha, mode, s, ms, msp, term_mask, constants)

    return amplitude


def amplitude_of_x(method, mode, m, k, alpha, term_mask=None, constants=CONSTANTS):
    """Singlet amplitude as a function of cos(theta) for the chosen method."""
    mode = mode if isinstance(mode, AmplitudeMode) else AmplitudeMode.parse(mode)
    if method == "A":
        return lambda x: method_a_amplitude(
            build_kinematics(m, k, x), alpha, mode, 0, 0, 0, term_mask, constants
        )
    if method == "B":
        if term_mask is not None:
            raise ValueError("term masks apply to the Method A operator expansion only")
        return lambda x: method_b_singlet_amplitude(
            build_kinematics(m, k, x), alpha, mode.vertex, mode.channels, constants
        )
    raise ValueError(f"method must be 'A' or 'B', got {method!r}")


def numerators_of_x(method, mode, m, k, term_mask=None, constants=CONSTANTS):
    """Channel numerators (N_dir, N_ex) of the singlet amplitude as functions of x."""
    mode = mode if isinstance(mode, AmplitudeMode) else AmplitudeMode.parse(mode)
    if method == "A":
        return lambda x: channel_numerators(
            build_kinematics(m, k, x), mode, 0, 0, 0, term_mask, constants
        )
    if method == "B":
        if term_mask is not None:
            raise ValueError("term masks apply to the Method A operator expansion only")
        return lambda x: method_b_channel_numerators(
            build_kinematics(m, k, x), mode.vertex, mode.channels, constants
        )
    raise ValueError(f"method must be 'A' or 'B', got {method!r}")


def born_phase_shift(projection, E_total, k):
    """delta = -1/2 E k M^l(k), with E the two-electron total energy."""
    return -0.5 * E_total * k * projection


def phase_shift(method, mode, l, k, alpha, m=1.0, J=None, quad_order=DEFAULT_QUAD_ORDER,
                term_mask=None, constants=CONSTANTS):
    """Born phase shift of the spin-singlet partial wave l (so J = l)."""
    J = l if J is None else J
    if J != l:
        raise ValueError("for total spin 0 the partial wave has J = l")
    if alpha <= 0:
        raise ValueError(
            "alpha must be positive: the unscreened propagator has a forward singularity "
            "at the quadrature endpoints"
        )
    mode = mode if isinstance(mode, AmplitudeMode) else AmplitudeMode.parse(mode)
    nums = numerators_of_x(method, mode, m, k, term_mask, constants)
    proj = project_l_screened(nums, l, k, alpha, quad_order)
    E_total = 2 * np.sqrt(k * k + m * m)
    im_residual = abs(proj.value.imag) / max(abs(proj.value), proj.abs_scale, 1e-300)
    return PhaseShiftRecord(
        method=method,
        mode=mode.descriptor,
        l=l,
        J=J,
        k=float(k),
        alpha=float(alpha),
        delta=float(born_phase_shift(proj.value.real, E_total, k)),
        im_residual=float(im_residual),
        quad_order=proj.quad_order,
        delta_scale=float(abs(born_phase_shift(proj.resolution, E_total, k))),
    )


def yukawa_born_oracle(l, k, alpha, A=CONSTANTS.alpha_em, mu=0.5):
    """First-Born phase shift for V(r) = A exp(-alpha r)/r.

    delta_l = -(mu A / k) Q_l(1 + alpha^2 / (2 k^2)).
    """
    if k <= 0 or alpha <= 0:
        raise ValueError("need k > 0 and alpha > 0")
    return -(mu * A / k) * legendre_q(l, 1 + alpha**2 / (2 * k**2))


def fit_slope(k, delta, max_nonlinearity=0.10):
    """Least-squares line through (k, delta); returns (slope, nonlinearity).

    Nonlinearity is the largest residual relative to the largest |delta|.
    A NonlinearityWarning is emitted above ``max_nonlinearity``.
    """
    k = np.asarray(k, dtype=float)
    delta = np.asarray(delta, dtype=float)
    slope, intercept = np.polyfit(k, delta, 1)
    resid = delta - (slope * k + intercept)
    scale = np.max(np.abs(delta))
    nonlin = float(np.max(np.abs(resid)) / scale) if scale > 0 else 0.0
    if nonlin > max_nonlinearity:
        warnings.warn(
            f"phase shift departs from linearity by {nonlin:.1%} over the fit window",
            NonlinearityWarning,
            stacklevel=2,
        )
    return float(slope), nonlin


def potential_estimate(ddelta_dk, M_eV):
    """V = -197^3 (d delta/dk) / (2M) in eV, the effective-strength rule of thumb."""
    return -(HBAR_C_ROUNDED**3) * ddelta_dk / (2 * M_eV)
