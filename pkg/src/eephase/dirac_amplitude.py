"""Method B: explicit Dirac spinors and polarized tree-level matrix elements.

Dirac (standard) representation, metric diag(+1, -1, -1, -1).  Spin labels
are projections on the fixed +z axis for every particle, including
particle 2 which moves along -z.  Momenta: p1 = -p2 = p, p3 = -p4 = q, and
the first outgoing label always belongs to p3.
"""

from dataclasses import dataclass

import numpy as np

from .kinematics import CONSTANTS, Channel, screened_denominator
from .operator_amplitude import Channels, Vertex
from .spin_algebra import SIGMA

METRIC = np.diag([1.0, -1.0, -1.0, -1.0])


@dataclass(frozen=True)
class GammaSet:
    matrices: np.ndarray  # (4, 4, 4), upper index mu first

    def anticommutator_residual(self):
        g = self.matrices
        worst = 0.0
        for mu in range(4):
            for nu in range(4):
                anti = g[mu] @ g[nu] + g[nu] @ g[mu]
                worst = max(worst, np.abs(anti - 2 * METRIC[mu, nu] * np.eye(4)).max())
        return float(worst)


def _dirac_gammas():
    z = np.zeros((2, 2), dtype=complex)
    one = np.eye(2, dtype=complex)
    g0 = np.block([[one, z], [z, -one]])
    gs = [np.block([[z, s], [-s, z]]) for s in SIGMA]
    return GammaSet(np.array([g0, *gs]))


GAMMAS = _dirac_gammas()
GAMMA0 = GAMMAS.matrices[0]
# gamma0 gamma^mu, so that u_f^dagger GAMMA0_GAMMA[mu] u_i = ubar_f gamma^mu u_i
GAMMA0_GAMMA = np.einsum("ab,mbc->mac", GAMMA0, GAMMAS.matrices)

_CHI = {1: np.array([1.0, 0.0], dtype=complex), 2: np.array([0.0, 1.0], dtype=complex)}


def spin_label(label):
    """Map '+', '-', 1 or 2 to the two-spinor index 1 (up) or 2 (down)."""
    table = {"+": 1, "-": 2, 1: 1, 2: 2, "up": 1, "down": 2}
    try:
        return table[label]
    except KeyError:
        raise ValueError(f"unknown spin label {label!r}") from None


def dirac_spinor(p_vec, lam, m):
    """u(p, lambda) = sqrt((E+m)/2E) (chi, sigma.p chi / (E+m)); u^dagger u = 1."""
    if m <= 0:
        raise ValueError("mass must be positive")
    p_vec = np.asarray(p_vec, dtype=float)
    chi = _CHI[spin_label(lam)]
    e = np.sqrt(np.einsum("...i,...i->...", p_vec, p_vec) + m * m)
    norm = np.sqrt((e + m) / (2 * e))
    sp = np.einsum("...i,iab->...ab", p_vec, SIGMA)
    lower = np.einsum("...ab,b->...a", sp, chi) / (e + m)[..., None]
    upper = np.broadcast_to(chi, lower.shape)
    return norm[..., None] * np.concatenate([upper, lower], axis=-1)


def bilinear(u_out, u_in, vertex=Vertex.FULL_GAMMA_MU):
    """Current ubar_out gamma^mu u_in with shape (..., 4); gamma0 vertex zeroes mu=1..3."""
    j = np.einsum("...a,mab,...b->...m", np.conj(u_out), GAMMA0_GAMMA, u_in)
    if Vertex(vertex) is Vertex.GAMMA0_ONLY:
        j = j * np.array([1.0, 0.0, 0.0, 0.0])
    return j


def contract(j_a, j_b):
    return np.einsum("...m,mn,...n->...", j_a, METRIC, j_b)


def _spinors(kin, lambdas):
    l1, l2, l3, l4 = lambdas
    p, q = kin.p_vec, kin.q_vec
    return (
        dirac_spinor(p, l1, kin.m),
        dirac_spinor(-p, l2, kin.m),
        dirac_spinor(q, l3, kin.m),
        dirac_spinor(-q, l4, kin.m),
    )


def numerators(kin, lambdas, vertex=Vertex.FULL_GAMMA_MU):
    """(direct, exchange) contractions (ubar3 g u1)(ubar4 g u2) and (ubar3 g u2)(ubar4 g u1)."""
    u1, u2, u3, u4 = _spinors(kin, lambdas)
    direct = contract(bilinear(u3, u1, vertex), bilinear(u4, u2, vertex))
    exchange = contract(bilinear(u3, u2, vertex), bilinear(u4, u1, vertex))
    return direct, exchange


def polarized_element(
    kin, lambdas, alpha, vertex=Vertex.FULL_GAMMA_MU, channels=Channels.BOTH, constants=CONSTANTS
):
    """<l3 l4| M_fi |l1 l2> for lambdas = (l1, l2, l3, l4)."""
    direct, exchange = numerators(kin, lambdas, vertex)
    amp = direct / screened_denominator(kin, Channel.DIRECT, alpha)
    if Channels(channels) is Channels.BOTH:
        amp = amp - exchange / screened_denominator(kin, Channel.EXCHANGE, alpha)
    return -constants.e_squared * amp


def method_b_singlet_amplitude(
    kin, alpha, vertex=Vertex.FULL_GAMMA_MU, channels=Channels.BOTH, constants=CONSTANTS
):
    """<-+|M|-+> - <+-|M|-+>."""
    diag = polarized_element(kin, ("-", "+", "-", "+"), alpha, vertex, channels, constants)
    off = polarized_element(kin, ("-", "+", "+", "-"), alpha, vertex, channels, constants)
    return diag - off


def method_b_channel_numerators(
    kin, vertex=Vertex.FULL_GAMMA_MU, channels=Channels.BOTH, constants=CONSTANTS
):
    """(N_direct, N_exchange) of the singlet combination, amplitude = sum N/D."""
    d1, e1 = numerators(kin, ("-", "+", "-", "+"), vertex)
    d2, e2 = numerators(kin, ("-", "+", "+", "-"), vertex)
    n_dir = -constants.e_squared * (d1 - d2)
    n_ex = constants.e_squared * (e1 - e2)
    if Channels(channels) is Channels.DIRECT_ONLY:
        n_ex = np.zeros_like(n_ex)
    return n_dir, n_ex


def method_b_four_term(
    kin, alpha, vertex=Vertex.FULL_GAMMA_MU, channels=Channels.BOTH, constants=CONSTANTS
):
    """1/2 (<+-| - <-+|) M (|+-> - |-+>) with all four elements computed."""
    def el(l1, l2, l3, l4):
        return polarized_element(kin, (l1, l2, l3, l4), alpha, vertex, channels, constants)

    return 0.5 * (
        el("+", "-", "+", "-")
        - el("-", "+", "+", "-")
        - el("+", "-", "-", "+")
        + el("-", "+", "-", "+")
    )


def spin_matrix(kin, alpha, vertex=Vertex.FULL_GAMMA_MU, channels=Channels.BOTH, constants=CONSTANTS):
    """All 16 polarized elements as a (..., 4, 4) matrix in the product basis.

    Row index is the final pair (l3 l4), column index the initial pair (l1 l2).
    """
    labels = ("+", "-")
    basis = [(a, b) for a in labels for b in labels]
    shape = np.shape(kin.p_dot_q) + (4, 4)
    out = np.zeros(shape, dtype=complex)
    for i, (l3, l4) in enumerate(basis):
        for j, (l1, l2) in enumerate(basis):
            out[..., i, j] = polarized_element(
                kin, (l1, l2, l3, l4), alpha, vertex, channels, constants
            )
    return out
