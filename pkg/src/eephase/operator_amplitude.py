"""Method A: the tree-level e-e amplitude as an operator on the two-spin space.

M1 (direct) and M2 (exchange) are assembled term by term from the explicit
Pauli-operator expansion of the CoM Dirac bilinears, then sandwiched
between total-spin eigenstates and divided by the screened propagators.

Term slots (shared by M1 and M2; ``s`` = +1 for M1, -1 for M2):

    0  1
    1  s 2 q.p                       / (E+m)^2
    2  s 3i (q x p).(sigma1+sigma2)  / (E+m)^2   (coefficient i for gamma0)
    3  q^2 (1 - sigma1.sigma2)       / (E+m)^2
    4  (q.sigma1)(q.sigma2)          / (E+m)^2
    5  s 2 q.p (1 + sigma1.sigma2)   / (E+m)^2
    6  -s (p.sigma1)(q.sigma2)       / (E+m)^2
    7  -s (q.sigma1)(p.sigma2)       / (E+m)^2
    8  p^2 (1 - sigma1.sigma2)       / (E+m)^2
    9  (p.sigma1)(p.sigma2)          / (E+m)^2
    10 [q.p + i(q x p).sigma1][q.p + i(q x p).sigma2] / (E+m)^4

The gamma0-only vertex keeps slots 0, 1, 2, 10.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .kinematics import CONSTANTS, Channel, screened_denominator
from .spin_algebra import (
    SPIN_EXCHANGE,
    TermKind,
    TwoSpinOperator,
    coupled_state,
    pauli_term,
    sandwich,
    singlet_product,
    singlet_spinor_product,
)

N_TERMS = 11
GAMMA0_TERMS = (0, 1, 2, 10)
SAME_MOMENTUM_TERMS = (4, 9)
CROSS_MOMENTUM_TERMS = (6, 7)


class Vertex(Enum):
    FULL_GAMMA_MU = "FullGammaMu"
    GAMMA0_ONLY = "Gamma0Only"


class ExchangeTreatment(Enum):
    PLAIN_SANDWICH = "PlainSandwich"
    EXCHANGE_OPERATOR = "ExchangeOperator"


class Channels(Enum):
    BOTH = "Both"
    DIRECT_ONLY = "DirectOnly"


@dataclass(frozen=True)
class AmplitudeMode:
    vertex: Vertex = Vertex.FULL_GAMMA_MU
    exchange_spin_treatment: ExchangeTreatment = ExchangeTreatment.PLAIN_SANDWICH
    channels: Channels = Channels.BOTH

    def __post_init__(self):
        object.__setattr__(self, "vertex", Vertex(self.vertex))
        object.__setattr__(
            self, "exchange_spin_treatment", ExchangeTreatment(self.exchange_spin_treatment)
        )
        object.__setattr__(self, "channels", Channels(self.channels))

    @property
    def descriptor(self):
        return "/".join(
            (self.vertex.value, self.exchange_spin_treatment.value, self.channels.value)
        )

    @classmethod
    def parse(cls, text):
        vertex, exchange, channels = text.split("/")
        return cls(Vertex(vertex), ExchangeTreatment(exchange), Channels(channels))


def normalize_mask(term_mask):
    """Accept None, an int bitmask (bit i = slot i) or an iterable of slots."""
    if term_mask is None:
        return frozenset(range(N_TERMS))
    if isinstance(term_mask, (int, np.integer)):
        if term_mask < 0 or term_mask >= 1 << N_TERMS:
            raise ValueError(f"term mask must fit in {N_TERMS} bits")
        return frozenset(i for i in range(N_TERMS) if term_mask >> i & 1)
    slots = frozenset(int(i) for i in term_mask)
    if any(i < 0 or i >= N_TERMS for i in slots):
        raise ValueError(f"term slots must lie in 0..{N_TERMS - 1}")
    return slots


def _term_operators(kin, vertex, sign):
    p, q = kin.p_vec, kin.q_vec
    qp = kin.p_dot_q
    qxp = kin.q_cross_p
    q2 = np.einsum("...i,...i->...", q, q)
    p2 = np.einsum("...i,...i->...", p, p)
    c2 = 1.0 / (kin.E_single + kin.m) ** 2
    c4 = c2 * c2
    I = TermKind.IDENTITY
    S12 = TermKind.SIGMA1_DOT_SIGMA2
    ones = np.ones_like(qp)

    terms = {
        0: pauli_term(I, coefficient=ones),
        1: pauli_term(I, coefficient=sign * 2 * qp * c2),
        10: (
            pauli_term(I, coefficient=qp * qp * c4)
            + pauli_term(TermKind.SUM_SIGMA, qxp, coefficient=1j * qp * c4)
            + pauli_term(TermKind.PRODUCT, qxp, qxp, coefficient=-c4 * ones)
        ),
    }
    if Vertex(vertex) is Vertex.GAMMA0_ONLY:
        terms[2] = pauli_term(TermKind.SUM_SIGMA, qxp, coefficient=sign * 1j * c2 * ones)
        return terms

    terms[2] = pauli_term(TermKind.SUM_SIGMA, qxp, coefficient=sign * 3j * c2 * ones)
    terms[3] = pauli_term(I, coefficient=q2 * c2) - pauli_term(S12, coefficient=q2 * c2)
    terms[4] = pauli_term(TermKind.PRODUCT, q, q, coefficient=c2 * ones)
    terms[5] = pauli_term(I, coefficient=sign * 2 * qp * c2) + pauli_term(
        S12, coefficient=sign * 2 * qp * c2
    )
    terms[6] = pauli_term(TermKind.PRODUCT, p, q, coefficient=-sign * c2 * ones)
    terms[7] = pauli_term(TermKind.PRODUCT, q, p, coefficient=-sign * c2 * ones)
    terms[8] = pauli_term(I, coefficient=p2 * c2) - pauli_term(S12, coefficient=p2 * c2)
    terms[9] = pauli_term(TermKind.PRODUCT, p, p, coefficient=c2 * ones)
    return terms


def _assemble(kin, vertex, sign, term_mask):
    slots = normalize_mask(term_mask)
    terms = _term_operators(kin, vertex, sign)
    shape = np.shape(kin.p_dot_q) + (4, 4)
    total = np.zeros(shape, dtype=complex)
    for i, op in terms.items():
        if i in slots:
            total = total + op.matrix
    return TwoSpinOperator(total)


def m1_operator(kin, vertex=Vertex.FULL_GAMMA_MU, term_mask=None):
    """Direct-channel spin operator M1."""
    return _assemble(kin, vertex, +1, term_mask)


def m2_operator(kin, vertex=Vertex.FULL_GAMMA_MU, term_mask=None):
    """Exchange-channel spin operator M2."""
    return _assemble(kin, vertex, -1, term_mask)


def amplitude_operator(kin, alpha, mode=AmplitudeMode(), term_mask=None, constants=CONSTANTS):
    """Full spin operator -e^2 [M1/D_direct - M2'/D_exchange].

    M2' is M2 for the plain reading and M2 times the spin-exchange operator
    for the ExchangeOperator reading.
    """
    e2 = constants.e_squared
    d_dir = screened_denominator(kin, Channel.DIRECT, alpha)
    op = m1_operator(kin, mode.vertex, term_mask).matrix / d_dir[..., None, None]
    if mode.channels is Channels.BOTH:
        m2 = m2_operator(kin, mode.vertex, term_mask).matrix
        if mode.exchange_spin_treatment is ExchangeTreatment.EXCHANGE_OPERATOR:
            m2 = m2 @ SPIN_EXCHANGE
        d_ex = screened_denominator(kin, Channel.EXCHANGE, alpha)
        op = op - m2 / d_ex[..., None, None]
    return TwoSpinOperator(-e2 * op)


def method_a_amplitude(
    kin, alpha, mode=AmplitudeMode(), s=0, m_s=0, m_s_prime=0, term_mask=None, constants=CONSTANTS
):
    """<s m_s'| M_fi |s m_s> for the operator amplitude (complex, batched)."""
    if abs(m_s) > s or abs(m_s_prime) > s:
        raise ValueError(f"|m_s| must not exceed s={s}")
    op = amplitude_operator(kin, alpha, mode, term_mask, constants)
    return sandwich(coupled_state(s, m_s_prime), op, coupled_state(s, m_s))


def channel_numerators(
    kin, mode=AmplitudeMode(), s=0, m_s=0, m_s_prime=0, term_mask=None, constants=CONSTANTS
):
    """(N_direct, N_exchange) with amplitude = N_direct/D_direct + N_exchange/D_exchange.

    The spin sandwiches are smooth in the angles; all the near-singular
    angular structure sits in the screened denominators.
    """
    if abs(m_s) > s or abs(m_s_prime) > s:
        raise ValueError(f"|m_s| must not exceed s={s}")
    bra, ket = coupled_state(s, m_s_prime), coupled_state(s, m_s)
    e2 = constants.e_squared
    n_dir = -e2 * sandwich(bra, m1_operator(kin, mode.vertex, term_mask), ket)
    if mode.channels is Channels.DIRECT_ONLY:
        return n_dir, np.zeros_like(n_dir)
    m2 = m2_operator(kin, mode.vertex, term_mask)
    if mode.exchange_spin_treatment is ExchangeTreatment.EXCHANGE_OPERATOR:
        m2 = m2 @ TwoSpinOperator(SPIN_EXCHANGE)
    return n_dir, e2 * sandwich(bra, m2, ket)


def singlet_sandwich_closed_form(kin, vertex=Vertex.FULL_GAMMA_MU, which=1, term_mask=None):
    """<singlet|M1 or M2|singlet> from contraction identities, no matrices.

    Uses sigma1.sigma2 -> -3, (a.sigma1)(b.sigma2) -> -a.b, c.(sigma1+sigma2) -> 0.
    """
    slots = normalize_mask(term_mask)
    sign = 1.0 if which == 1 else -1.0
    p, q = kin.p_vec, kin.q_vec
    qp = kin.p_dot_q
    k2 = kin.k**2
    c2 = 1.0 / (kin.E_single + kin.m) ** 2
    c4 = c2 * c2
    values = {
        0: np.ones_like(qp),
        1: sign * 2 * qp * c2,
        2: np.zeros_like(qp),
        10: singlet_spinor_product(qp, kin.q_cross_p) * c4,
    }
    if Vertex(vertex) is Vertex.FULL_GAMMA_MU:
        values.update(
            {
                3: 4 * k2 * c2 * np.ones_like(qp),
                4: singlet_product(q, q) * c2,
                5: sign * 2 * qp * (1 - 3) * c2,
                6: -sign * singlet_product(p, q) * c2,
                7: -sign * singlet_product(q, p) * c2,
                8: 4 * k2 * c2 * np.ones_like(qp),
                9: singlet_product(p, p) * c2,
            }
        )
    return sum(v for i, v in values.items() if i in slots)
