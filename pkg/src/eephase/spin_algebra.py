"""Two-electron Pauli spin space.

Product basis ordering is (|++>, |+->, |-+>, |-->) with particle 1 as the
left tensor factor.  Operators are numpy arrays of shape (..., 4, 4) and
states of shape (..., 4), so a whole angular grid can be evaluated at once.
"""

from dataclasses import dataclass
from enum import Enum
from math import sqrt

import numpy as np

SIGMA = np.array(
    [
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=complex,
)
EYE2 = np.eye(2, dtype=complex)

# sigma_i acting on particle 1 / particle 2, shape (3, 4, 4)
SIGMA1 = np.array([np.kron(s, EYE2) for s in SIGMA])
SIGMA2 = np.array([np.kron(EYE2, s) for s in SIGMA])
SIGMA1_DOT_SIGMA2 = np.einsum("iab,ibc->ac", SIGMA1, SIGMA2)
# (a.sigma1)(b.sigma2) = a_i b_j SIGMA_PRODUCT[i, j]
SIGMA_PRODUCT = np.einsum("iab,jbc->ijac", SIGMA1, SIGMA2)
IDENTITY4 = np.eye(4, dtype=complex)
# swaps the two spins: P|ab> = |ba>
SPIN_EXCHANGE = 0.5 * (IDENTITY4 + SIGMA1_DOT_SIGMA2)


class TermKind(Enum):
    IDENTITY = "Identity"
    DOT_SIGMA1 = "DotSigma1"
    DOT_SIGMA2 = "DotSigma2"
    SIGMA1_DOT_SIGMA2 = "Sigma1DotSigma2"
    PRODUCT = "Product"
    SUM_SIGMA = "SumSigma"


@dataclass(frozen=True)
class TwoSpinState:
    amplitudes: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "amplitudes", np.asarray(self.amplitudes, dtype=complex))

    @property
    def norm(self):
        return float(np.linalg.norm(self.amplitudes))


@dataclass(frozen=True)
class TwoSpinOperator:
    matrix: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "matrix", np.asarray(self.matrix, dtype=complex))

    def __add__(self, other):
        return TwoSpinOperator(self.matrix + other.matrix)

    def __sub__(self, other):
        return TwoSpinOperator(self.matrix - other.matrix)

    def __mul__(self, c):
        c = np.asarray(c)
        return TwoSpinOperator(c[..., None, None] * self.matrix)

    __rmul__ = __mul__

    def __matmul__(self, other):
        return TwoSpinOperator(self.matrix @ other.matrix)

    def dagger(self):
        return TwoSpinOperator(np.conj(np.swapaxes(self.matrix, -1, -2)))

    def is_hermitian(self, atol=1e-12):
        return bool(np.allclose(self.matrix, self.dagger().matrix, rtol=0.0, atol=atol))


def _vec(v):
    v = np.asarray(v, dtype=float)
    if v.shape[-1] != 3:
        raise ValueError(f"expected 3-vectors, got shape {v.shape}")
    return v


def pauli_term(kind, *vectors, coefficient=1.0):
    """Build ``coefficient`` times one of the elementary two-spin operators.

    ``Product(a, b)`` is (a.sigma1)(b.sigma2) and ``SumSigma(c)`` is
    c.(sigma1 + sigma2).  Vectors may carry leading batch dimensions; the
    coefficient broadcasts against them.
    """
    kind = TermKind(kind)
    if kind is TermKind.IDENTITY:
        m = IDENTITY4
    elif kind is TermKind.SIGMA1_DOT_SIGMA2:
        m = SIGMA1_DOT_SIGMA2
    elif kind is TermKind.DOT_SIGMA1:
        m = np.einsum("...i,iab->...ab", _vec(vectors[0]), SIGMA1)
    elif kind is TermKind.DOT_SIGMA2:
        m = np.einsum("...i,iab->...ab", _vec(vectors[0]), SIGMA2)
    elif kind is TermKind.SUM_SIGMA:
        m = np.einsum("...i,iab->...ab", _vec(vectors[0]), SIGMA1 + SIGMA2)
    else:
        a, b = _vec(vectors[0]), _vec(vectors[1])
        m = np.einsum("...i,...j,ijab->...ab", a, b, SIGMA_PRODUCT)
    c = np.asarray(coefficient, dtype=complex)
    return TwoSpinOperator(c[..., None, None] * m)


def coupled_state(s, m_s):
    """Normalised total-spin eigenstate |s m_s> in the product basis."""
    if s not in (0, 1):
        raise ValueError(f"total spin must be 0 or 1, got {s}")
    if abs(m_s) > s:
        raise ValueError(f"|m_s| must not exceed s, got s={s}, m_s={m_s}")
    r = 1 / sqrt(2)
    table = {
        (0, 0): (0, r, -r, 0),
        (1, 1): (1, 0, 0, 0),
        (1, 0): (0, r, r, 0),
        (1, -1): (0, 0, 0, 1),
    }
    return TwoSpinState(np.array(table[(s, m_s)], dtype=complex))


def product_state(label1, label2):
    """|label1 label2> with labels '+' or '-' (z-axis projections)."""
    index = {"++": 0, "+-": 1, "-+": 2, "--": 3}[label1 + label2]
    amps = np.zeros(4, dtype=complex)
    amps[index] = 1.0
    return TwoSpinState(amps)


SINGLET = coupled_state(0, 0)


def sandwich(bra, op, ket):
    """<bra| op |ket>, batched over any leading dimensions of ``op``."""
    m = op.matrix if isinstance(op, TwoSpinOperator) else np.asarray(op)
    b = bra.amplitudes if isinstance(bra, TwoSpinState) else np.asarray(bra)
    k = ket.amplitudes if isinstance(ket, TwoSpinState) else np.asarray(ket)
    return np.einsum("...a,...ab,...b->...", np.conj(b), m, k)


# Closed-form singlet contractions.  Used as a second evaluation path; the
# matrix route above is authoritative.

def singlet_product(a, b):
    """<singlet|(a.sigma1)(b.sigma2)|singlet> = -a.b"""
    return -np.einsum("...i,...i->...", _vec(a), _vec(b))


def singlet_sigma1_dot_sigma2():
    return -3.0


def singlet_sum_sigma(c):
    return np.zeros(np.shape(c)[:-1])


def singlet_spinor_product(scalar, vector):
    """<singlet|(A + i B.sigma1)(A + i B.sigma2)|singlet> = A^2 + B.B"""
    vector = _vec(vector)
    return np.asarray(scalar) ** 2 + np.einsum("...i,...i->...", vector, vector)
