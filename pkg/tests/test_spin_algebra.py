import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from eephase.spin_algebra import (
    IDENTITY4,
    SIGMA,
    SINGLET,
    SPIN_EXCHANGE,
    TermKind,
    TwoSpinOperator,
    coupled_state,
    pauli_term,
    product_state,
    sandwich,
    singlet_product,
    singlet_spinor_product,
    singlet_sum_sigma,
)

from conftest import vectors
from oracles import oracle_singlet, oracle_spin_sandwich

R = 1 / np.sqrt(2)


def test_sigma1_dot_sigma2_spectrum():
    ev = np.linalg.eigvalsh(pauli_term(TermKind.SIGMA1_DOT_SIGMA2).matrix)
    assert np.allclose(sorted(ev), [-3, 1, 1, 1])


def test_dot_sigma1_z():
    m = pauli_term(TermKind.DOT_SIGMA1, [0, 0, 1]).matrix
    assert np.allclose(m, np.diag([1, 1, -1, -1]))


def test_product_xx_is_kron():
    m = pauli_term(TermKind.PRODUCT, [1, 0, 0], [1, 0, 0]).matrix
    assert np.allclose(m, np.kron(SIGMA[0], SIGMA[0]))


def test_dot_sigma2_acts_on_second_factor():
    m = pauli_term(TermKind.DOT_SIGMA2, [0, 0, 1]).matrix
    assert np.allclose(m, np.diag([1, -1, 1, -1]))


@pytest.mark.parametrize(
    "s,m,want",
    [(0, 0, [0, R, -R, 0]), (1, 1, [1, 0, 0, 0]), (1, 0, [0, R, R, 0]), (1, -1, [0, 0, 0, 1])],
)
def test_coupled_states(s, m, want):
    assert np.allclose(coupled_state(s, m).amplitudes, want)
    assert coupled_state(s, m).norm == pytest.approx(1.0)


@pytest.mark.parametrize("s,m", [(2, 0), (0, 1), (1, 2)])
def test_coupled_state_rejects(s, m):
    with pytest.raises(ValueError):
        coupled_state(s, m)


def test_product_state_labels():
    assert np.allclose(product_state("-", "+").amplitudes, [0, 0, 1, 0])


def test_singlet_identities():
    assert sandwich(SINGLET, pauli_term(TermKind.SIGMA1_DOT_SIGMA2), SINGLET) == pytest.approx(-3)
    x = [1.0, 0, 0]
    assert sandwich(SINGLET, pauli_term(TermKind.PRODUCT, x, x), SINGLET) == pytest.approx(-1)


def test_triplet_sees_plus_one():
    for m in (-1, 0, 1):
        t = coupled_state(1, m)
        assert sandwich(t, pauli_term(TermKind.SIGMA1_DOT_SIGMA2), t) == pytest.approx(1)


def test_spin_exchange_operator():
    # P swaps the two spins: singlet odd, triplet even, P^2 = 1
    assert np.allclose(SPIN_EXCHANGE @ SPIN_EXCHANGE, IDENTITY4)
    assert np.allclose(SPIN_EXCHANGE @ SINGLET.amplitudes, -SINGLET.amplitudes)
    assert np.allclose(SPIN_EXCHANGE @ product_state("+", "-").amplitudes, product_state("-", "+").amplitudes)


@given(vectors, vectors)
def test_singlet_product_rule(a, b):
    direct = sandwich(SINGLET, pauli_term(TermKind.PRODUCT, a, b), SINGLET)
    assert abs(direct - singlet_product(a, b)) < 1e-12 * (1 + np.dot(np.abs(a), np.abs(b)))
    assert abs(direct + np.dot(a, b)) < 1e-12 * (1 + np.dot(np.abs(a), np.abs(b)))


@given(vectors)
def test_singlet_sum_sigma_vanishes(c):
    assert abs(sandwich(SINGLET, pauli_term(TermKind.SUM_SIGMA, c), SINGLET)) < 1e-12
    assert singlet_sum_sigma(c) == 0


@given(st.floats(-3, 3), vectors)
def test_singlet_spinor_product(a, b):
    op = (
        pauli_term(TermKind.IDENTITY, coefficient=a * a)
        + pauli_term(TermKind.SUM_SIGMA, b, coefficient=1j * a)
        + pauli_term(TermKind.PRODUCT, b, b, coefficient=-1.0)
    )
    got = sandwich(SINGLET, op, SINGLET)
    assert abs(got - singlet_spinor_product(a, b)) < 1e-11 * (1 + a * a + b @ b)


@given(vectors, vectors, st.sampled_from(list(TermKind)))
def test_terms_hermitian_and_match_oracle(a, b, kind):
    op = pauli_term(kind, a, b, coefficient=0.7)
    assert op.is_hermitian()
    for bra, ket in [((0, 1, 0, 0), (0, 0, 1, 0)), ((1, 0, 0, 0), (0, 0, 0, 1))]:
        got = sandwich(np.array(bra), op, np.array(ket))
        ref = oracle_spin_sandwich([(0.7, kind.value, (a, b))], bra, ket)
        assert abs(got - ref) < 1e-12 * (1 + np.abs(a).sum() * np.abs(b).sum())


def test_batched_terms():
    a = np.random.default_rng(1).normal(size=(7, 3))
    op = pauli_term(TermKind.PRODUCT, a, a)
    assert op.matrix.shape == (7, 4, 4)
    assert np.allclose(sandwich(SINGLET, op, SINGLET), -(a * a).sum(axis=1))


def test_operator_algebra():
    a = pauli_term(TermKind.DOT_SIGMA1, [1, 2, 3])
    b = pauli_term(TermKind.IDENTITY)
    assert np.allclose((a + b - b).matrix, a.matrix)
    assert np.allclose((2 * a).matrix, 2 * a.matrix)
    assert isinstance(a @ b, TwoSpinOperator)


def test_rejects_bad_vector():
    with pytest.raises(ValueError):
        pauli_term(TermKind.DOT_SIGMA1, [1, 2])


def test_oracle_empty_list():
    assert oracle_spin_sandwich([], oracle_singlet(), oracle_singlet()) == 0
