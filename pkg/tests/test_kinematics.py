import math

import numpy as np
import pytest
from hypothesis import given

from eephase.kinematics import (
    CONSTANTS,
    Channel,
    ComKinematics,
    ForwardSingularity,
    build_kinematics,
    screened_denominator,
    screened_denominator_closed_form,
)

from conftest import cosines, momenta


def test_forward():
    kin = build_kinematics(1.0, 1.0, 1.0)
    assert kin.E_single == pytest.approx(math.sqrt(2))
    assert kin.E_total == pytest.approx(2 * math.sqrt(2))
    assert kin.p_dot_q == pytest.approx(1.0)
    assert np.linalg.norm(kin.q_cross_p) == pytest.approx(0.0)


def test_right_angle_and_backward():
    kin = build_kinematics(1.0, 1.0, 0.0)
    assert kin.p_dot_q == pytest.approx(0.0, abs=1e-16)
    assert np.linalg.norm(kin.q_cross_p) == pytest.approx(1.0)
    assert build_kinematics(1.0, 1.0, -1.0).p_dot_q == pytest.approx(-1.0)


@pytest.mark.parametrize("m,k,x", [(0, 1, 0), (1, 0, 0), (1, 1, 1.2)])
def test_rejects(m, k, x):
    with pytest.raises(ValueError):
        build_kinematics(m, k, x)


def test_denominator_values():
    assert screened_denominator(build_kinematics(1, 1, 0.0), Channel.DIRECT, 0.0) == pytest.approx(-2)
    assert screened_denominator(build_kinematics(1, 1, 1.0), Channel.DIRECT, 1.0) == pytest.approx(-1)


def test_forward_singularity():
    with pytest.raises(ForwardSingularity):
        screened_denominator(build_kinematics(1, 1, 1.0), Channel.DIRECT, 0.0)
    with pytest.raises(ForwardSingularity):
        screened_denominator(build_kinematics(1, 1, -1.0), Channel.EXCHANGE, 0.0)


@given(momenta, cosines, momenta)
def test_vector_and_closed_forms_agree(k, x, alpha):
    kin = build_kinematics(1.0, k, x)
    for ch in Channel:
        d = screened_denominator(kin, ch, alpha)
        assert d < 0
        assert d == pytest.approx(screened_denominator_closed_form(k, x, ch, alpha), rel=1e-12, abs=1e-15)


@given(momenta, cosines)
def test_alpha_to_zero_limit(k, x):
    if abs(x) == 1:
        return
    kin = build_kinematics(1.0, k, x)
    unscreened = -np.sum((kin.p_vec - kin.q_vec) ** 2)
    for a in (1e-4, 1e-6, 1e-8):
        d = screened_denominator(kin, Channel.DIRECT, a)
        assert abs(d - unscreened) <= a * a * (1 + 1e-12) + 1e-12 * abs(unscreened)


def test_from_vectors_requires_elastic():
    with pytest.raises(ValueError):
        ComKinematics.from_vectors(1.0, [0, 0, 1], [0, 0, 2])
    kin = ComKinematics.from_vectors(1.0, [[0, 0, 1]], [[0, 1, 0]])
    assert kin.x[0] == pytest.approx(0.0)


def test_batched_x():
    kin = build_kinematics(1.0, 0.5, np.linspace(-1, 1, 9))
    assert kin.q_vec.shape == (9, 3)
    assert np.allclose(np.linalg.norm(kin.q_vec, axis=1), 0.5)


def test_e_squared():
    assert CONSTANTS.e_squared == pytest.approx(4 * math.pi / 137.035999)
