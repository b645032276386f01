import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eephase.kinematics import CONSTANTS
from eephase.numerics import gauss_legendre, legendre_q
from eephase.operator_amplitude import (
    CROSS_MOMENTUM_TERMS,
    SAME_MOMENTUM_TERMS,
    AmplitudeMode,
    Channels,
    ExchangeTreatment,
    Vertex,
)
from eephase.partial_wave import (
    ConvergenceError,
    NonlinearityWarning,
    amplitude_of_x,
    born_phase_shift,
    fit_slope,
    numerators_of_x,
    parity,
    phase_shift,
    potential_estimate,
    project_Jl,
    project_l,
    project_l_adaptive,
    project_l_screened,
    screened_kernel,
    wave_index,
    wave_label,
    yukawa_born_oracle,
)

from oracles import oracle_yukawa_phase

PLAIN = AmplitudeMode(Vertex.FULL_GAMMA_MU, ExchangeTreatment.PLAIN_SANDWICH)
SWAP = AmplitudeMode(Vertex.FULL_GAMMA_MU, ExchangeTreatment.EXCHANGE_OPERATOR)
COULOMB = AmplitudeMode(Vertex.GAMMA0_ONLY, ExchangeTreatment.PLAIN_SANDWICH, Channels.DIRECT_ONLY)


class TestProjection:
    def test_constant(self):
        assert project_l(lambda x: np.ones_like(x), 0) == pytest.approx(1 / (4 * math.pi))

    def test_linear(self):
        assert project_l(lambda x: x, 1) == pytest.approx(1 / (12 * math.pi))

    @pytest.mark.parametrize("l", [0, 2, 4])
    def test_odd_amplitude_even_wave(self, l):
        assert abs(project_l(lambda x: x**3 - 0.2 * x, l)) < 1e-14

    def test_adaptive_and_convergence_flag(self):
        f = lambda x: 1 / (1.5 - x)
        assert project_l_adaptive(f, 2).value == pytest.approx(2 * legendre_q(2, 1.5) / (8 * math.pi), rel=1e-10)
        with pytest.raises(ConvergenceError):
            project_l(lambda x: 1 / (1.0000001 - x), 0, gauss_legendre(8), check_convergence=True)

    @pytest.mark.parametrize("l,j", [(0, 0), (1, 0), (2, 1), (3, 3), (0, 3)])
    def test_screened_kernel(self, l, j):
        z = 1.7
        rule = gauss_legendre(400)
        x = rule.nodes
        p = lambda n: np.polynomial.legendre.legval(x, [0] * n + [1])
        assert screened_kernel(l, j, z) == pytest.approx(rule.integrate(p(l) * p(j) / (z - x)), rel=1e-12)

    @given(st.sampled_from(["A", "B"]), st.sampled_from([PLAIN, SWAP]), st.integers(0, 3),
           st.floats(0.2, 2.0), st.floats(0.3, 3.0))
    @settings(max_examples=25, deadline=None)
    def test_screened_path_matches_plain_gauss(self, method, mode, l, k, alpha):
        # moderate z, where direct Gauss quadrature of the full amplitude is reliable
        plain = project_l_adaptive(amplitude_of_x(method, mode, 1.0, k, alpha), l)
        screened = project_l_screened(numerators_of_x(method, mode, 1.0, k), l, k, alpha)
        scale = max(plain.abs_scale, screened.abs_scale)
        assert abs(plain.value - screened.value) <= 1e-9 * abs(plain.value) + 1e-13 * scale


class TestYukawa:
    def test_closed_form_value(self):
        d = yukawa_born_oracle(0, 1.0, 1.0, A=1.0, mu=0.5)
        assert d == pytest.approx(-0.5 * 0.5 * math.log(5), rel=1e-14)
        assert d == pytest.approx(-0.4024, abs=5e-5)

    @pytest.mark.parametrize("l", [0, 1, 2, 3])
    @pytest.mark.parametrize("k,alpha", [(0.01, 0.05), (0.3, 0.2), (1.0, 3.0)])
    def test_against_integral_oracle(self, l, k, alpha):
        assert yukawa_born_oracle(l, k, alpha, 1.0, 0.5) == pytest.approx(
            oracle_yukawa_phase(l, k, alpha, 1.0, 0.5), rel=1e-11
        )

    def test_vanishes_with_strong_screening(self):
        vals = [abs(yukawa_born_oracle(0, 0.1, a)) for a in (1, 10, 100, 1000)]
        assert all(b < a for a, b in zip(vals, vals[1:])) and vals[-1] < 1e-5 * vals[0]

    def test_rejects(self):
        with pytest.raises(ValueError):
            yukawa_born_oracle(0, 0.1, 0.0)

    @pytest.mark.parametrize("alpha", [0.05, 0.1, 0.2])
    def test_coulomb_limit_of_s_wave(self, alpha):
        got = phase_shift("A", COULOMB, 0, 0.01, alpha).delta
        want = yukawa_born_oracle(0, 0.01, alpha, CONSTANTS.alpha_em, 0.5)
        assert got == pytest.approx(want, rel=1e-4)

    @pytest.mark.parametrize("k", [0.003, 0.01])
    @pytest.mark.parametrize("alpha", [0.05, 0.1, 0.2])
    def test_coulomb_p_wave_relativistic_correction(self, k, alpha):
        # the 2 q.p/(E+m)^2 charge term lifts the P wave by alpha^2/4 + k^2 (units of m)
        got = phase_shift("A", COULOMB, 1, k, alpha).delta
        want = yukawa_born_oracle(1, k, alpha, CONSTANTS.alpha_em, 0.5)
        assert got / want - 1 == pytest.approx(alpha**2 / 4 + k**2, rel=2e-3)

    @pytest.mark.parametrize("l", [0, 1, 2])
    def test_coulomb_methods_agree(self, l):
        a = phase_shift("A", COULOMB, l, 0.01, 0.1).delta
        b = phase_shift("B", COULOMB, l, 0.01, 0.1).delta
        assert a == pytest.approx(b, rel=0.01)


class TestPhaseShift:
    def test_born_normalization(self):
        assert born_phase_shift(2.0, 3.0, 0.5) == pytest.approx(-1.5)

    def test_rejects_unscreened_and_wrong_j(self):
        with pytest.raises(ValueError, match="forward singularity"):
            phase_shift("A", PLAIN, 0, 0.1, 0.0)
        with pytest.raises(ValueError):
            phase_shift("A", PLAIN, 1, 0.1, 0.1, J=2)
        with pytest.raises(ValueError):
            phase_shift("C", PLAIN, 0, 0.1, 0.1)
        with pytest.raises(ValueError):
            phase_shift("B", PLAIN, 0, 0.1, 0.1, term_mask=3)

    def test_record_fields(self):
        r = phase_shift("B", "FullGammaMu/PlainSandwich/Both", 2, 0.4, 1.0)
        assert (r.method, r.wave, r.J, r.ok) == ("B", "D", 2, True)
        assert r.im_residual < 1e-12
        assert r.as_dict()["wave"] == "D"

    @given(st.sampled_from(["A", "B"]), st.floats(1e-3, 1.0), st.floats(0.1, 10.0), st.integers(0, 3))
    @settings(max_examples=30, deadline=None)
    def test_no_attractive_channel(self, method, k, alpha, l):
        for mode in (PLAIN, SWAP):
            r = phase_shift(method, mode, l, k, alpha)
            assert r.delta <= 1e-11 * r.delta_scale

    @given(st.floats(1e-3, 1.0), st.floats(0.1, 10.0))
    @settings(max_examples=20, deadline=None)
    def test_reading_parity_split(self, k, alpha):
        # plain reading keeps odd waves only, exchange-operator reading even waves only
        for l in range(4):
            p = phase_shift("A", PLAIN, l, k, alpha)
            s = phase_shift("A", SWAP, l, k, alpha)
            zero, live = (p, s) if l % 2 == 0 else (s, p)
            assert abs(zero.delta) <= 1e-11 * zero.delta_scale
            assert abs(live.delta) > 1e-3 * live.delta_scale

    @given(st.floats(1e-3, 1.0), st.floats(0.1, 10.0), st.sampled_from([1, 3]))
    @settings(max_examples=20, deadline=None)
    def test_method_b_odd_waves_vanish(self, k, alpha, l):
        r = phase_shift("B", PLAIN, l, k, alpha)
        s = phase_shift("B", PLAIN, 0, k, alpha)
        assert abs(r.delta) < 1e-10 * abs(s.delta)

    def test_method_b_is_rescaled_exchange_reading(self):
        k, alpha = 0.5, 0.7
        for l in (0, 2):
            a = phase_shift("A", SWAP, l, k, alpha).delta
            b = phase_shift("B", PLAIN, l, k, alpha).delta
            n4 = ((math.sqrt(k * k + 1) + 1) / (2 * math.sqrt(k * k + 1))) ** 2
            assert b == pytest.approx(n4 * a, rel=1e-10)

    def test_term_attribution(self):
        k, alpha = 0.5, 1.0
        same = phase_shift("A", SWAP, 0, k, alpha, term_mask=SAME_MOMENTUM_TERMS).delta
        cross = phase_shift("A", SWAP, 0, k, alpha, term_mask=CROSS_MOMENTUM_TERMS).delta
        assert same > 0 > cross

    def test_pure_coulomb_cancellation(self):
        r = phase_shift("A", PLAIN, 0, 0.3, 1.0, term_mask=[0])
        assert abs(r.delta) <= 1e-11 * r.delta_scale

    def test_screening_suppresses(self):
        for method, mode, l in [("A", SWAP, 0), ("A", PLAIN, 1), ("B", PLAIN, 2)]:
            mags = [abs(phase_shift(method, mode, l, 0.2, a).delta) for a in (0.1, 1.0, 10.0)]
            assert mags[0] > mags[1] > mags[2]


class TestCoupledProjection:
    @staticmethod
    def scalar(p_hat, q_hat, ms, msp):
        return 1.0 / (1.8 - np.einsum("ij,ij->i", p_hat, q_hat))

    @pytest.mark.parametrize("l", [0, 1, 2])
    def test_reduces_to_legendre(self, l):
        ref = project_l(lambda x: 1 / (1.8 - x), l, gauss_legendre(200))
        assert project_Jl(self.scalar, l, l, n_theta=16, n_phi=16) == pytest.approx(ref, rel=1e-7)

    def test_independent_of_m(self):
        # exact integrals are M-blind; the product grid reaches that at its own accuracy
        for n, tol in ((12, 1e-4), (20, 1e-8)):
            vals = [project_Jl(self.scalar, 2, 2, M=m, n_theta=n, n_phi=n) for m in range(-2, 3)]
            assert np.allclose(vals, vals[0], rtol=tol)

    def test_rejects_bad_quantum_numbers(self):
        with pytest.raises(ValueError):
            project_Jl(self.scalar, 1, 2, n_theta=4, n_phi=4)
        with pytest.raises(ValueError):
            project_Jl(self.scalar, 1, 1, M=2, n_theta=4, n_phi=4)


class TestEstimates:
    def test_slope_of_line(self):
        k = np.linspace(0.1, 0.5, 5)
        slope, nonlin = fit_slope(k, 3 * k - 1)
        assert slope == pytest.approx(3) and nonlin < 1e-12

    def test_nonlinearity_warning(self):
        k = np.linspace(0, 1, 6)
        with pytest.warns(NonlinearityWarning):
            fit_slope(k, k**4)

    def test_quiet_for_linear(self):
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            fit_slope([1, 2, 3], [2, 4, 6])

    def test_potential_chain(self):
        assert potential_estimate(1e-8, 5e5) == pytest.approx(-(197.0**3) * 1e-8 / 1e6, rel=1e-15)
        assert potential_estimate(1e-8, 5e5) == pytest.approx(-7.645373e-8, rel=1e-6)
        assert potential_estimate(0.0, 5e5) == 0.0

    def test_labels(self):
        assert [wave_label(l) for l in range(4)] == list("SPDF")
        assert wave_index("F") == 3 and parity(3) == -1 and parity(2) == 1
