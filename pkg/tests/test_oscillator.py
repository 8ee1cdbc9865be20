import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spikedosc import oscillator as osc
from spikedosc.errors import DomainError, PoleError
from spikedosc.hyperfun import digamma
from spikedosc.oscillator import OscillatorModel

from . import oracles

finite = dict(allow_nan=False, allow_infinity=False)
GROUND = OscillatorModel(A=0.0, B=1.0, lam=1.0, alpha=2.0)


def model_at(gamma, alpha, B=1.0, lam=1.0):
    return OscillatorModel.from_gamma(gamma, B=B, lam=lam, alpha=alpha)


def log_form(x, g):
    # psi_0^(1) at A=0, B=1, alpha=2 written with ln x
    return (x ** (g - 0.5) * math.exp(-x * x / 2) * (math.log(x) - digamma(g) / 2)
            / (math.sqrt(2) * (g - 1) * math.sqrt(math.gamma(g))))


class TestModel:
    @pytest.mark.parametrize("A, g", [(0.0, 1.5), (2.0, 2.5), (6.0, 3.5)])
    def test_gamma_of(self, A, g):
        assert osc.gamma_of(A) == g
        assert OscillatorModel(A=A).gamma == g

    @given(st.floats(0, 1e6, **finite))
    def test_gamma_at_least_three_halves(self, A):
        assert osc.gamma_of(A) >= 1.5

    @given(st.floats(1.5, 50, **finite))
    def test_from_gamma_round_trip(self, g):
        assert model_at(g, 1.0).gamma == pytest.approx(g, rel=1e-13)

    @pytest.mark.parametrize("kw", [dict(A=-1.0), dict(B=0.0), dict(B=-1.0), dict(lam=-0.1),
                                    dict(alpha=0.0), dict(alpha=-2.0)])
    def test_invalid_fields(self, kw):
        with pytest.raises(DomainError):
            OscillatorModel(**kw)

    def test_alpha_below_two_gamma(self):
        with pytest.raises(DomainError):
            OscillatorModel(A=0.0, alpha=3.5)

    def test_pole_at_alpha_two_gamma(self):
        # gamma - alpha/2 = 0 is a pole of Gamma before it is a domain violation
        with pytest.raises(PoleError):
            OscillatorModel(A=0.0, alpha=3.0)
        with pytest.raises(PoleError):
            OscillatorModel(A=0.0, alpha=3.0 + 1e-9)

    def test_gamma_of_negative(self):
        with pytest.raises(DomainError):
            osc.gamma_of(-0.1)
        with pytest.raises(DomainError):
            OscillatorModel.from_gamma(1.2)


class TestBasis:
    @pytest.mark.parametrize("n, A, B, E", [(0, 0.0, 1.0, 3.0), (2, 0.0, 1.0, 11.0), (1, 2.0, 4.0, 18.0)])
    def test_energy(self, n, A, B, E):
        assert osc.energy(n, OscillatorModel(A=A, B=B)) == E

    def test_psi0_at_one(self):
        assert osc.basis_psi(0, GROUND, 1.0) == pytest.approx(oracles.PSI0_AT_1, rel=1e-14)

    def test_sign_convention(self):
        # near the origin 1F1 ~ 1, so the sign is (-1)^n
        signs = [np.sign(osc.basis_psi(n, GROUND, 1e-3)) for n in range(5)]
        assert signs == [1, -1, 1, -1, 1]

    @pytest.mark.parametrize("x", [0.0, -1.0])
    def test_domain(self, x):
        with pytest.raises(DomainError):
            osc.basis_psi(0, GROUND, x)
        with pytest.raises(DomainError):
            osc.basis_psi(-1, GROUND, 1.0)

    @pytest.mark.parametrize("model", [GROUND, OscillatorModel(A=2.0, B=2.0), OscillatorModel(A=0.3, B=0.5)])
    def test_orthonormal(self, model):
        for m in range(6):
            for n in range(m, 6):
                val = osc.overlap_quadrature(m, n, model, 0.0)
                assert abs(val - (m == n)) < 1e-8, (m, n, val)

    def test_large_index_is_finite(self):
        v = osc.basis_psi(150, OscillatorModel(A=6.0), 3.0)
        assert math.isfinite(v)


class TestMatrixElements:
    def test_ground_diagonal(self):
        assert osc.matrix_element_x_alpha(0, 0, GROUND) == pytest.approx(2.0, rel=1e-14)

    @given(st.floats(1.5, 6, **finite), st.floats(0.1, 2.9, **finite), st.floats(0.2, 5, **finite))
    def test_ground_diagonal_general(self, g, alpha, B):
        alpha = min(alpha, 2 * g - 0.1)
        m = OscillatorModel.from_gamma(g, B=B, alpha=alpha)
        ref = B ** (alpha / 4) * math.gamma(g - alpha / 2) / math.gamma(g)
        np.testing.assert_allclose(osc.matrix_element_x_alpha(0, 0, m), ref, rtol=1e-12)

    def test_reference_values(self):
        assert osc.matrix_element_x_alpha(1, 1, model_at(2.5, 2.0)) == pytest.approx(
            oracles.X_ALPHA2_11_GAMMA_2_5, rel=1e-13)
        assert osc.matrix_element_x_alpha(1, 2, GROUND) == pytest.approx(
            oracles.X_ALPHA2_12_GAMMA_1_5, rel=1e-13)

    def test_quadrature_reference(self):
        assert osc.matrix_element_quadrature_oracle(0, 0, GROUND) == pytest.approx(2.0, abs=1e-8)
        q = osc.matrix_element_quadrature_oracle(1, 2, GROUND)
        assert q == pytest.approx(osc.matrix_element_x_alpha(1, 2, GROUND), abs=1e-8)
        m = model_at(2.5, 2.0)
        assert osc.matrix_element_quadrature_oracle(1, 1, m) == pytest.approx(
            osc.matrix_element_x_alpha(1, 1, m), abs=1e-8)

    @pytest.mark.parametrize("alpha", [1.0, 2.0, 3.0, 4.0])
    @pytest.mark.parametrize("g", [2.5, 3.5])
    def test_against_quadrature(self, alpha, g):
        model = model_at(g, alpha)
        for m in range(5):
            for n in range(5):
                ref = osc.matrix_element_quadrature_oracle(m, n, model)
                val = osc.matrix_element_x_alpha(m, n, model)
                assert abs(val - ref) <= 1e-7 * abs(ref), (m, n, val, ref)

    @pytest.mark.parametrize("alpha", [0.7, 2.0, 3.3, 4.0, 6.0])
    @pytest.mark.parametrize("g", [3.6, 5.0])
    def test_symmetry(self, alpha, g):
        model = model_at(g, alpha, B=1.7)
        x = np.array([[osc.matrix_element_x_alpha(m, n, model) for n in range(7)] for m in range(7)])
        np.testing.assert_allclose(x, x.T, rtol=0, atol=1e-10 * max(1.0, np.abs(x).max()))

    @pytest.mark.parametrize("m, n", [(0, 3), (2, 1), (3, 3), (4, 2)])
    def test_even_alpha_is_continuous(self, m, n):
        # the degenerate term-wise limit must agree with nearby generic alpha
        g = 3.5
        at = osc.matrix_element_x_alpha(m, n, model_at(g, 2.0))
        for eps in (1e-7, -1e-7):
            near = osc.matrix_element_x_alpha(m, n, model_at(g, 2.0 + eps))
            assert near == pytest.approx(at, rel=1e-5, abs=1e-6)

    @given(st.integers(0, 12), st.integers(0, 12), st.integers(1, 6))
    def test_degenerate_zeros_always_pair(self, m, n, s):
        # the numerator zero at k = s-1 never comes after the denominator zero at k = n+s-1
        assert math.isfinite(osc._hyp3f2_degenerate(m, n, s + 0.75, s))

    def test_negative_index(self):
        with pytest.raises(DomainError):
            osc.matrix_element_x_alpha(-1, 0, GROUND)


class TestHamiltonian:
    def test_ground_diagonal(self):
        m = OscillatorModel(A=0.0, B=1.0, lam=0.1, alpha=2.0)
        assert osc.hamiltonian_element(0, 0, m) == pytest.approx(3.2, rel=1e-14)

    def test_zero_coupling_is_diagonal(self):
        m = OscillatorModel(A=0.0, B=1.0, lam=0.0, alpha=2.0)
        assert osc.hamiltonian_element(1, 2, m) == 0.0
        assert osc.hamiltonian_element(2, 2, m) == osc.energy(2, m)

    def test_symmetric(self):
        m = OscillatorModel(A=0.0, B=1.0, lam=1.0, alpha=2.0)
        assert abs(osc.hamiltonian_element(1, 2, m) - osc.hamiltonian_element(2, 1, m)) <= 1e-10

    def test_h0n_reference(self):
        assert osc.h0n(1, GROUND) == pytest.approx(oracles.H01_ALPHA2, rel=1e-14)

    @pytest.mark.parametrize("alpha", [1.0, 2.0, 2.5, 4.0])
    @pytest.mark.parametrize("n", [1, 2, 5, 9])
    def test_h0n_matches_row(self, alpha, n):
        m = model_at(3.5, alpha, B=1.3, lam=0.7)
        assert osc.h0n(n, m) == pytest.approx(osc.hamiltonian_element(0, n, m), rel=1e-12)

    def test_h0n_linear_in_lambda(self):
        a = osc.h0n(3, model_at(2.5, 1.0, lam=0.4))
        b = osc.h0n(3, model_at(2.5, 1.0, lam=0.8))
        assert b == pytest.approx(2 * a, rel=1e-15)

    def test_h0n_requires_positive_n(self):
        with pytest.raises(DomainError):
            osc.h0n(0, GROUND)


class TestFirstOrder:
    def test_endpoint(self):
        ref = 2 * math.pi ** -0.25 * math.exp(-0.5) * (-0.5 * oracles.PSI_1_5)
        assert ref == pytest.approx(oracles.FIRST_ORDER_AT_1, rel=1e-14)
        assert osc.first_order_correction(GROUND, 1.0) == pytest.approx(ref, abs=1e-12)

    def test_near_origin_value(self):
        # the x^(gamma-1/2) ln x decay is slow: still ~1e-2 at x = 1e-3
        v = osc.first_order_correction(GROUND, 1e-3)
        assert v == pytest.approx(oracles.FIRST_ORDER_AT_1E_3, rel=1e-12)

    @settings(max_examples=60)
    @given(st.floats(1e-4, 6, **finite), st.floats(1.5, 6, **finite))
    def test_log_form(self, x, g):
        model = model_at(g, 2.0)
        assert abs(osc.first_order_correction(model, x) - log_form(x, g)) <= 1e-12

    def test_origin_limit_is_monotone(self):
        xs = np.geomspace(1e-12, 1e-2, 300)
        mags = np.abs([osc.first_order_correction(GROUND, x) for x in xs])
        assert np.all(np.diff(mags) > 0)
        assert mags[0] < 1e-5

    @pytest.mark.parametrize("alpha, g", [(2.0, 2.5), (4.0, 3.5)])
    def test_contour_path_matches_closed(self, alpha, g):
        model = model_at(g, alpha)
        for x in (0.6, 1.4):
            assert osc.first_order_correction(model, x, contour=True) == pytest.approx(
                osc.first_order_correction(model, x), abs=1e-8)

    def test_odd_alpha_falls_back_to_contour(self):
        model = model_at(2.5, 3.0)
        v = osc.first_order_correction(model, 1.0, contour=True)
        assert math.isfinite(v)
        assert osc.first_order_correction(model, 1.0) == v

    def test_domain(self):
        with pytest.raises(DomainError):
            osc.first_order_correction(GROUND, 0.0)

    @pytest.mark.parametrize("alpha, g", [(2.0, 1.5), (4.0, 3.5), (6.0, 4.5)])
    @pytest.mark.parametrize("B", [0.3, 2.0, 5.0])
    def test_b_scaling_versus_direct_terms(self, alpha, g, B):
        # Under x -> B^(1/4) x each direct perturbation term scales by
        # B^(alpha/4 - 3/8) while the assembled prefactor scales by
        # B^(alpha/2 - 3/8). The closed-form B power differs by B^(alpha/4).
        x = 0.8
        xs = B ** -0.25 * x
        mb, m1 = model_at(g, alpha, B=B), model_at(g, alpha)
        term_ratio = [osc.first_order_term(n, mb, xs) / osc.first_order_term(n, m1, x) for n in (1, 2, 5)]
        np.testing.assert_allclose(term_ratio, B ** (alpha / 4 - 0.375), rtol=1e-12)
        closed_ratio = osc.first_order_correction(mb, xs) / osc.first_order_correction(m1, x)
        assert closed_ratio / term_ratio[0] == pytest.approx(B ** (alpha / 4), rel=1e-12)

    def test_direct_sum_at_unit_b(self):
        # smoothed Rayleigh-Schroedinger partial sums converge to the closed value
        from spikedosc.accel import cesaro_window_mean
        x = 1.0
        terms = [osc.first_order_term(n, GROUND, x) for n in range(1, 1201)]
        smoothed = cesaro_window_mean(np.cumsum(terms))
        assert smoothed == pytest.approx(osc.first_order_correction(GROUND, x), abs=2e-4)
