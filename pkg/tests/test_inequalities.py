import math

import numpy as np
import pytest

from wmt import (
    Profile1D,
    cc_tail_bound,
    concentration_level_cap,
    crossing_point,
    diagnose,
    functional_i,
    gamma_energy,
    holder_growth,
    km_envelope,
    make_weight_params,
    moser_profile,
    weighted_tail_bound,
)
from wmt.errors import DomainError
from wmt.inequalities import _crossing_g
from wmt.suites import random_profile


def _flat(t_max=30.0):
    grid = np.linspace(0.0, t_max, 301)
    return Profile1D(grid=grid, values=np.zeros(301))


class TestHolderGrowth:
    def test_zero_profile(self, p3):
        assert holder_growth(_flat(), p3, 1.0, 5.0) == (0.0, 0.0)

    def test_argument_order(self, p3):
        with pytest.raises(DomainError):
            holder_growth(_flat(), p3, 5.0, 1.0)

    def test_random_profiles_from_origin(self, p5):
        rng = np.random.default_rng(21)
        for _ in range(200):
            psi = random_profile(rng)
            t = float(rng.uniform(0.0, psi.t_max))
            lhs, rhs = holder_growth(psi, p5, 0.0, t)
            assert lhs <= rhs + 1e-12 * (1.0 + abs(rhs))

    def test_moser_is_the_equality_case_at_beta0(self, p0):
        # beta = 0: the sampled profile is exactly piecewise linear and the
        # Cauchy-Schwarz bound is attained at (A, t) = (0, k).
        k = 16.0
        psi = moser_profile(k, p0)
        lhs, rhs = holder_growth(psi, p0, 0.0, k)
        assert lhs == pytest.approx(rhs, abs=1e-9)
        assert lhs == pytest.approx(math.sqrt(k), rel=1e-12)

    @pytest.mark.parametrize("beta", [0.3, 0.7])
    def test_moser_near_equality_for_weighted_case(self, beta):
        # Piecewise-linear sampling carries O(1e-7) energy excess, so exact
        # equality is unattainable; the bound itself always holds.
        k = 16.0
        p = make_weight_params(beta)
        psi = moser_profile(k, p)
        lhs, rhs = holder_growth(psi, p, 0.0, k)
        assert lhs <= rhs
        assert rhs - lhs < 5e-6


class TestCcTailBound:
    def test_formula(self):
        assert cc_tail_bound(2.0, 1.0) == pytest.approx(math.e**2, rel=1e-14)

    def test_small_c_limit(self):
        assert cc_tail_bound(1e-9, 1.0) == pytest.approx(math.e, rel=1e-9)

    @pytest.mark.parametrize("c,delta", [(0.0, 1.0), (-1.0, 1.0), (1.0, 0.0)])
    def test_domain(self, c, delta):
        with pytest.raises(DomainError):
            cc_tail_bound(c, delta)


class TestWeightedTailBound:
    def test_collapsed_exponent(self, p3):
        assert weighted_tail_bound(0.0, 0.0, 2.5, p3) == pytest.approx(
            math.exp(1.0 - 2.5), rel=1e-14
        )

    def test_dominates_zero_profile_tail(self, p3):
        for a in (0.5, 2.0, 7.0):
            assert math.exp(-a) <= weighted_tail_bound(0.0, 0.0, a, p3)

    def test_hypothesis_guard(self):
        p = make_weight_params(0.5)  # gamma = 2
        with pytest.raises(DomainError):
            weighted_tail_bound(0.3, 0.6, 1.0, p)  # gamma*delta = 1.2

    def test_other_preconditions(self, p3):
        with pytest.raises(DomainError):
            weighted_tail_bound(0.1, 0.1, 0.0, p3)
        with pytest.raises(DomainError):
            weighted_tail_bound(-0.1, 0.1, 1.0, p3)


class TestCrossingPoint:
    def test_zero_profile_has_none(self, p0):
        assert crossing_point(_flat(), p0) is None

    def test_moser_k4_bracket(self, p0):
        # g(t) = t^2/4 - t + 2 log t: g(1) = -0.75 < 0 < g(2).
        assert 0.25 - 1.0 < 0.0
        assert 1.0 - 2.0 + 2.0 * math.log(2.0) > 0.0
        psi = moser_profile(4.0, p0)
        a = crossing_point(psi, p0)
        assert a is not None and 1.0 < a < 2.0
        # root is polished on the profile's own sign function
        assert abs(float(_crossing_g(psi, p0, np.asarray(a)))) <= 1e-10
        # and sits within sampling error of the closed-form root
        g_exact = lambda t: t * t / 4.0 - t + 2.0 * math.log(t)
        assert abs(g_exact(a)) < 1e-6

    def test_monotone_in_concentration_parameter(self, p3):
        previous = 0.0
        for k in (4.0, 16.0, 64.0, 256.0):
            a = crossing_point(moser_profile(k, p3), p3)
            assert a is not None and a > previous
            previous = a

    def test_short_profile_returns_none(self, p0):
        grid = np.array([0.0, 0.5])
        assert crossing_point(Profile1D(grid=grid, values=np.zeros(2)), p0) is None


class TestDiagnose:
    def test_zero_profile(self, p0):
        d = diagnose(_flat(), p0)
        assert d.crossing_a is None
        assert d.head_integral + d.tail_integral == pytest.approx(1.0, abs=1e-12)
        assert d.tail_integral == 0.0
        assert d.k_quantity is None and d.tail_bound is None and d.gamma_m is None

    def test_concentrating_family_trend(self, p5):
        diags = {k: diagnose(moser_profile(k, p5), p5) for k in (1e2, 1e3, 1e4)}
        assert abs(diags[1e4].head_integral - 1.0) <= 0.05
        assert diags[1e4].head_integral == pytest.approx(1.0 + 2e-4, abs=5e-5)
        # K decreases toward zero along the family
        assert diags[1e2].k_quantity > diags[1e3].k_quantity > diags[1e4].k_quantity
        assert diags[1e4].k_quantity < 0.01
        assert diags[1e4].k_quantity >= -1e-9
        # crossing moves out
        assert diags[1e2].crossing_a < diags[1e3].crossing_a < diags[1e4].crossing_a

    def test_head_slack_for_moderate_k(self, p5):
        for k in (100.0, 400.0):
            d = diagnose(moser_profile(k, p5), p5)
            assert d.head_integral <= 1.05

    def test_beta0_k_quantity_vanishes(self, p0):
        # At beta = 0 the crossing identity makes K identically zero.
        for k in (1e2, 1e4):
            d = diagnose(moser_profile(k, p0), p0)
            assert abs(d.k_quantity) < 1e-9

    def test_split_and_bounds(self, p5):
        psi = moser_profile(400.0, p5)
        d = diagnose(psi, p5)
        rep = functional_i(psi, p5)
        assert d.head_integral + d.tail_integral == pytest.approx(rep.i_value, rel=1e-12)
        assert d.tail_energy_delta <= gamma_energy(psi, p5)
        assert d.tail_energy_delta <= d.wq_bound + 1e-6
        assert d.tail_integral <= d.tail_bound
        assert d.gamma_m == pytest.approx(1.0 - p5.gamma * d.tail_energy_delta, rel=1e-14)
        doc = d.to_json_dict()
        assert set(doc) == {
            "crossing_a",
            "tail_energy_delta",
            "k_quantity",
            "head_integral",
            "tail_integral",
            "tail_bound",
            "gamma_m",
            "wq_bound",
        }


class TestKmEnvelope:
    def test_beta0_linear_term_vanishes_exactly(self, p0):
        for x in (3.0, 100.0, 1e6):
            _, linear = km_envelope(x, p0)
            assert linear == 0.0

    def test_gamma2_large_x(self):
        p = make_weight_params(0.5)
        term_log, term_linear = km_envelope(1e6, p)
        assert abs(term_log) <= 1e-3
        assert abs(term_linear) <= 1e-3

    @pytest.mark.parametrize("beta", [1.0 - 1.0 / 1.5, 0.5, 0.75])
    def test_terms_decrease_toward_zero(self, beta):
        p = make_weight_params(beta)
        xs = (1e3, 1e4, 1e5, 1e6)
        logs = [abs(km_envelope(x, p)[0]) for x in xs]
        lins = [abs(km_envelope(x, p)[1]) for x in xs]
        assert all(a > b for a, b in zip(logs, logs[1:]))
        assert all(a > b for a, b in zip(lins, lins[1:]))
        assert logs[-1] < 1e-3 and lins[-1] < 1e-3

    def test_domain(self, p5):
        with pytest.raises(DomainError):
            km_envelope(math.e, p5)
        with pytest.raises(DomainError):
            km_envelope(1.0, p5)


class TestConcentrationCap:
    def test_value(self):
        assert concentration_level_cap() == pytest.approx(3.718281828459045, abs=1e-12)

    def test_concentrating_family_stays_below_cap(self, p5):
        for k in (1e2, 1e3, 1e4):
            rep = functional_i(moser_profile(k, p5), p5)
            assert rep.i_value <= concentration_level_cap() + 0.01

    def test_witness_exceeds_cap(self):
        from wmt import cc_phi

        for beta in (0.0, 0.4, 0.8):
            p = make_weight_params(beta)
            assert functional_i(cc_phi(p), p).i_value > concentration_level_cap()
