import math

import numpy as np
import pytest

from wmt import (
    DomainError,
    Profile1D,
    RadialFunction,
    from_reduced,
    make_weight_params,
    to_reduced,
)


def test_classical_constant():
    p = make_weight_params(0.0)
    assert p.gamma == 1.0
    assert abs(p.alpha_beta - 4.0 * math.pi) < 1e-12


def test_half_weight_constant():
    p = make_weight_params(0.5)
    assert p.gamma == 2.0
    assert p.alpha_beta == pytest.approx(2.0 * math.pi**2, rel=1e-14)


def test_extreme_beta_stays_positive():
    # alpha_beta = 2*(0.02*pi)^100 is ~1e-120 but representable.
    p = make_weight_params(0.99)
    assert p.gamma == pytest.approx(100.0, rel=1e-12)
    assert p.alpha_beta == pytest.approx(2.0 * (0.02 * math.pi) ** 100, rel=1e-12)
    assert p.alpha_beta > 0.0
    # The transform scale avoids the tiny constant entirely.
    assert p.reduced_scale == pytest.approx(
        2.0**0.005 * math.sqrt(2.0 * math.pi * 0.01), rel=1e-14
    )


@pytest.mark.parametrize("bad", [-0.1, 1.0, 1.5, math.nan, math.inf])
def test_domain_errors(bad):
    with pytest.raises(DomainError):
        make_weight_params(bad)


def test_gamma_relation_exact():
    for beta in np.linspace(0.0, 0.95, 40):
        p = make_weight_params(float(beta))
        assert p.gamma == 1.0 / (1.0 - float(beta))


def test_alpha_continuous_in_beta():
    # No singular jump on [0, 0.95]: relative increments stay small.
    h = 1e-7
    for beta in np.linspace(0.0, 0.95, 96):
        a0 = make_weight_params(float(beta)).alpha_beta
        a1 = make_weight_params(float(beta) + h).alpha_beta
        assert abs(a1 - a0) / a0 < 1e-3


def _random_radial(rng, n=40):
    radii = np.concatenate([[1.0], np.sort(rng.uniform(0.01, 0.999, n))[::-1]])
    radii = np.unique(radii)[::-1]
    values = rng.normal(0.0, 1.0, radii.size)
    values[0] = 0.0
    return RadialFunction(radii=radii, values=values)


def test_zero_maps_to_zero(p3):
    u = RadialFunction(radii=np.array([1.0, 0.5, 0.1]), values=np.zeros(3))
    psi = to_reduced(u, p3)
    assert np.all(psi.values == 0.0)
    assert psi.values[0] == 0.0
    back = from_reduced(psi, p3)
    assert np.all(back.values == 0.0)


def test_moser_outer_region_transform():
    # u(r) = alpha^(-1/(2 gamma)) * ((-2 log r)/sqrt(k))^(1-beta) maps to
    # psi(t) = (t/sqrt(k))^(1-beta).
    beta, k = 0.4, 9.0
    p = make_weight_params(beta)
    radii = np.concatenate([[1.0], np.exp(-0.5 * np.linspace(0.3, 8.0, 25))])
    values = ((-2.0 * np.log(radii)) / math.sqrt(k)) ** (1.0 - beta) / p.reduced_scale
    values[0] = 0.0
    psi = to_reduced(RadialFunction(radii=radii, values=values), p)
    expected = (psi.grid / math.sqrt(k)) ** (1.0 - beta)
    np.testing.assert_allclose(psi.values, expected, atol=1e-13)


def test_identity_profile_maps_to_scaled_log(p3):
    grid = np.linspace(0.0, 10.0, 21)
    psi = Profile1D(grid=grid, values=grid.copy())
    u = from_reduced(psi, p3)
    expected = -2.0 * np.log(u.radii) / p3.reduced_scale
    np.testing.assert_allclose(u.values, expected, atol=1e-14)


def test_round_trip_radial_side(p5):
    rng = np.random.default_rng(7)
    for _ in range(100):
        u = _random_radial(rng)
        back = from_reduced(to_reduced(u, p5), p5)
        np.testing.assert_allclose(back.radii, u.radii, rtol=0, atol=1e-12)
        np.testing.assert_allclose(back.values, u.values, rtol=0, atol=1e-12)


def test_round_trip_profile_side(p3):
    rng = np.random.default_rng(8)
    for _ in range(100):
        grid = np.concatenate([[0.0], np.sort(rng.uniform(1e-6, 25.0, 30))])
        grid = np.unique(grid)
        values = rng.normal(0.0, 1.0, grid.size)
        values[0] = 0.0
        psi = Profile1D(grid=grid, values=values)
        back = to_reduced(from_reduced(psi, p3), p3)
        np.testing.assert_allclose(back.grid, psi.grid, rtol=0, atol=1e-12)
        np.testing.assert_allclose(back.values, psi.values, rtol=0, atol=1e-12)


def test_reduced_profile_vanishes_at_origin_exactly(p0):
    rng = np.random.default_rng(9)
    for _ in range(20):
        u = _random_radial(rng, n=12)
        assert to_reduced(u, p0).values[0] == 0.0


def test_boundary_tolerance(p0):
    u = RadialFunction(radii=np.array([1.0, 0.5]), values=np.array([9e-13, 1.0]))
    psi = to_reduced(u, p0)
    assert psi.values[0] == 0.0
    with pytest.raises(DomainError):
        to_reduced(u, p0, boundary_tol=1e-14)
