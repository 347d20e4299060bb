"""Closed-form OU laws: characteristic functions, ergodic densities, and the
exact total-variation curve.

The EXACT_TV oracle values were produced by an independent FFT inversion of
the ergodic characteristic functions (2^22 modes on [-200, 200]) and agree
with the package's adaptive-quadrature route to ~1e-7; they are frozen at
1e-5 tolerance.
"""

import math

import numpy as np
import pytest

from stable_tv_lab import (
    OuLawSpec,
    ergodic_cf,
    ergodic_density,
    exact_tv_mu,
    lb_curve,
    semigroup_cos,
    transition_cf,
    tv_from_densities,
)

EXACT_TV = {
    1.7: 0.0852263394,
    1.9: 0.0267560252,
    1.95: 0.0131882511,
    1.99: 0.0026080876,
    1.995: 0.0013022198,
}


def test_spec_validation():
    with pytest.raises(ValueError):
        OuLawSpec(1.0)
    with pytest.raises(ValueError):
        OuLawSpec(1.5, kind="bridge")
    with pytest.raises(ValueError):
        OuLawSpec(1.5, kind="transition", t=-1.0)


def test_transition_cf_limits():
    spec0 = OuLawSpec(1.5, kind="transition", x=2.0, t=0.0)
    # t = 0: the law is the point mass at x
    assert transition_cf(spec0, 1.3) == pytest.approx(np.exp(1.3j * 2.0))
    # t -> infinity: the transition law forgets x and becomes ergodic
    spec_inf = OuLawSpec(1.5, kind="transition", x=2.0, t=60.0)
    assert transition_cf(spec_inf, 1.3) == pytest.approx(ergodic_cf(1.5, 1.3), abs=1e-12)


def test_ergodic_cf_closed_form():
    for alpha in (1.2, 1.7, 2.0):
        for xi in (0.5, 1.0, 3.0):
            assert ergodic_cf(alpha, xi) == pytest.approx(
                math.exp(-abs(xi) ** alpha / (2.0 * alpha))
            )


def test_lb_curve_values():
    # frozen high-precision evaluation of e^{-1/4} - e^{-1/(2 alpha)}
    assert lb_curve(1.9) == pytest.approx(0.0101802564776691, rel=1e-12)
    assert lb_curve(2.0) == 0.0
    with pytest.raises(ValueError):
        lb_curve(1.0)


def test_lb_curve_asymptotic_slope():
    # lb(alpha) / (2 - alpha) -> e^{-1/4} / 8 as alpha -> 2
    limit = math.exp(-0.25) / 8.0
    assert lb_curve(1.999) / 0.001 == pytest.approx(limit, rel=0.002)
    assert lb_curve(1.9999) / 0.0001 == pytest.approx(limit, rel=0.0002)


def test_semigroup_cos_boundary_behaviour():
    alpha, x = 1.6, 0.7
    assert semigroup_cos(alpha, x, 0.0) == pytest.approx(math.cos(x))
    mu = math.exp(-1.0 / (2.0 * alpha))
    assert semigroup_cos(alpha, x, 50.0) == pytest.approx(mu, abs=1e-12)


def test_brownian_ergodic_density_is_gaussian():
    d = ergodic_density(2.0)
    x = d.grid
    np.testing.assert_allclose(d.values, np.exp(-(x**2)) / math.sqrt(math.pi), atol=1e-12)
    assert d.total_mass() == pytest.approx(1.0, abs=1e-6)


def test_stable_ergodic_density_shape():
    d = ergodic_density(1.5)
    assert np.all(d.values >= 0.0)
    assert d.total_mass() == pytest.approx(1.0, abs=1e-6)
    # symmetric law: density symmetric on the grid
    np.testing.assert_allclose(d.values, d.values[::-1], atol=1e-10)
    # heavier than Gaussian in the far field
    g = ergodic_density(2.0)
    far = np.searchsorted(d.grid, 5.0)
    assert d.values[far] > g.values[far]
    assert d.tail_c > 0.0 and d.tail_exponent == pytest.approx(1.5)


@pytest.mark.parametrize("alpha,expected", sorted(EXACT_TV.items()))
def test_exact_tv_against_fft_oracle(alpha, expected):
    assert exact_tv_mu(alpha) == pytest.approx(expected, abs=1e-5)


def test_exact_tv_dominates_the_cosine_bound():
    for alpha in (1.7, 1.9, 1.95, 1.99):
        assert exact_tv_mu(alpha) >= lb_curve(alpha)


def test_exact_tv_agrees_with_generic_density_route():
    alpha = 1.9
    tv = tv_from_densities(ergodic_density(alpha), ergodic_density(2.0))
    assert tv == pytest.approx(exact_tv_mu(alpha), abs=1e-6)


def test_exact_tv_rejects_alpha_out_of_range():
    with pytest.raises(ValueError):
        exact_tv_mu(1.01)
    with pytest.raises(ValueError):
        exact_tv_mu(2.0)
