"""Fractional-Laplacian quadrature and Poisson-equation solver tests.

POISSON_F0 freezes f(0) = int_0^1 (mu - exp(-(1 - u^alpha)/(2 alpha)))/u du
computed with 30-digit mpmath quadrature (substituting u = e^{-t} in the
time integral of the cosine semigroup).
"""

import math

import numpy as np
import pytest

from stable_tv_lab import (
    GridFunction,
    PoissonProblem,
    RngStream,
    drift_registry,
    frac_laplacian_1d,
    generator_p,
    generator_q,
    lin_norm_diff,
    mu_h_estimate,
    poisson_solution,
)
from stable_tv_lab.pde import poisson_solution_grid

POISSON_F0 = {
    2.0: -0.103789001406,
    1.8: -0.125538707842,
    1.9: -0.113891564609,
    1.95: -0.108664915271,
}

OU = drift_registry("ou")


def _cos_grid(half=4.0, step=0.005):
    grid = np.arange(-half, half + step / 2, step)
    return GridFunction.from_callable(np.cos, grid)


def test_grid_function_validation():
    with pytest.raises(ValueError):
        GridFunction(np.array([0.0, 1.0, 3.0] + list(range(4, 12))), np.zeros(12))  # non-uniform
    with pytest.raises(ValueError):
        GridFunction(np.linspace(0, 1, 5), np.zeros(5))  # too short
    with pytest.raises(ValueError):
        GridFunction(np.linspace(0, 1, 10), np.full(10, np.nan))


def test_grid_function_derivatives_of_cos():
    f = _cos_grid()
    assert f.deriv1(0.5) == pytest.approx(-math.sin(0.5), abs=1e-9)
    assert f.deriv2(0.5) == pytest.approx(-math.cos(0.5), abs=1e-8)
    with pytest.raises(ValueError):
        f.deriv1(0.5001234)  # not a grid point
    with pytest.raises(ValueError):
        f.deriv2(-4.0)  # no room for the stencil


def test_linear_extension_reproduces_affine_functions():
    grid = np.linspace(-2.0, 2.0, 101)
    f = GridFunction(grid, 3.0 - 0.5 * grid)
    a, b = f.side_model(1)
    assert (a, b) == (pytest.approx(3.0), pytest.approx(-0.5))
    assert f(10.0) == pytest.approx(-2.0)
    assert f(-10.0) == pytest.approx(8.0)


def test_constant_extension_freezes_edge_values():
    grid = np.linspace(-1.0, 1.0, 21)
    f = GridFunction(grid, grid**2, extension=("constant",))
    assert f(5.0) == pytest.approx(1.0)
    assert f(-5.0) == pytest.approx(1.0)


def test_callable_extension_has_no_side_model():
    f = _cos_grid()
    assert f(100.0) == pytest.approx(math.cos(100.0))
    with pytest.raises(ValueError):
        f.side_model(0)


@pytest.mark.parametrize("alpha", [1.2, 1.5, 1.8])
@pytest.mark.parametrize("xi", [0.5, 2.0])
def test_frac_laplacian_symbol_on_cosines(alpha, xi):
    # L cos(xi .) (x) = -(|xi|^alpha / 2) cos(xi x), half-speed normalization
    grid = np.arange(-4.0, 4.0 + 0.0025, 0.005)
    f = GridFunction.from_callable(lambda x: np.cos(xi * x), grid)
    for x in (0.0, 0.3):
        got = frac_laplacian_1d(f, alpha, x)
        want = -(abs(xi) ** alpha / 2.0) * math.cos(xi * x)
        assert got == pytest.approx(want, rel=1e-3, abs=1e-6)


def test_frac_laplacian_input_validation():
    f = _cos_grid()
    with pytest.raises(ValueError):
        frac_laplacian_1d(f, 2.0, 0.0)  # alpha = 2 is the local generator
    with pytest.raises(ValueError):
        frac_laplacian_1d(f, 1.5, 10.0)  # x off the grid


def test_generator_q_on_cos():
    f = _cos_grid()
    x = 0.5
    want = -x * (-math.sin(x)) + 0.5 * (-math.cos(x))
    assert generator_q(f, OU, x) == pytest.approx(want, abs=1e-8)


@pytest.mark.parametrize("alpha,expected", sorted(POISSON_F0.items()))
def test_poisson_solution_at_origin(alpha, expected):
    prob = PoissonProblem(h=np.cos, alpha=alpha, drift=OU)
    assert poisson_solution(prob, 0.0) == pytest.approx(expected, abs=1e-7)


def test_poisson_solution_solves_the_equation():
    # residual of A f - (h - mu(h)) at interior points, Brownian case
    grid = np.arange(-10.0, 10.0 + 0.005, 0.01)
    f2 = poisson_solution_grid(PoissonProblem(h=np.cos, alpha=2.0, drift=OU), grid)
    mu = math.exp(-0.25)
    for x in (-1.0, 0.0, 0.7, 2.0):
        resid = generator_q(f2, OU, x) - (math.cos(x) - mu)
        assert abs(resid) < 1e-3
    # and the stable case via the nonlocal generator
    fa = poisson_solution_grid(PoissonProblem(h=np.cos, alpha=1.9, drift=OU), grid)
    mua = math.exp(-1.0 / 3.8)
    for x in (0.0, 0.7):
        resid = generator_p(fa, OU, 1.9, x) - (math.cos(x) - mua)
        assert abs(resid) < 1e-2


def test_poisson_mc_engine_agrees_with_closed_form():
    alpha, x = 1.8, 0.5
    mu = math.exp(-1.0 / (2.0 * alpha))
    prob = PoissonProblem(h=np.cos, alpha=alpha, drift=OU, mu_h=mu)
    mc = poisson_solution(
        prob, x, engine="mc", t_max=12.0, quad_steps=60, n_paths=60_000, rng=RngStream(5, 0), dt=0.01
    )
    exact = poisson_solution(prob, x)
    assert mc == pytest.approx(exact, abs=0.02)


def test_poisson_engine_validation():
    prob = PoissonProblem(h=np.cos, alpha=1.5, drift=OU)
    with pytest.raises(ValueError):
        poisson_solution(prob, 0.0, engine="spectral")
    with pytest.raises(ValueError):
        poisson_solution(prob, 0.0, engine="mc")  # mc needs mu_h
    with pytest.raises(ValueError):
        poisson_solution(PoissonProblem(h=np.cos, alpha=1.5, drift=drift_registry("zero")), 0.0)
    with pytest.raises(ValueError):
        PoissonProblem(h=np.cos, alpha=1.0, drift=OU)


def test_mu_h_estimate_matches_ergodic_mean():
    est, se = mu_h_estimate(np.cos, OU, "brownian", t_burn=8.0, n=100_000, rng=RngStream(6, 0))
    assert est == pytest.approx(math.exp(-0.25), abs=4 * se + 0.01)


def test_lin_norm_diff_requires_matching_grids():
    grid = np.linspace(-1.0, 1.0, 21)
    f = GridFunction(grid, grid)
    g = GridFunction(grid, grid + 0.5 * (1.0 + np.abs(grid)))
    assert lin_norm_diff(f, g) == pytest.approx(0.5)
    with pytest.raises(ValueError):
        lin_norm_diff(f, GridFunction(np.linspace(-1, 1, 41), np.zeros(41)))
