"""Contour-integral engine: Gaussian closed forms, brute quadrature and
finite differences as oracles."""

import math

import numpy as np
import pytest
import scipy.integrate as integrate
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.stats import norm

from levyrep import (
    BrownianModel,
    DomainError,
    MertonModel,
    ParameterError,
    QuadratureGrid,
    conditional_value,
    conditional_value_batch,
    d2F_dx2,
    dF_dt,
    dF_dx,
    dF_dx_batch,
    density,
    density_batch,
    digital_payoff,
    grid_from_dict,
    jump_compensator,
    jump_difference,
    pide_residual,
)

T = 1.0


def _bs_digital(model, t, x, c):
    tau = T - t
    s = model.sigma * math.sqrt(tau)
    return norm.cdf((x + model.mu * tau - c) / s)


# ---------------------------------------------------------------------------
# Gaussian closed forms


def test_brownian_digital_value(brownian, grid):
    payoff = digital_payoff(-0.1, alpha=1.0)
    for t in (0.0, 0.5, 0.9):
        for x in (-0.5, 0.0, 0.4):
            num = conditional_value(brownian, payoff, grid, t, x, T)
            assert abs(num - _bs_digital(brownian, t, x, -0.1)) < 1e-10


def test_brownian_digital_derivatives(brownian, grid):
    payoff = digital_payoff(0.0, alpha=1.0)
    t, x = 0.3, 0.2
    tau = T - t
    s = brownian.sigma * math.sqrt(tau)
    d = (x + brownian.mu * tau) / s
    assert abs(dF_dx(brownian, payoff, grid, t, x, T) - norm.pdf(d) / s) < 1e-10
    d2_exact = -d * norm.pdf(d) / s**2
    assert abs(d2F_dx2(brownian, payoff, grid, t, x, T) - d2_exact) < 1e-9


def test_brownian_density_gaussian(brownian, grid):
    t = 0.25
    tau = T - t
    ys = np.linspace(-1.5, 1.5, 21)
    ref = norm.pdf(ys, loc=brownian.mu * tau, scale=brownian.sigma * math.sqrt(tau))
    num = density_batch(brownian, grid, t, T, ys)
    assert np.max(np.abs(num - ref)) < 1e-10


# ---------------------------------------------------------------------------
# derivative consistency (finite differences)


def test_dF_dt_matches_finite_difference(merton, grid):
    payoff = digital_payoff(0.0, alpha=1.0)
    t, x = 0.4, 0.15
    h = 1e-5
    fd = (
        conditional_value(merton, payoff, grid, t + h, x, T)
        - conditional_value(merton, payoff, grid, t - h, x, T)
    ) / (2 * h)
    an = dF_dt(merton, payoff, grid, t, x, T)
    assert abs(an - fd) < 1e-6 * max(1.0, abs(an))


def test_jump_difference_equals_value_difference(merton, grid):
    payoff = digital_payoff(0.0, alpha=1.0)
    t, x, y = 0.2, -0.1, 0.35
    direct = conditional_value(merton, payoff, grid, t, x + y, T) - conditional_value(
        merton, payoff, grid, t, x, T
    )
    single = jump_difference(merton, payoff, grid, t, x, y, T)
    assert abs(single - direct) < 1e-10


def test_jump_compensator_vs_brute_quadrature(merton, grid):
    payoff = digital_payoff(0.0, alpha=1.0)
    t, x = 0.3, 0.1

    def integrand(y):
        diff = conditional_value(merton, payoff, grid, t, x + y, T) - conditional_value(
            merton, payoff, grid, t, x, T
        )
        return diff * float(merton.levy_density(y))

    brute, _ = integrate.quad(integrand, -3.0, 3.0, limit=200)
    fast = jump_compensator(merton, payoff, grid, t, x, T)
    assert abs(fast - brute) < 1e-7


# ---------------------------------------------------------------------------
# the backward equation


@pytest.mark.parametrize("fixture", ["brownian", "merton"])
def test_pide_residual_vanishes(request, grid, fixture):
    model = request.getfixturevalue(fixture)
    payoff = digital_payoff(0.0, alpha=1.0)
    for t, x in ((0.1, 0.0), (0.5, -0.3), (0.8, 0.25)):
        res = pide_residual(model, payoff, grid, t, x, T)
        scale = max(1.0, abs(dF_dt(model, payoff, grid, t, x, T)))
        assert abs(res) < 1e-9 * scale


# ---------------------------------------------------------------------------
# densities


def test_density_normalizes(merton, nig, grid):
    for model in (merton, nig):
        ys = np.linspace(-8.0, 8.0, 4001)
        ps = density_batch(model, grid, 0.0, T, ys)
        assert np.all(ps > -1e-12)
        assert abs(np.trapezoid(ps, ys) - 1.0) < 1e-6


def test_density_scalar_matches_batch(merton, grid):
    ys = np.array([-0.4, 0.0, 0.6])
    batch = density_batch(merton, grid, 0.2, T, ys)
    for y, ref in zip(ys, batch):
        assert abs(density(merton, grid, 0.2, T, float(y)) - ref) < 1e-12


# ---------------------------------------------------------------------------
# near-maturity behaviour


def test_digital_value_continuous_across_fallback(nig, grid):
    # crossing into the very-short-horizon regime must not jump
    payoff = digital_payoff(0.05, alpha=1.0)
    vals = [
        conditional_value(nig, payoff, grid, T - tau, 0.0, T)
        for tau in (1e-3, 1e-4, 1e-5)
    ]
    assert all(0.0 <= v <= 1.0 for v in vals)
    assert abs(vals[1] - vals[2]) < 0.05


# ---------------------------------------------------------------------------
# configuration and domain errors


def test_grid_validation():
    with pytest.raises(ParameterError):
        QuadratureGrid(n_nodes=63)
    g = grid_from_dict({"alpha": 1.5, "n_nodes": 128, "v_max": "auto"})
    assert g.alpha == 1.5 and g.n_nodes == 128 and g.v_max is None


def test_damping_outside_moment_strip(vg):
    payoff = digital_payoff(0.0, alpha=6.0)
    with pytest.raises(DomainError):
        conditional_value(vg, payoff, QuadratureGrid(alpha=6.0), 0.0, 0.0, T)


def test_batch_matches_scalar(merton, grid):
    payoff = digital_payoff(0.0, alpha=1.0)
    xs = np.array([-0.5, 0.0, 0.5])
    batch = conditional_value_batch(merton, payoff, grid, 0.2, xs, T)
    for x, ref in zip(xs, batch):
        assert abs(conditional_value(merton, payoff, grid, 0.2, float(x), T) - ref) < 1e-11
    dbatch = dF_dx_batch(merton, payoff, grid, 0.2, xs, T)
    for x, ref in zip(xs, dbatch):
        assert abs(dF_dx(merton, payoff, grid, 0.2, float(x), T) - ref) < 1e-11


# ---------------------------------------------------------------------------
# property tests


@settings(max_examples=15, deadline=None)
@given(x=st.floats(min_value=-1.0, max_value=1.0),
       dx=st.floats(min_value=0.01, max_value=1.0))
def test_digital_value_in_unit_interval_and_monotone(x, dx):
    model = MertonModel(x0=0.0, mu=-0.1, sigma=0.2, gamma=1.0, m=-0.1, delta=0.3)
    grid = QuadratureGrid(alpha=1.0)
    payoff = digital_payoff(0.0, alpha=1.0)
    lo = conditional_value(model, payoff, grid, 0.3, x, T)
    hi = conditional_value(model, payoff, grid, 0.3, x + dx, T)
    assert -1e-9 <= lo <= 1.0 + 1e-9
    assert hi >= lo - 1e-9
