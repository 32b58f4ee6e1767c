import math

import numpy as np
import pytest
from scipy import integrate, special

from tfbs_compact.caputo import gamma_fn, l1_apply, l1_weights


def gamma_oracle(x):
    # split at t = 1: the t^(x-1) singularity and the exponential tail
    # are handled by separate quadratures
    head, _ = integrate.quad(lambda t: math.exp(-t), 0, 1, weight="alg", wvar=(x - 1, 0))
    tail, _ = integrate.quad(lambda t: t ** (x - 1) * math.exp(-t), 1, np.inf, epsabs=0, epsrel=1e-12)
    return head + tail


@pytest.mark.parametrize("x", [0.3, 0.5, 1.0, 1.25, 1.5, 2.0, 2.25, 3.4])
def test_gamma_against_oracles(x):
    assert math.isclose(gamma_fn(x), special.gamma(x), rel_tol=1e-12)
    assert math.isclose(gamma_fn(x), gamma_oracle(x), rel_tol=1e-9)


def test_gamma_pinned_values():
    assert gamma_fn(1.0) == 1.0 and gamma_fn(2.0) == 1.0
    assert math.isclose(gamma_fn(0.5), 1.7724538509, rel_tol=1e-10)
    assert math.isclose(gamma_fn(0.5), math.sqrt(math.pi), rel_tol=1e-14)
    assert math.isclose(gamma_fn(1.25), 0.9064024771, rel_tol=1e-10)


@pytest.mark.parametrize("x", [0.0, -0.5])
def test_gamma_rejects_non_positive(x):
    with pytest.raises(ValueError):
        gamma_fn(x)


def test_sigma1_half():
    w = l1_weights(0.5, 0.1, 5)
    assert math.isclose(w.sigma[1], math.sqrt(2) - 2, rel_tol=1e-14)
    assert math.isclose(w.sigma[1], -0.5857864376, rel_tol=1e-9)


@pytest.mark.parametrize("alpha", [0.1, 0.5, 0.75, 0.99])
def test_single_step_weights(alpha):
    np.testing.assert_array_equal(l1_weights(alpha, 0.3, 1).sigma, [1.0, -1.0])


def test_telescoping_example():
    assert abs(l1_weights(0.75, 0.25, 4).sigma.sum()) <= 1e-14


def test_weight_properties_random():
    rng = np.random.default_rng(7)
    for _ in range(200):
        alpha = rng.uniform(0.01, 0.99)
        m = int(rng.integers(1, 2000))
        s = l1_weights(alpha, 1.0 / m, m).sigma
        assert s[0] == 1.0
        assert abs(s.sum()) <= 1e-12
        assert np.all(s[1:] < 0)
        assert np.all(np.diff(s[1:m]) > 0)


@pytest.mark.parametrize("alpha,tau,m", [(0.0, 0.1, 3), (1.0, 0.1, 3), (0.5, 0.0, 3), (0.5, 0.1, 0), (0.5, 0.1, 2.5)])
def test_weight_errors(alpha, tau, m):
    with pytest.raises(ValueError):
        l1_weights(alpha, tau, m)


def test_scale():
    w = l1_weights(0.75, 0.01, 10)
    assert math.isclose(w.scale, 1 / (special.gamma(1.25) * 0.01**0.75), rel_tol=1e-13)


def test_apply_constant():
    w = l1_weights(0.6, 0.05, 20)
    assert abs(l1_apply(w, np.full(21, 3.5))) <= 1e-12 * 3.5 * w.scale


@pytest.mark.parametrize("alpha", [0.25, 0.5, 0.75, 0.9])
@pytest.mark.parametrize("m", [1, 10, 1000, 10000])
def test_apply_linear_exact(alpha, m):
    tau = 0.7 / m
    t = tau * np.arange(m + 1)
    got = l1_apply(l1_weights(alpha, tau, m), 2.0 + 3.0 * t)
    want = 3.0 * t[-1] ** (1 - alpha) / special.gamma(2 - alpha)
    assert math.isclose(got, want, rel_tol=1e-10)


def test_apply_vector_history():
    m = 8
    w = l1_weights(0.4, 0.125, m)
    t = 0.125 * np.arange(m + 1)
    hist = np.stack([t, 2 * t, np.ones_like(t)], axis=1)
    got = l1_apply(w, hist)
    assert got.shape == (3,)
    assert math.isclose(got[1], 2 * got[0]) and abs(got[2]) < 1e-12


def test_apply_length_mismatch():
    with pytest.raises(ValueError):
        l1_apply(l1_weights(0.5, 0.1, 4), np.zeros(4))


def caputo_error(alpha, M, u, du):
    tau = 1.0 / M
    t = tau * np.arange(M + 1)
    return abs(l1_apply(l1_weights(alpha, tau, M), u(t)) - du(1.0))


@pytest.mark.parametrize("alpha", [0.25, 0.5, 0.75, 0.9])
def test_order_on_t_squared(alpha):
    du = lambda t: 2 * t ** (2 - alpha) / special.gamma(3 - alpha)  # noqa: E731
    errs = [caputo_error(alpha, M, lambda t: t * t, du) for M in (100, 200, 400, 800)]
    orders = [math.log2(a / b) for a, b in zip(errs, errs[1:])]
    assert all(abs(p - (2 - alpha)) <= 0.1 for p in orders), orders


def test_manufactured_time_factor():
    alpha = 0.75
    exact = 2 / special.gamma(1.25) + 6 / special.gamma(2.25)
    assert math.isclose(exact, 7.5022, abs_tol=1e-4)
    u = lambda t: 1 + 2 * t + 3 * t * t  # noqa: E731
    errs = [caputo_error(alpha, M, u, lambda t: exact) for M in (100, 200, 400, 800)]
    assert errs[-1] < 1e-3
    orders = [math.log2(a / b) for a, b in zip(errs, errs[1:])]
    assert all(abs(p - 1.25) <= 0.1 for p in orders), orders
