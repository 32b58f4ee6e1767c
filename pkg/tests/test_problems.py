import math

import numpy as np
import pytest
import sympy as sp
from scipy import special

from tfbs_compact.problems import (
    DiffusionProblem,
    MarketParams,
    manufactured_case,
    payoff,
    recover_option_prices,
    shifted_payoff,
    spow,
    to_diffusion,
)

PRICING = dict(sigma=0.1, r=0.08, d=0.025, K=50.0, S=100.0, T=1.0, alpha=0.75)


def test_pricing_coefficients():
    mp = MarketParams(**PRICING)
    prob = to_diffusion(mp)
    assert math.isclose(mp.q, 5.5, rel_tol=1e-14)
    assert prob.q == mp.q
    assert math.isclose(prob.A, 0.005, rel_tol=1e-14)
    assert math.isclose(prob.B, -0.20375, rel_tol=1e-14)
    assert (prob.s_minus, prob.s_plus, prob.T) == (0.0, 100.0, 1.0)


def test_shifted_payoff_vanishes_at_ends():
    assert shifted_payoff(0.0, 50, 100) == 0.0
    assert shifted_payoff(100.0, 50, 100) == 0.0
    prob = to_diffusion(MarketParams(**PRICING))
    np.testing.assert_array_equal(prob.initial(np.array([0.0, 100.0])), [0.0, 0.0])


def test_zero_q_is_identity():
    mp = MarketParams(**{**PRICING, "d": PRICING["r"]})
    assert mp.q == 0
    prob = to_diffusion(mp)
    s = np.linspace(0.5, 99.5, 37)
    np.testing.assert_allclose(prob.initial(s), shifted_payoff(s, mp.K, mp.S), rtol=1e-15)


@pytest.mark.parametrize("s,K,want", [(0, 50, 50), (50, 50, 0), (100, 50, 0), (20, 50, 30)])
def test_payoff(s, K, want):
    assert payoff(s, K) == want


@pytest.mark.parametrize(
    "kw",
    [
        {"sigma": 0.0},
        {"K": 0.0},
        {"K": 100.0},
        {"K": 150.0},
        {"T": 0.0},
        {"alpha": 1.0},
        {"alpha": 1.5},
    ],
)
def test_market_params_validation(kw):
    with pytest.raises(ValueError):
        MarketParams(**{**PRICING, **kw})


def test_spow():
    s = np.array([0.0, 1.0, 4.0])
    np.testing.assert_array_equal(spow(s, 0.5), [0.0, 1.0, 2.0])
    np.testing.assert_array_equal(spow(s[1:], -1.0), [1.0, 0.25])


def test_transform_matches_pricing_operator():
    # symbolic oracle: for a time-independent V the transformed operator
    # applied to U = s^q (V + K/S (s - S)) must equal s^q times the pricing
    # operator applied to V (both Caputo derivatives vanish)
    s = sp.symbols("s", positive=True)
    sig, r, d, K, S = (sp.Rational(1, 10), sp.Rational(2, 25), sp.Rational(1, 40), 50, 100)
    q = (r - d) / sig**2
    V = s**3 / 1000 - 2 * s + sp.exp(-s / 30)
    U = s**q * (V + sp.Rational(K, S) * (s - S))
    A = sig**2 / 2
    B = -(r + d + q**2 * sig**2) / 2
    F = s**q * (d * K * s / S - r * K)
    lhs = A * s**2 * sp.diff(U, s, 2) + B * U + F
    rhs = s**q * (sig**2 / 2 * s**2 * sp.diff(V, s, 2) + (r - d) * s * sp.diff(V, s) - r * V)
    assert sp.simplify(lhs - rhs) == 0

    prob = to_diffusion(MarketParams(float(sig), float(r), float(d), K, S, 1.0, 0.75))
    pts = np.array([0.5, 10.0, 49.0, 77.7])
    want = np.array([float(F.subs(s, v)) for v in pts])
    np.testing.assert_allclose(prob.forcing(pts, 0.3), want, rtol=1e-12)


def test_forcing_limit():
    prob = to_diffusion(MarketParams(**PRICING))
    assert prob.forcing_limit(0.5) == 0.0
    mp2 = MarketParams(sigma=0.5, r=0.5, d=0.0, K=50, S=100, T=1, alpha=0.5)
    assert mp2.q == 2.0
    assert to_diffusion(mp2).forcing_limit(0.0) == -0.5 * 50
    mp_low = MarketParams(sigma=0.3, r=0.05, d=0.0, K=50, S=100, T=1, alpha=0.5)
    assert to_diffusion(mp_low).forcing_limit is None


def test_diffusion_problem_rejects_incompatible_initial():
    with pytest.raises(ValueError):
        DiffusionProblem(1.0, 0.0, lambda s, t: 0 * s, lambda s: 1 + 0 * s, 0.0, 1.0, 1.0, 0.5)


def test_manufactured_forcing_at_t0():
    case = manufactured_case(1.3, -0.7, 0.4)
    s = np.linspace(0, 1, 11)
    np.testing.assert_allclose(
        case.problem.forcing(s, 0.0), (1.3 * np.pi**2 * s**2 + 0.7) * np.sin(np.pi * s), atol=1e-15
    )


def test_manufactured_forcing_value():
    case = manufactured_case(1.0, 2.0, 0.75)
    f = case.problem.forcing(np.array([0.5]), 1.0)[0]
    oracle = 2 / special.gamma(1.25) + 6 / special.gamma(2.25) + 6 * (np.pi**2 / 4 - 2)
    assert math.isclose(f, oracle, rel_tol=1e-13)
    # the quoted 10.30660 adds two terms that were each rounded to 5 decimals
    assert math.isclose(f, 10.30660, abs_tol=1e-5)


@pytest.mark.parametrize("alpha", [0.25, 0.75, 0.9])
def test_manufactured_pde_residual(alpha):
    A, B = 1.0, 2.0
    case = manufactured_case(A, B, alpha)
    rng = np.random.default_rng(11)
    s = rng.uniform(0, 1, 100)
    t = rng.uniform(0, 1, 100)
    pi = np.pi
    for si, ti in zip(s, t):
        u_ss = -pi * pi * case.exact(si, ti)
        res = case.caputo_exact(si, ti) - A * si * si * u_ss - B * case.exact(si, ti) - case.problem.forcing(si, ti)
        assert abs(res) <= 1e-10


def test_manufactured_boundaries():
    case = manufactured_case(1.0, 2.0, 0.5)
    for t in (0.0, 0.3, 1.0):
        assert case.exact(0.0, t) == 0.0
        assert abs(case.exact(1.0, t)) < 1e-15 * 6
    assert case.T == 1.0 and case.A == 1.0 and case.B == 2.0 and case.alpha == 0.5


def test_manufactured_caputo_matches_quadrature():
    from scipy import integrate

    alpha, t = 0.75, 0.8
    case = manufactured_case(1.0, 2.0, alpha)
    # D^alpha g(t) = 1/Gamma(1-alpha) int_0^t g'(x) (t - x)^-alpha dx, g' = 2 + 6x
    val, _ = integrate.quad(lambda x: 2 + 6 * x, 0, t, weight="alg", wvar=(0, -alpha))
    val /= special.gamma(1 - alpha)
    assert math.isclose(case.caputo_exact(0.5, t), val, rel_tol=1e-10)


@pytest.mark.parametrize("alpha", [0.0, 1.0])
def test_manufactured_alpha_range(alpha):
    with pytest.raises(ValueError):
        manufactured_case(1.0, 2.0, alpha)


def test_recover_zero_row():
    mp = MarketParams(**PRICING)
    s = np.linspace(0, 100, 11)
    V = recover_option_prices((np.zeros((1, 11)), s), mp)
    assert V[0, -1] == 0.0 and V[0, 0] == mp.K
    np.testing.assert_allclose(V[0, 1:-1], -mp.K / mp.S * (s[1:-1] - mp.S))


@pytest.mark.parametrize("d", [0.025, 0.08, 0.12])
def test_recover_round_trip(d):
    mp = MarketParams(**{**PRICING, "d": d})
    prob = to_diffusion(mp)
    s = np.linspace(0, 100, 51)
    V = recover_option_prices((prob.initial(s)[None, :], s), mp)
    np.testing.assert_allclose(V[0, 1:-1], payoff(s[1:-1], mp.K), rtol=1e-10, atol=1e-10 * mp.K)


def test_recover_requires_full_domain():
    mp = MarketParams(**PRICING)
    with pytest.raises(ValueError):
        recover_option_prices((np.zeros((1, 5)), np.linspace(1, 100, 5)), mp)
    with pytest.raises(ValueError):
        recover_option_prices((np.zeros((1, 4)), np.linspace(0, 100, 5)), mp)
