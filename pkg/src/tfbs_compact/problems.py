"""Problem definitions: the put-pricing problem and its diffusion form.

The pricing equation

    D^alpha V + sigma^2/2 s^2 V_ss + (r - d) s V_s - r V = 0,  V(s, T) = max(K - s, 0)

with V(0, t) = K, V(S, t) = 0 is turned into a forward problem with
homogeneous Dirichlet data by flipping time, subtracting the linear
boundary interpolant (W = V + K/S (s - S)) and removing the convection term
with U = s^q W, q = (r - d) / sigma^2.  The result is

    D^alpha U = A s^2 U_ss + B U + F(s, t),  U(0, t) = U(S, t) = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from tfbs_compact.caputo import gamma_fn

Forcing = Callable[[np.ndarray, float], np.ndarray]


@dataclass(frozen=True)
class MarketParams:
    sigma: float
    r: float
    d: float
    K: float
    S: float
    T: float
    alpha: float

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")
        if not 0 < self.K < self.S:
            raise ValueError(f"need 0 < K < S, got K={self.K}, S={self.S}")
        if not self.T > 0:
            raise ValueError(f"T must be positive, got {self.T}")
        if not 0 < self.alpha < 1:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha}")

    @property
    def q(self) -> float:
        return (self.r - self.d) / self.sigma**2


@dataclass(frozen=True)
class DiffusionProblem:
    """D^alpha U = A s^2 U_ss + B U + F(s, t) with zero Dirichlet data.

    ``forcing_limit`` optionally gives lim F(s, t) / s^2 as s -> s_minus,
    for domains starting at s = 0.  ``q`` is the convection-elimination
    exponent when the problem came from a pricing problem.
    """

    A: float
    B: float
    forcing: Forcing
    initial: Callable[[np.ndarray], np.ndarray]
    s_minus: float
    s_plus: float
    T: float
    alpha: float
    forcing_limit: Optional[Callable[[float], float]] = None
    q: Optional[float] = None

    def __post_init__(self):
        if not 0 < self.alpha < 1:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha}")
        if not self.s_minus < self.s_plus:
            raise ValueError("degenerate spatial domain")
        if not self.T > 0:
            raise ValueError(f"T must be positive, got {self.T}")
        ends = np.asarray(self.initial(np.array([self.s_minus, self.s_plus])), dtype=float)
        if np.any(np.abs(ends) > 1e-10):
            raise ValueError(
                f"initial profile must vanish at both ends, got {ends.tolist()}"
            )


@dataclass(frozen=True)
class ManufacturedCase:
    """Problem with known exact solution U(s, t)."""

    problem: DiffusionProblem
    exact: Callable[[np.ndarray, float], np.ndarray]
    caputo_exact: Callable[[np.ndarray, float], np.ndarray]

    @property
    def A(self) -> float:
        return self.problem.A

    @property
    def B(self) -> float:
        return self.problem.B

    @property
    def alpha(self) -> float:
        return self.problem.alpha

    @property
    def T(self) -> float:
        return self.problem.T


def spow(s, q: float) -> np.ndarray:
    """s**q for s >= 0, continuous extension s**q = 0 at s = 0 when q > 0."""
    s = np.asarray(s, dtype=float)
    if q > 0:
        out = np.zeros_like(s)
        pos = s > 0
        out[pos] = s[pos] ** q
        return out
    with np.errstate(divide="ignore"):
        return s**q


def payoff(s, K: float):
    """European put payoff max(K - s, 0)."""
    return np.maximum(K - np.asarray(s, dtype=float), 0.0)


def shifted_payoff(s, K: float, S: float) -> np.ndarray:
    """W*(s) = max(K - s, 0) + K/S (s - S); zero at s = 0 and s = S."""
    s = np.asarray(s, dtype=float)
    return payoff(s, K) + K / S * (s - S)


def to_diffusion(mp: MarketParams) -> DiffusionProblem:
    q = mp.q
    A = mp.sigma**2 / 2
    B = -0.5 * (mp.r + mp.d + q * q * mp.sigma**2)
    K, S, r, d = mp.K, mp.S, mp.r, mp.d

    # substituting V = W - K/S (s - S) into the forward equation leaves the
    # source + d K s / S - r K (it vanishes for V = K - s only with this sign)
    def forcing(s, t):
        s = np.asarray(s, dtype=float)
        return spow(s, q) * (d * K / S * s - r * K)

    def initial(s):
        s = np.asarray(s, dtype=float)
        w = shifted_payoff(s, K, S)
        out = np.zeros_like(w)
        # W*(0) = 0, so the Dirichlet node carries U = 0 for any q
        pos = s > 0
        out[pos] = s[pos] ** q * w[pos]
        return out

    # lim F / s^2 at s = 0 exists only for q >= 2
    forcing_limit = None
    if q > 2:
        forcing_limit = lambda t: 0.0  # noqa: E731
    elif q == 2:
        forcing_limit = lambda t: -r * K  # noqa: E731

    return DiffusionProblem(
        A=A,
        B=B,
        forcing=forcing,
        initial=initial,
        s_minus=0.0,
        s_plus=S,
        T=mp.T,
        alpha=mp.alpha,
        forcing_limit=forcing_limit,
        q=q,
    )


def manufactured_case(A: float, B: float, alpha: float, T: float = 1.0) -> ManufacturedCase:
    """Case with exact solution U = (1 + 2t + 3t^2) sin(pi s) on [0, 1]."""
    if not 0 < alpha < 1:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    g2 = gamma_fn(2.0 - alpha)
    g3 = gamma_fn(3.0 - alpha)
    pi = math.pi

    def time_factor(t):
        return 1.0 + 2.0 * t + 3.0 * t * t

    def time_factor_caputo(t):
        # Caputo derivative of 1 + 2t + 3t^2
        return 2.0 * t ** (1.0 - alpha) / g2 + 6.0 * t ** (2.0 - alpha) / g3

    def exact(s, t):
        return time_factor(t) * np.sin(pi * np.asarray(s, dtype=float))

    def caputo_exact(s, t):
        return time_factor_caputo(t) * np.sin(pi * np.asarray(s, dtype=float))

    def forcing(s, t):
        s = np.asarray(s, dtype=float)
        sin = np.sin(pi * s)
        return time_factor_caputo(t) * sin + (A * pi * pi * s * s - B) * sin * time_factor(t)

    problem = DiffusionProblem(
        A=A,
        B=B,
        forcing=forcing,
        initial=lambda s: np.sin(pi * np.asarray(s, dtype=float)),
        s_minus=0.0,
        s_plus=1.0,
        T=T,
        alpha=alpha,
    )
    return ManufacturedCase(problem=problem, exact=exact, caputo_exact=caputo_exact)


def recover_option_prices(solution, mp: MarketParams, q: Optional[float] = None) -> np.ndarray:
    """Invert U = s^q (V + K/S (s - S)) on every time level.

    ``solution`` is a ``SolutionGrid`` (or a ``(U, nodes)`` pair) with row m
    at diffusion time t_m, i.e. market time T - t_m.  Boundary columns are
    taken from the Dirichlet data V(0, .) = K and V(S, .) = 0; s^-q is never
    evaluated at s = 0.
    """
    if hasattr(solution, "values"):
        U, nodes = solution.values, solution.mesh.nodes
    else:
        U, nodes = solution
    if q is None:
        q = mp.q
    U = np.atleast_2d(np.asarray(U, dtype=float))
    s = np.asarray(nodes, dtype=float)
    if U.shape[-1] != s.size:
        raise ValueError("solution width does not match the mesh")
    if abs(s[0]) > 1e-12 * mp.S or abs(s[-1] - mp.S) > 1e-12 * mp.S:
        raise ValueError("pricing mesh must span [0, S]")
    V = np.empty_like(U)
    inner = s[1:-1]
    V[:, 1:-1] = U[:, 1:-1] * inner ** (-q) - mp.K / mp.S * (inner - mp.S)
    V[:, 0] = mp.K
    V[:, -1] = 0.0
    return V
