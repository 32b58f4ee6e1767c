"""L1 discretization of the Caputo derivative of order 0 < alpha < 1.

On the uniform time grid t_k = k tau,

    D^alpha u(t_m) ~ 1 / (Gamma(2 - alpha) tau^alpha) * sum_{k=0}^{m} sigma_k u^{m-k}

where sigma_0 = 1, sigma_k = (k-1)^(1-alpha) - 2 k^(1-alpha) + (k+1)^(1-alpha)
for 1 <= k <= m-1, and sigma_m = (m-1)^(1-alpha) - m^(1-alpha).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


def gamma_fn(x: float) -> float:
    """Gamma function for positive arguments."""
    if not x > 0:
        raise ValueError(f"gamma_fn needs a positive argument, got {x}")
    return math.gamma(x)


def _check_alpha(alpha: float) -> None:
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"fractional order alpha must lie in (0, 1), got {alpha}")


def interior_weights(alpha: float, count: int) -> np.ndarray:
    """sigma_1 .. sigma_count in the interior (three-term) form."""
    _check_alpha(alpha)
    k = np.arange(1, count + 1, dtype=float)
    p = 1.0 - alpha
    return (k - 1.0) ** p - 2.0 * k**p + (k + 1.0) ** p


def last_weight(alpha: float, m: int) -> float:
    p = 1.0 - alpha
    return float((m - 1.0) ** p - float(m) ** p)


@dataclass(frozen=True)
class L1Weights:
    alpha: float
    tau: float
    sigma: np.ndarray

    @property
    def m(self) -> int:
        return self.sigma.size - 1

    @property
    def scale(self) -> float:
        """1 / (Gamma(2 - alpha) tau^alpha)."""
        return 1.0 / (gamma_fn(2.0 - self.alpha) * self.tau**self.alpha)


def l1_weights(alpha: float, tau: float, m: int) -> L1Weights:
    _check_alpha(alpha)
    if not tau > 0:
        raise ValueError(f"time step must be positive, got {tau}")
    if int(m) != m or m < 1:
        raise ValueError(f"step index m must be an integer >= 1, got {m}")
    sigma = np.empty(m + 1)
    sigma[0] = 1.0
    sigma[1:m] = interior_weights(alpha, m - 1)
    sigma[m] = last_weight(alpha, m)
    sigma.setflags(write=False)
    return L1Weights(alpha=alpha, tau=tau, sigma=sigma)


def l1_apply(weights: L1Weights, history) -> float | np.ndarray:
    """Apply the L1 formula to samples u^0 .. u^m (first axis is time)."""
    u = np.asarray(history, dtype=float)
    if u.shape[0] != weights.m + 1:
        raise ValueError(
            f"history has {u.shape[0]} samples, weights expect {weights.m + 1}"
        )
    # sigma_k multiplies u^{m-k}: reverse time so index k lines up
    return weights.scale * np.tensordot(weights.sigma, u[::-1], axes=(0, 0))
