"""Non-uniform spatial meshes generated from monotone grading functions.

A grading function maps the uniform net ``x_n = n/N`` on [0, 1] onto the
physical interval [s_minus, s_plus].  The two finance meshes (quadratic and
Tavella-Randall) are special gradings; anything strictly increasing works.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Literal, Optional

import numpy as np

GradingKind = Literal["uniform", "quadratic", "tavella_randall", "custom"]

_PROBE_POINTS = 1000


class MeshError(ValueError):
    """Raised for invalid mesh parameters or non-monotone gradings."""


def asinh(x):
    """Inverse hyperbolic sine via ln(x + sqrt(x^2 + 1)), odd-symmetric.

    The logarithm form cancels badly for large negative ``x``; evaluating on
    |x| and restoring the sign avoids that.  The argument of the log is
    written as 1 + (|x| + x^2 / (1 + sqrt(1 + x^2))) so log1p keeps full
    precision near zero.
    """
    x = np.asarray(x, dtype=float)
    ax = np.abs(x)
    root = np.sqrt(ax * ax + 1.0)
    out = np.sign(x) * np.log1p(ax + ax * ax / (1.0 + root))
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class GradingFunction:
    """Increasing map of [0, 1] onto a price interval.

    ``deriv1``/``deriv2`` are optional; they are only needed for the
    mesh-step bound and the global truncation bound.
    """

    func: Callable[[np.ndarray], np.ndarray]
    deriv1: Optional[Callable[[np.ndarray], np.ndarray]] = None
    deriv2: Optional[Callable[[np.ndarray], np.ndarray]] = None
    kind: GradingKind = "custom"

    def __call__(self, x):
        return self.func(np.asarray(x, dtype=float))

    @property
    def s_minus(self) -> float:
        return float(self(0.0))

    @property
    def s_plus(self) -> float:
        return float(self(1.0))

    def check_increasing(self, n_probe: int = _PROBE_POINTS) -> None:
        values = self(np.linspace(0.0, 1.0, n_probe + 1))
        if not np.all(np.diff(values) > 0):
            raise MeshError(f"grading function ({self.kind}) is not strictly increasing")

    def max_deriv1(self, n_probe: int = _PROBE_POINTS) -> float:
        if self.deriv1 is None:
            raise MeshError("grading function has no first-derivative information")
        return float(np.max(self.deriv1(np.linspace(0.0, 1.0, n_probe))))

    def max_abs_deriv2(self, n_probe: int = _PROBE_POINTS) -> float:
        if self.deriv2 is None:
            raise MeshError("grading function has no second-derivative information")
        return float(np.max(np.abs(self.deriv2(np.linspace(0.0, 1.0, n_probe)))))


@dataclass(frozen=True)
class Mesh:
    """Strictly increasing node array s_0 < s_1 < ... < s_N."""

    nodes: np.ndarray
    kind: GradingKind = "custom"

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        if nodes.ndim != 1 or nodes.size < 3:
            raise MeshError("a mesh needs at least 3 nodes (N >= 2)")
        if not np.all(np.isfinite(nodes)):
            raise MeshError("mesh nodes must be finite")
        if not np.all(np.diff(nodes) > 0):
            raise MeshError("mesh nodes must be strictly increasing (some h_n <= 0)")
        nodes.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)

    @property
    def N(self) -> int:
        return self.nodes.size - 1

    @property
    def steps(self) -> np.ndarray:
        return np.diff(self.nodes)

    @property
    def s_minus(self) -> float:
        return float(self.nodes[0])

    @property
    def s_plus(self) -> float:
        return float(self.nodes[-1])

    def __len__(self) -> int:
        return self.nodes.size


@dataclass(frozen=True)
class TavellaRandallParams:
    """Parameters of the sinh-graded mesh concentrated at ``s_star``.

    Small ``lam`` gives strong clustering at ``s_star``; large ``lam`` gives a
    nearly uniform mesh.
    """

    lam: float
    s_star: float
    s_minus: float
    s_plus: float

    def __post_init__(self):
        if not self.lam > 0:
            raise MeshError(f"lambda must be positive, got {self.lam}")
        if not self.s_minus < self.s_star < self.s_plus:
            raise MeshError(
                f"s_star={self.s_star} must lie strictly inside ({self.s_minus}, {self.s_plus})"
            )

    @classmethod
    def for_strike(cls, lam: float, K: float, S: float) -> "TavellaRandallParams":
        """Mesh on [0, S] concentrated at the strike."""
        return cls(lam=lam, s_star=K, s_minus=0.0, s_plus=S)

    @property
    def c1(self) -> float:
        return asinh((self.s_minus - self.s_star) / self.lam)

    @property
    def c2(self) -> float:
        return asinh((self.s_plus - self.s_star) / self.lam)

    @property
    def c(self) -> float:
        return self.c2 - self.c1


def _check_interval(s_minus: float, s_plus: float, N: int) -> None:
    if not s_minus < s_plus:
        raise MeshError(f"degenerate domain: s_minus={s_minus} must be < s_plus={s_plus}")
    if int(N) != N or N < 2:
        raise MeshError(f"N must be an integer >= 2, got {N}")


def uniform_grading(s_minus: float, s_plus: float) -> GradingFunction:
    width = s_plus - s_minus
    return GradingFunction(
        func=lambda x: s_minus + width * x,
        deriv1=lambda x: np.full_like(np.asarray(x, dtype=float), width),
        deriv2=lambda x: np.zeros_like(np.asarray(x, dtype=float)),
        kind="uniform",
    )


def quadratic_grading(s_minus: float, s_plus: float) -> GradingFunction:
    width = s_plus - s_minus
    return GradingFunction(
        func=lambda x: s_minus + width * x * x,
        deriv1=lambda x: 2.0 * width * x,
        deriv2=lambda x: np.full_like(np.asarray(x, dtype=float), 2.0 * width),
        kind="quadratic",
    )


def tavella_randall_grading(params: TavellaRandallParams) -> GradingFunction:
    """phi(x) = s* + lam * sinh(c x + c1), with c = c2 - c1."""
    lam, s_star, c, c1 = params.lam, params.s_star, params.c, params.c1
    return GradingFunction(
        func=lambda x: s_star + lam * np.sinh(c * x + c1),
        deriv1=lambda x: lam * c * np.cosh(c * x + c1),
        deriv2=lambda x: lam * c * c * np.sinh(c * x + c1),
        kind="tavella_randall",
    )


def build_uniform(s_minus: float, s_plus: float, N: int) -> Mesh:
    _check_interval(s_minus, s_plus, N)
    n = np.arange(N + 1)
    nodes = s_minus + n * (s_plus - s_minus) / N
    nodes[-1] = s_plus
    return Mesh(nodes, kind="uniform")


def build_quadratic(s_minus: float, s_plus: float, N: int) -> Mesh:
    _check_interval(s_minus, s_plus, N)
    n = np.arange(N + 1)
    nodes = s_minus + (n / N) ** 2 * (s_plus - s_minus)
    nodes[-1] = s_plus
    return Mesh(nodes, kind="quadratic")


def build_tavella_randall(params: TavellaRandallParams, N: int) -> Mesh:
    _check_interval(params.s_minus, params.s_plus, N)
    x = np.arange(N + 1) / N
    nodes = params.s_star + params.lam * np.sinh(params.c1 * (1.0 - x) + params.c2 * x)
    # snap endpoints: sinh/asinh round trip drifts by an ulp or so
    nodes[0] = params.s_minus
    nodes[-1] = params.s_plus
    return Mesh(nodes, kind="tavella_randall")


def build_from_grading(phi: GradingFunction, N: int) -> Mesh:
    """Mesh s_n = phi(n/N)."""
    if int(N) != N or N < 2:
        raise MeshError(f"N must be an integer >= 2, got {N}")
    phi.check_increasing()
    nodes = np.asarray(phi(np.arange(N + 1) / N), dtype=float)
    if not np.all(np.diff(nodes) > 0):
        raise MeshError("non-monotone grading: some mesh step h_n <= 0")
    return Mesh(nodes, kind=phi.kind)


def max_step_bound(phi: GradingFunction, N: int) -> float:
    """Mean-value bound max_n h_n <= max(phi') / N."""
    return phi.max_deriv1() / N


def tr_min_step_estimate(params: TavellaRandallParams, N: int) -> float:
    """Approximate smallest Tavella-Randall step, lam * c / N.

    The slope of the grading at the concentration point is ``lam * c``.  Only
    meaningful when ``s_star`` sits away from both ends of the interval.
    """
    if int(N) != N or N < 2:
        raise MeshError(f"N must be an integer >= 2, got {N}")
    c = asinh((params.s_plus - params.s_star) / params.lam) + asinh(
        (params.s_star - params.s_minus) / params.lam
    )
    return params.lam * c / N

