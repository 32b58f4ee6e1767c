"""Compact implicit scheme for D^alpha U = A s^2 U_ss + B U + F.

Each interior row n combines the equation divided by s^2 at the three
stencil nodes with weights (d_n, 1, e_n) and replaces the compact
second-derivative combination by a_n U_{n-1} + b_n U_n + c_n U_{n+1}.
The Caputo derivative uses the L1 formula, so every time level solves one
tridiagonal system Q U^m = R^m whose matrix does not depend on m.

Boundary strategies for a mesh whose first node is s = 0 (the default is
``compact_limit`` when the problem knows the limit, else ``noncompact_edge``):

``noncompact_edge``
    rows 1 and N-1 use the plain three-point second difference at the centre
    node (d = e = 0), so nothing is evaluated at s = 0.
``compact_limit``
    full compact rows; F/s^2 at s = 0 comes from the problem's
    ``forcing_limit`` and the Dirichlet node contributes nothing else.
``compact``
    full compact rows everywhere; only valid when s_0 > 0.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Literal, Optional

import numpy as np

from tfbs_compact.caputo import gamma_fn, interior_weights, l1_weights, last_weight
from tfbs_compact.compact import CompactStencil, mesh_stencils
from tfbs_compact.mesh import Mesh
from tfbs_compact.problems import DiffusionProblem

log = logging.getLogger(__name__)

BoundaryStrategy = Literal["compact", "noncompact_edge", "compact_limit"]

PIVOT_TOL = 1e-14
RESIDUAL_TOL = 1e-10


class SingularSystemError(ArithmeticError):
    """Vanishing pivot in the tridiagonal elimination."""


class AssemblyError(ValueError):
    """Scheme cannot be assembled (degenerate node not handled)."""


@dataclass(frozen=True)
class SchemeRows:
    """Per-row weights of the scheme on the interior nodes n = 1 .. N-1.

    ``mass_*`` multiply the Caputo derivative at the three stencil nodes
    (d/s_{n-1}^2, 1/s_n^2, e/s_{n+1}^2), ``stiff_*`` the values
    (A a + B d/s_{n-1}^2, ...), and ``load_*`` the forcing F/s^2
    (d, 1, e).  Entries coupling to a Dirichlet node are zero.
    """

    mass_left: np.ndarray
    mass_mid: np.ndarray
    mass_right: np.ndarray
    stiff_left: np.ndarray
    stiff_mid: np.ndarray
    stiff_right: np.ndarray
    load_left: np.ndarray
    load_right: np.ndarray
    strategy: BoundaryStrategy


@dataclass(frozen=True)
class SchemeMatrix:
    """Tridiagonal (N-1)x(N-1) matrix; ``sub[0]`` and ``sup[-1]`` are unused."""

    sub: np.ndarray
    diag: np.ndarray
    sup: np.ndarray
    boundary_strategy: BoundaryStrategy = "compact"

    @property
    def size(self) -> int:
        return self.diag.size

    def matvec(self, x: np.ndarray) -> np.ndarray:
        y = self.diag * x
        y[1:] += self.sub[1:] * x[:-1]
        y[:-1] += self.sup[:-1] * x[1:]
        return y

    def abs_matvec(self, x: np.ndarray) -> np.ndarray:
        x = np.abs(x)
        y = np.abs(self.diag) * x
        y[1:] += np.abs(self.sub[1:]) * x[:-1]
        y[:-1] += np.abs(self.sup[:-1]) * x[1:]
        return y

    def to_dense(self) -> np.ndarray:
        n = self.size
        out = np.diag(self.diag)
        out[np.arange(1, n), np.arange(n - 1)] = self.sub[1:]
        out[np.arange(n - 1), np.arange(1, n)] = self.sup[:-1]
        return out


@dataclass(frozen=True)
class SolutionGrid:
    """U_n^m for n = 0..N, m = 0..M on the grid (s_n, m tau)."""

    values: np.ndarray
    mesh: Mesh
    tau: float
    boundary_strategy: BoundaryStrategy = "compact"

    @property
    def M(self) -> int:
        return self.values.shape[0] - 1

    @property
    def N(self) -> int:
        return self.mesh.N

    @property
    def times(self) -> np.ndarray:
        return self.tau * np.arange(self.M + 1)

    @property
    def final(self) -> np.ndarray:
        return self.values[-1]


def default_strategy(mesh: Mesh, problem: Optional[DiffusionProblem] = None) -> BoundaryStrategy:
    """Full compact rows unless s_0 = 0; there prefer the forcing limit if known."""
    if mesh.s_minus != 0.0:
        return "compact"
    if problem is not None and problem.forcing_limit is not None:
        return "compact_limit"
    return "noncompact_edge"


def build_rows(
    problem: DiffusionProblem,
    mesh: Mesh,
    stencils: Optional[CompactStencil] = None,
    strategy: Optional[BoundaryStrategy] = None,
) -> SchemeRows:
    if strategy is None:
        strategy = default_strategy(mesh, problem)
    if stencils is None:
        stencils = mesh_stencils(mesh)
    s = mesh.nodes
    if np.any(s < 0):
        raise AssemblyError("mesh nodes must be non-negative")
    degenerate = s[0] == 0.0
    if strategy == "compact" and degenerate:
        raise AssemblyError(
            "s_0 = 0 makes the compact rows singular; use 'noncompact_edge' or 'compact_limit'"
        )
    if strategy == "compact_limit" and problem.forcing_limit is None and degenerate:
        raise AssemblyError("'compact_limit' needs a problem with forcing_limit")

    A, B = problem.A, problem.B
    a = np.array(stencils.a, dtype=float)
    b = np.array(stencils.b, dtype=float)
    c = np.array(stencils.c, dtype=float)
    d = np.array(stencils.d, dtype=float)
    e = np.array(stencils.e, dtype=float)

    if strategy == "noncompact_edge":
        hl, hr = stencils.h_left, stencils.h_right
        for i in (0, -1):
            a[i] = 2.0 / (hl[i] * (hl[i] + hr[i]))
            b[i] = -2.0 / (hl[i] * hr[i])
            c[i] = 2.0 / (hr[i] * (hl[i] + hr[i]))
            d[i] = 0.0
            e[i] = 0.0

    sl, sm, sr = s[:-2], s[1:-1], s[2:]
    with np.errstate(divide="ignore", invalid="ignore"):
        mass_left = np.where(sl > 0, d / sl**2, 0.0)
    mass_mid = 1.0 / sm**2
    mass_right = e / sr**2
    # U_0 = U_N = 0: couplings to Dirichlet nodes never enter the system
    mass_left[0] = 0.0
    mass_right[-1] = 0.0
    stiff_left = A * a + B * mass_left
    stiff_mid = A * b + B * mass_mid
    stiff_right = A * c + B * mass_right
    stiff_left[0] = 0.0
    stiff_right[-1] = 0.0
    return SchemeRows(
        mass_left=mass_left,
        mass_mid=mass_mid,
        mass_right=mass_right,
        stiff_left=stiff_left,
        stiff_mid=stiff_mid,
        stiff_right=stiff_right,
        load_left=d,
        load_right=e,
        strategy=strategy,
    )


def time_weight(alpha: float, tau: float) -> float:
    """Gamma(2 - alpha) tau^alpha, the inverse of the L1 scale."""
    return gamma_fn(2.0 - alpha) * tau**alpha


def assemble_matrix(
    problem: DiffusionProblem,
    mesh: Mesh,
    stencils: Optional[CompactStencil] = None,
    weights_scale: Optional[float] = None,
    strategy: Optional[BoundaryStrategy] = None,
    rows: Optional[SchemeRows] = None,
) -> SchemeMatrix:
    """Matrix Q with q = mass - Gamma(2-alpha) tau^alpha * stiffness.

    ``weights_scale`` is the L1 scale 1/(Gamma(2-alpha) tau^alpha).
    """
    if rows is None:
        rows = build_rows(problem, mesh, stencils, strategy)
    if weights_scale is None:
        raise ValueError("weights_scale (1 / (Gamma(2-alpha) tau^alpha)) is required")
    g = 1.0 / weights_scale
    sub = rows.mass_left - g * rows.stiff_left
    diag = rows.mass_mid - g * rows.stiff_mid
    sup = rows.mass_right - g * rows.stiff_right
    for name, arr in (("sub", sub), ("diag", diag), ("sup", sup)):
        if not np.all(np.isfinite(arr)):
            raise AssemblyError(f"non-finite {name}-diagonal entry; degenerate node unresolved")
    return SchemeMatrix(sub=sub, diag=diag, sup=sup, boundary_strategy=rows.strategy)


def _load(problem: DiffusionProblem, mesh: Mesh, t: float, strategy: BoundaryStrategy) -> np.ndarray:
    """H = F/s^2 at every node (boundary entries only where they are used)."""
    s = mesh.nodes
    H = np.zeros_like(s)
    H[1:] = problem.forcing(s[1:], t) / s[1:] ** 2
    if s[0] > 0:
        H[0] = float(problem.forcing(s[:1], t)[0]) / s[0] ** 2
    elif strategy == "compact_limit":
        H[0] = problem.forcing_limit(t)
    return H


def history_sums(sigma: np.ndarray, past: np.ndarray) -> np.ndarray:
    """sum_{k=1}^{m} sigma_k U^{m-k} for every node; ``past`` holds U^0..U^{m-1}."""
    m = past.shape[0]
    return sigma[1 : m + 1] @ past[::-1]


def assemble_rhs(
    problem: DiffusionProblem,
    mesh: Mesh,
    stencils: Optional[CompactStencil],
    weights,
    history: np.ndarray,
    t_m: float,
    strategy: Optional[BoundaryStrategy] = None,
    rows: Optional[SchemeRows] = None,
) -> np.ndarray:
    """Right-hand side r^m for the interior rows.

    ``weights`` is the L1Weights for step m = len(history); ``history``
    holds the rows U^0 .. U^{m-1} (full width N+1).
    """
    if rows is None:
        rows = build_rows(problem, mesh, stencils, strategy)
    history = np.atleast_2d(np.asarray(history, dtype=float))
    if history.shape[0] != weights.m:
        raise ValueError(f"history has {history.shape[0]} rows, expected {weights.m}")
    g = 1.0 / weights.scale
    H = _load(problem, mesh, t_m, rows.strategy)
    hist = history_sums(weights.sigma, history)
    return _rhs(rows, g, H, hist)


def _rhs(rows: SchemeRows, g: float, H: np.ndarray, hist: np.ndarray) -> np.ndarray:
    load = rows.load_left * H[:-2] + H[1:-1] + rows.load_right * H[2:]
    # Dirichlet history is identically zero, and mass_left[0]/mass_right[-1] are zero
    memory = rows.mass_left * hist[:-2] + rows.mass_mid * hist[1:-1] + rows.mass_right * hist[2:]
    return g * load - memory


def thomas_solve(matrix: SchemeMatrix, rhs) -> np.ndarray:
    """Thomas elimination without pivoting; raises on a vanishing pivot."""
    sub, diag, sup = matrix.sub, matrix.diag, matrix.sup
    rhs = np.asarray(rhs, dtype=float)
    n = diag.size
    if rhs.shape != (n,):
        raise ValueError(f"rhs has shape {rhs.shape}, expected ({n},)")
    row_scale = np.abs(diag) + np.abs(sub) + np.abs(sup)
    cp = np.empty(n)
    dp = np.empty(n)
    pivot = diag[0]
    if abs(pivot) <= PIVOT_TOL * row_scale[0]:
        raise SingularSystemError("vanishing pivot in row 0")
    cp[0] = sup[0] / pivot
    dp[0] = rhs[0] / pivot
    for i in range(1, n):
        pivot = diag[i] - sub[i] * cp[i - 1]
        if abs(pivot) <= PIVOT_TOL * row_scale[i]:
            raise SingularSystemError(f"vanishing pivot in row {i}")
        cp[i] = sup[i] / pivot
        dp[i] = (rhs[i] - sub[i] * dp[i - 1]) / pivot
    x = np.empty(n)
    x[-1] = dp[-1]
    for i in range(n - 2, -1, -1):
        x[i] = dp[i] - cp[i] * x[i + 1]
    return x


def time_march(
    problem: DiffusionProblem,
    mesh: Mesh,
    M: int,
    strategy: Optional[BoundaryStrategy] = None,
    check_residual: bool = True,
) -> SolutionGrid:
    """March the scheme over m = 1..M with tau = T/M."""
    if int(M) != M or M < 1:
        raise ValueError(f"M must be a positive integer, got {M}")
    if mesh.s_minus < problem.s_minus - 1e-12 or mesh.s_plus > problem.s_plus + 1e-12:
        raise AssemblyError("mesh extends outside the problem domain")
    tau = problem.T / M
    alpha = problem.alpha
    rows = build_rows(problem, mesh, strategy=strategy)
    weights_M = l1_weights(alpha, tau, M)
    Q = assemble_matrix(problem, mesh, weights_scale=weights_M.scale, rows=rows)
    g = 1.0 / weights_M.scale

    N = mesh.N
    U = np.zeros((M + 1, N + 1))
    U[0] = problem.initial(mesh.nodes)
    U[0, 0] = U[0, -1] = 0.0

    # sigma_1..sigma_{m-1} are shared by every step; only the last weight changes
    sigma = np.empty(M + 1)
    sigma[0] = 1.0
    sigma[1:M] = interior_weights(alpha, M - 1)
    for m in range(1, M + 1):
        sig_m = sigma[: m + 1].copy()
        sig_m[m] = last_weight(alpha, m)
        t_m = m * tau
        H = _load(problem, mesh, t_m, rows.strategy)
        hist = history_sums(sig_m, U[:m])
        R = _rhs(rows, g, H, hist)
        x = thomas_solve(Q, R)
        if check_residual:
            res = np.max(np.abs(Q.matvec(x) - R))
            # backward-error scale; |R| alone is too strict when |Q||x| >> |R|
            scale = np.max(np.abs(Q.abs_matvec(x))) + np.max(np.abs(R))
            limit = RESIDUAL_TOL * scale if scale > 0 else 1e-12
            if res > limit:
                raise SingularSystemError(
                    f"step {m}: residual {res:.3e} exceeds {limit:.3e}"
                )
        U[m, 1:-1] = x
    log.debug("marched N=%d M=%d strategy=%s", N, M, rows.strategy)
    return SolutionGrid(values=U, mesh=mesh, tau=tau, boundary_strategy=rows.strategy)
