"""Error norms and one-axis convergence studies on the manufactured case.

Space study: M is held fixed and N doubles.  At fixed M the error against
the exact solution is dominated by the (N-independent) L1 time error, so
the spatial error is measured against a reference solution computed with
the same M on a nested mesh ``ref_factor`` times finer.

Time study: N is held fixed and M doubles; errors are taken against the
exact solution at the final time.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Literal, Optional, Sequence

import numpy as np

from tfbs_compact.mesh import (
    Mesh,
    TavellaRandallParams,
    build_quadratic,
    build_tavella_randall,
    build_uniform,
)
from tfbs_compact.problems import ManufacturedCase
from tfbs_compact.solver import BoundaryStrategy, SolutionGrid, time_march

Axis = Literal["space", "time"]
Reference = Literal["exact", "fine"]

GRID_ALIASES = {
    "uniform": "uniform",
    "quadratic": "quadratic",
    "tr": "tavella_randall",
    "tavella_randall": "tavella_randall",
}

DEFAULT_N_LEVELS = (50, 100, 200, 400, 800)
DEFAULT_M_LEVELS = (50, 100, 200, 400, 800, 1600)


def make_mesh(
    grid: str,
    N: int,
    s_minus: float = 0.0,
    s_plus: float = 1.0,
    lam: float = 6.0,
    s_star: Optional[float] = None,
) -> Mesh:
    """Mesh of the given kind; TR concentrates at ``s_star`` (default midpoint)."""
    kind = GRID_ALIASES.get(grid)
    if kind is None:
        raise ValueError(f"unknown grid kind {grid!r}; expected one of {sorted(GRID_ALIASES)}")
    if kind == "uniform":
        return build_uniform(s_minus, s_plus, N)
    if kind == "quadratic":
        return build_quadratic(s_minus, s_plus, N)
    if s_star is None:
        s_star = 0.5 * (s_minus + s_plus)
    return build_tavella_randall(TavellaRandallParams(lam, s_star, s_minus, s_plus), N)


def max_norm_error(solution: SolutionGrid, exact: Callable) -> float:
    """max_n |U_n^M - exact(s_n, t_M)|."""
    t_final = solution.tau * solution.M
    return float(np.max(np.abs(solution.final - exact(solution.mesh.nodes, t_final))))


def observed_order(e_coarse: float, e_fine: float, ratio: float = 2.0) -> float:
    """log_ratio(e_coarse / e_fine); NaN when either error is not positive."""
    if not (e_coarse > 0 and e_fine > 0):
        return math.nan
    return math.log(e_coarse / e_fine) / math.log(ratio)


@dataclass(frozen=True)
class Level:
    N: int
    M: int
    error: float
    order: float = math.nan


@dataclass
class ConvergenceReport:
    axis: Axis
    grid: str
    alpha: float
    levels: list[Level] = field(default_factory=list)
    norm: str = "max"
    reference: Reference = "exact"
    strategy: str = ""

    @property
    def orders(self) -> list[float]:
        return [lv.order for lv in self.levels[1:]]

    @property
    def errors(self) -> list[float]:
        return [lv.error for lv in self.levels]

    def order_at(self, value: int) -> float:
        """Observed order at the level whose varied parameter equals ``value``."""
        for lv in self.levels:
            if (lv.N if self.axis == "space" else lv.M) == value:
                return lv.order
        raise KeyError(value)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["axis", "grid", "alpha", "N", "M", "error", "order"])
        for lv in self.levels:
            writer.writerow(
                [
                    self.axis,
                    self.grid,
                    f"{self.alpha:.17g}",
                    lv.N,
                    lv.M,
                    f"{lv.error:.17g}",
                    "" if math.isnan(lv.order) else f"{lv.order:.17g}",
                ]
            )
        return buf.getvalue()

    def format_table(self) -> str:
        if self.axis == "space":
            fixed = self.levels[0].M if self.levels else 0
            head, label = f"N(M={fixed})", "h-Order"
        else:
            fixed = self.levels[0].N if self.levels else 0
            head, label = f"M(N={fixed})", "tau-Order"
        lines = [
            f"{self.axis} order, grid={self.grid}, alpha={self.alpha:g}, "
            f"norm={self.norm}, reference={self.reference}, boundary={self.strategy}",
            f"{head:>10}  {'error':>14}  {label:>9}",
        ]
        for lv in self.levels:
            varied = lv.N if self.axis == "space" else lv.M
            order = "" if math.isnan(lv.order) else f"{lv.order:.5f}"
            lines.append(f"{varied:>10}  {lv.error:>14.6e}  {order:>9}")
        return "\n".join(lines)


def _with_orders(levels: Sequence[tuple[int, int, float]], axis: Axis) -> list[Level]:
    out: list[Level] = []
    for i, (N, M, err) in enumerate(levels):
        if i == 0:
            out.append(Level(N, M, err))
            continue
        pN, pM, perr = levels[i - 1]
        ratio = N / pN if axis == "space" else M / pM
        out.append(Level(N, M, err, observed_order(perr, err, ratio)))
    return out


def _check_levels(values: Iterable[int]) -> list[int]:
    vals = [int(v) for v in values]
    if len(vals) < 2:
        raise ValueError("a study needs at least two levels")
    if any(b <= a for a, b in zip(vals, vals[1:])):
        raise ValueError(f"levels must be strictly increasing, got {vals}")
    return vals


def space_order_study(
    case: ManufacturedCase,
    grid: str,
    M_fixed: int = 50,
    N_levels: Iterable[int] = DEFAULT_N_LEVELS,
    lam: float = 6.0,
    s_star: Optional[float] = None,
    reference: Reference = "fine",
    ref_factor: int = 8,
    strategy: Optional[BoundaryStrategy] = None,
) -> ConvergenceReport:
    """Vary N at fixed M.

    With ``reference="fine"`` the error of level N is measured against the
    solution on the mesh with ``ref_factor * max(N_levels)`` intervals (same
    grading, same M), restricted to the coarse nodes.
    """
    Ns = _check_levels(N_levels)
    problem = case.problem

    def mesh_for(N: int) -> Mesh:
        return make_mesh(grid, N, problem.s_minus, problem.s_plus, lam, s_star)

    ref_vals = None
    ref_N = ref_factor * Ns[-1]
    if reference == "fine":
        if any(ref_N % N for N in Ns):
            raise ValueError("reference mesh must be nested: ref_factor * max(N) divisible by every N")
        ref_vals = time_march(problem, mesh_for(ref_N), M_fixed, strategy=strategy).final

    raw = []
    used = ""
    for N in Ns:
        sol = time_march(problem, mesh_for(N), M_fixed, strategy=strategy)
        used = sol.boundary_strategy
        if ref_vals is None:
            err = max_norm_error(sol, case.exact)
        else:
            err = float(np.max(np.abs(sol.final - ref_vals[:: ref_N // N])))
        raw.append((N, M_fixed, err))
    return ConvergenceReport(
        axis="space",
        grid=GRID_ALIASES[grid],
        alpha=problem.alpha,
        levels=_with_orders(raw, "space"),
        reference=reference,
        strategy=used,
    )


def time_order_study(
    case: ManufacturedCase,
    grid: str,
    N_fixed: int = 50,
    M_levels: Iterable[int] = DEFAULT_M_LEVELS,
    lam: float = 6.0,
    s_star: Optional[float] = None,
    strategy: Optional[BoundaryStrategy] = None,
) -> ConvergenceReport:
    """Vary M at fixed N; errors against the exact solution at t = T."""
    Ms = _check_levels(M_levels)
    problem = case.problem
    mesh = make_mesh(grid, N_fixed, problem.s_minus, problem.s_plus, lam, s_star)
    raw = []
    used = ""
    for M in Ms:
        sol = time_march(problem, mesh, M, strategy=strategy)
        used = sol.boundary_strategy
        raw.append((N_fixed, M, max_norm_error(sol, case.exact)))
    return ConvergenceReport(
        axis="time",
        grid=GRID_ALIASES[grid],
        alpha=problem.alpha,
        levels=_with_orders(raw, "time"),
        reference="exact",
        strategy=used,
    )
