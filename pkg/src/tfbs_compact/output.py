"""CSV writers and gnuplot scripts for meshes, solution surfaces and reports."""

from __future__ import annotations

from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from tfbs_compact.mesh import Mesh
from tfbs_compact.solver import SolutionGrid


def fmt(x: float) -> str:
    return f"{float(x):.17g}"


def mesh_csv(mesh: Mesh) -> str:
    lines = ["n,s,h"]
    h = mesh.steps
    for n, s in enumerate(mesh.nodes):
        step = fmt(h[n]) if n < mesh.N else ""
        lines.append(f"{n},{fmt(s)},{step}")
    return "\n".join(lines) + "\n"


def surface_csv(solution: SolutionGrid, prices: Optional[np.ndarray] = None) -> str:
    """Rows ``m,t,n,s,U[,V]`` in (m, n) order; t is the diffusion time m*tau."""
    header = "m,t,n,s,U,V" if prices is not None else "m,t,n,s,U"
    lines = [header]
    nodes = solution.mesh.nodes
    for m, t in enumerate(solution.times):
        row_u = solution.values[m]
        for n, s in enumerate(nodes):
            line = f"{m},{fmt(t)},{n},{fmt(s)},{fmt(row_u[n])}"
            if prices is not None:
                line += f",{fmt(prices[m, n])}"
            lines.append(line)
    return "\n".join(lines) + "\n"


def slice_indices(M: int, fractions: Sequence[float] = (0.0, 0.25, 0.5, 0.75, 1.0)) -> list[int]:
    return [int(round(f * M)) for f in fractions]


def price_plot_script(csv_name: str, T: float, M: int, K: float, S: float) -> str:
    """gnuplot script drawing V(s) at five time levels from the surface CSV."""
    idx = slice_indices(M)
    plots = []
    for m in idx:
        market_t = T - m * T / M
        plots.append(
            f"'{csv_name}' every ::1 using 4:($1=={m} ? $6 : 1/0) "
            f"with linespoints title 't = {market_t:.4g} (m={m})'"
        )
    return "\n".join(
        [
            "set datafile separator ','",
            "set xlabel 's'",
            "set ylabel 'V(s,t)'",
            f"set xrange [0:{S:g}]",
            f"set yrange [0:{K:g}]",
            "set key top right",
            "plot " + ", \\\n     ".join(plots),
            "",
        ]
    )


def mesh_plot_script(csv_name: str, title: str) -> str:
    return "\n".join(
        [
            "set datafile separator ','",
            f"set title '{title}'",
            "set xlabel 's_n'",
            "set ylabel 'n'",
            "set key off",
            f"plot '{csv_name}' every ::1 using 2:1 with points pt 7, \\",
            f"     '{csv_name}' every ::1 using 2:(0) with impulses",
            "",
        ]
    )


def write_text(path: Path, text: str) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    return path
