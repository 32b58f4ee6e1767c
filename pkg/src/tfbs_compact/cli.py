"""Command-line entry point: ``price``, ``converge`` and ``mesh`` subcommands.

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from tfbs_compact.analysis import (
    DEFAULT_M_LEVELS,
    DEFAULT_N_LEVELS,
    GRID_ALIASES,
    make_mesh,
    space_order_study,
    time_order_study,
)
from tfbs_compact.config import ConfigError, RunConfig, load_config
from tfbs_compact.mesh import MeshError
from tfbs_compact.output import (
    mesh_csv,
    mesh_plot_script,
    price_plot_script,
    surface_csv,
    write_text,
)
from tfbs_compact.problems import MarketParams, manufactured_case, recover_option_prices, to_diffusion
from tfbs_compact.solver import AssemblyError, SingularSystemError, time_march

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3

STRATEGIES = ("compact", "noncompact_edge", "compact_limit")

# manufactured case of the convergence studies
STUDY_A, STUDY_B, STUDY_T = 1.0, 2.0, 1.0


def parse_levels(text: Optional[str]) -> Optional[list[int]]:
    if text is None:
        return None
    try:
        levels = [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise ConfigError(f"--levels must be a comma list of integers, got {text!r}") from exc
    if len(levels) < 2 or any(b <= a for a, b in zip(levels, levels[1:])):
        raise ConfigError(f"--levels needs at least two strictly increasing values, got {text!r}")
    if levels[0] < 2:
        raise ConfigError("--levels values must be >= 2")
    return levels


def _grid_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--grid", choices=sorted(GRID_ALIASES), help="mesh kind")
    p.add_argument("--N", type=int, help="number of mesh intervals")
    p.add_argument("--lambda", dest="lam", type=float, help="Tavella-Randall uniformity parameter")
    p.add_argument("--s-star", dest="s_star", type=float, help="Tavella-Randall concentration point")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tfbs-compact",
        description="Compact finite-difference solver for the time-fractional Black-Scholes equation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON configuration file")
    common.add_argument("--out", default=".", help="output directory (default: current)")

    price = sub.add_parser("price", parents=[common], help="price a European put")
    for name in ("sigma", "r", "d", "K", "S", "T", "alpha"):
        price.add_argument(f"--{name}", type=float)
    price.add_argument("--time-steps", dest="time_steps", type=int, help="M (default 50)")
    _grid_options(price)
    price.add_argument("--boundary", choices=STRATEGIES, help="treatment of the s = 0 node")

    conv = sub.add_parser("converge", parents=[common], help="space or time convergence study")
    conv.add_argument("--axis", choices=("space", "time"), required=True)
    conv.add_argument("--alpha", type=float)
    _grid_options(conv)
    conv.add_argument("--levels", help="comma list of varied N (space) or M (time)")
    conv.add_argument("--fixed", type=int, help="the fixed M (space) or N (time), default 50")
    conv.add_argument("--reference", choices=("fine", "exact"), default="fine",
                      help="space study error reference (default: fine nested mesh)")
    conv.add_argument("--boundary", choices=STRATEGIES, help="treatment of the s = 0 node")

    mesh = sub.add_parser("mesh", parents=[common], help="dump a mesh and a node plot script")
    _grid_options(mesh)
    mesh.add_argument("--s-minus", dest="s_minus", type=float, default=0.0)
    mesh.add_argument("--S", type=float, help="right end of the interval (default 1)")
    mesh.add_argument("--K", type=float, help="strike; default TR concentration point")
    return parser


def _config(args: argparse.Namespace, **flags) -> RunConfig:
    base = load_config(args.config)
    return base.override(
        grid_kind=getattr(args, "grid", None),
        N=getattr(args, "N", None),
        lam=getattr(args, "lam", None),
        s_star=getattr(args, "s_star", None),
        **flags,
    )


def cmd_price(args: argparse.Namespace) -> int:
    cfg = _config(
        args,
        **{k: getattr(args, k) for k in ("sigma", "r", "d", "K", "S", "T", "alpha", "time_steps")},
    )
    cfg.require("sigma", "r", "d", "K", "S", "T", "alpha")
    mp = MarketParams(cfg.sigma, cfg.r, cfg.d, cfg.K, cfg.S, cfg.T, cfg.alpha)
    grid = cfg.grid_kind or "quadratic"
    N = cfg.N or 50
    M = cfg.time_steps or 50
    lam = cfg.lam if cfg.lam is not None else 6.0
    s_star = cfg.s_star if cfg.s_star is not None else mp.K

    problem = to_diffusion(mp)
    mesh = make_mesh(grid, N, 0.0, mp.S, lam, s_star)
    sol = time_march(problem, mesh, M, strategy=args.boundary)
    V = recover_option_prices(sol, mp)

    out = Path(args.out)
    csv_path = write_text(out / "price_surface.csv", surface_csv(sol, V))
    gp_path = write_text(out / "price_plot.gp", price_plot_script(csv_path.name, mp.T, M, mp.K, mp.S))
    print(f"grid={GRID_ALIASES[grid]} N={N} M={M} alpha={mp.alpha:g} q={mp.q:g} "
          f"boundary={sol.boundary_strategy}")
    print(f"V range [{V.min():.6g}, {V.max():.6g}]")
    print(f"wrote {csv_path} and {gp_path}")
    return EXIT_OK


def cmd_converge(args: argparse.Namespace) -> int:
    cfg = _config(args, alpha=args.alpha)
    alpha = cfg.alpha if cfg.alpha is not None else 0.75
    grid = cfg.grid_kind or "quadratic"
    lam = cfg.lam if cfg.lam is not None else 6.0
    levels = parse_levels(args.levels)
    fixed = args.fixed if args.fixed is not None else 50
    if fixed < 2:
        raise ConfigError(f"--fixed must be >= 2, got {fixed}")

    case = manufactured_case(STUDY_A, STUDY_B, alpha, STUDY_T)
    if args.axis == "space":
        report = space_order_study(
            case, grid, M_fixed=fixed, N_levels=levels or DEFAULT_N_LEVELS,
            lam=lam, s_star=cfg.s_star, reference=args.reference, strategy=args.boundary,
        )
    else:
        report = time_order_study(
            case, grid, N_fixed=fixed, M_levels=levels or DEFAULT_M_LEVELS,
            lam=lam, s_star=cfg.s_star, strategy=args.boundary,
        )
    out = Path(args.out)
    name = f"converge_{args.axis}_{report.grid}_alpha{alpha:g}.csv"
    path = write_text(out / name, report.to_csv())
    print(report.format_table())
    print(f"wrote {path}")
    return EXIT_OK


def cmd_mesh(args: argparse.Namespace) -> int:
    cfg = _config(args, S=args.S, K=args.K)
    grid = cfg.grid_kind or "uniform"
    N = cfg.N or 10
    s_plus = cfg.S if cfg.S is not None else 1.0
    lam = cfg.lam if cfg.lam is not None else 6.0
    s_star = cfg.s_star if cfg.s_star is not None else cfg.K
    if not args.s_minus < s_plus:
        raise ConfigError(f"need s-minus < S, got {args.s_minus} and {s_plus}")
    mesh = make_mesh(grid, N, args.s_minus, s_plus, lam, s_star)

    out = Path(args.out)
    kind = GRID_ALIASES[grid]
    csv_path = write_text(out / "mesh.csv", mesh_csv(mesh))
    title = f"{kind} mesh, N={N} on [{args.s_minus:g}, {s_plus:g}]"
    gp_path = write_text(out / "mesh_plot.gp", mesh_plot_script(csv_path.name, title))
    h = mesh.steps
    print(f"{title}: min step {h.min():.6g}, max step {h.max():.6g}, ratio {h.max() / h.min():.6g}")
    print(f"wrote {csv_path} and {gp_path}")
    return EXIT_OK


COMMANDS = {"price": cmd_price, "converge": cmd_converge, "mesh": cmd_mesh}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (SingularSystemError, AssemblyError, FloatingPointError) as exc:
        print(f"error: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ConfigError, MeshError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
