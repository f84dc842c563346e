"""Command-line interface.

Subcommands:
  materials list                      show the superconductor presets
  stage solve   --config FILE        solve one stage heat balance
  cascade solve --config FILE        solve a stage cascade hot to cold
  sweep fig2c|fig2d|fig2e|fig2f|fig3 --out DIR [--svg]   design sweeps
  bte solve|fit --config FILE [--out DIR] [--svg]        transport solver

Exit codes: 0 success, 1 malformed config, 2 numeric failure.  CSV output
is deterministic: identical configs give byte-identical files.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .bte import conductance_curve, fit_power_law, solve_steady
from .config import RunConfig, load_config
from .constants import CONSTANTS, MATERIALS
from .errors import ConfigError, NumericError
from .output import svg_heatmap, svg_line_chart, write_csv, write_sweep_csv
from .stages import StageSolution, equilibrium_temperature, solve_cascade
from .sweeps import (
    SCENARIOS,
    SweepResult,
    sweep_fig3,
    sweep_map_classical,
    sweep_map_quantum,
    sweep_relative_cooling_vs_T0,
)

_STAGE_COLUMNS = (
    "stage_index", "T0_K", "TN_K", "TS_K", "V_opt_V", "P_cool_W",
    "P_ph_influx_W", "residual_W", "relative_cooling", "warnings",
)


def _stage_row(index: int, sol: StageSolution) -> tuple:
    return (
        index, sol.T_0, sol.T_N, sol.T_S, sol.V_opt, sol.P_cool,
        sol.P_ph_influx, sol.residual, sol.relative_cooling,
        "; ".join(sol.validity_warnings),
    )


def _meta(cfg: RunConfig, **extra: str) -> dict[str, str]:
    meta = {"config_sha256": cfg.config_hash, "config_source": cfg.source}
    meta.update(extra)
    return meta


def _cmd_materials(args) -> int:
    if args.action != "list":
        raise ConfigError(f"unknown materials action {args.action!r}")
    print("name,T_c_K,gap_ueV")
    for name in ("Al", "V", "Ti"):
        m = MATERIALS[name]
        print(f"{name},{m.T_c:g},{m.Delta / CONSTANTS.e * 1e6:.6g}")
    return 0


def _cmd_stage(args) -> int:
    cfg = load_config(args.config)
    sol = equilibrium_temperature(cfg.stage, cfg.stage_T0)
    print(f"T_N = {sol.T_N:.6g} K  (T_0 = {sol.T_0:.6g} K, "
          f"relative cooling {sol.relative_cooling:.4f})")
    print(f"V_opt = {sol.V_opt:.6g} V, P_cool = {sol.P_cool:.6g} W, "
          f"P_ph = {sol.P_ph_influx:.6g} W, residual = {sol.residual:.3g} W")
    for note in sol.validity_warnings:
        print(f"warning: {note}", file=sys.stderr)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        write_csv(out / "stage.csv", _STAGE_COLUMNS, [_stage_row(0, sol)], _meta(cfg))
        print(f"wrote {out / 'stage.csv'}")
    return 0


def _cmd_cascade(args) -> int:
    cfg = load_config(args.config)
    solutions = solve_cascade(cfg.cascade)
    print(f"bath {cfg.cascade.T_bath:.6g} K, {len(solutions)} stage(s)")
    for k, sol in enumerate(solutions):
        print(f"  stage {k} [{cfg.cascade.stages[k].material.name}]: "
              f"{sol.T_0:.6g} K -> {sol.T_N:.6g} K "
              f"({100 * sol.relative_cooling:.1f}% cooling)")
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        rows = [_stage_row(k, sol) for k, sol in enumerate(solutions)]
        write_csv(out / "cascade.csv", _STAGE_COLUMNS, rows,
                  _meta(cfg, bath_K=f"{cfg.cascade.T_bath:.12g}"))
        print(f"wrote {out / 'cascade.csv'}")
    return 0


def _sweep_result(cfg: RunConfig, figure: str) -> SweepResult:
    grids = cfg.sweeps
    if figure in ("fig2c", "fig2d"):
        material = MATERIALS["Al"] if figure == "fig2c" else MATERIALS["V"]
        parts = [
            sweep_relative_cooling_vs_T0(s, material, grids.t0_grid, cfg.defaults)
            for s in SCENARIOS
        ]
        rows = tuple(row for part in parts for row in part.rows)
        values = np.vstack([p.values for p in parts])
        meta = dict(parts[0].metadata)
        meta["sweep"] = figure
        meta["scenario"] = ",".join(SCENARIOS)
        meta["channel_regime"] = ";".join(p.metadata["channel_regime"] for p in parts)
        return SweepResult(
            kind=figure, columns=parts[0].columns, rows=rows, values=values,
            axes={"T0_K": parts[0].axes["T0_K"]}, metadata=meta,
            errors={k: v for p in parts for k, v in p.errors.items()},
        )
    if figure == "fig2e":
        return sweep_map_classical(cfg.material, grids.t_grid, grids.pi_grid, cfg.defaults)
    if figure == "fig2f":
        return sweep_map_quantum(cfg.material, grids.t_grid, grids.n_grid, cfg.defaults)
    if figure == "fig3":
        return sweep_fig3(MATERIALS["Al"], grids.rta_grid, grids.fig3_T0, cfg.defaults)
    raise ConfigError(f"unknown sweep figure {figure!r}")


def _sweep_svg(result: SweepResult, figure: str, path: Path) -> None:
    if figure in ("fig2c", "fig2d"):
        t0 = result.axes["T0_K"]
        series = {s: result.values[k] for k, s in enumerate(SCENARIOS)}
        svg_line_chart(path, t0, series, xlabel="T0 [K]",
                       ylabel="relative cooling", title=f"{figure}: cooling vs T0")
    elif figure in ("fig2e", "fig2f"):
        t = result.axes["t"]
        second = result.axes["Pi" if figure == "fig2e" else "N"]
        svg_heatmap(path, t, second, result.values, xlabel="T/T_c",
                    ylabel="Pi" if figure == "fig2e" else "N quanta",
                    title=f"{figure}: relative cooling", log_y=True)
    else:
        rta = result.axes["RT_A_ohm_um2"]
        series = {
            f"T0={t0:g} K": result.values[:, j]
            for j, t0 in enumerate(result.axes["T0_K"])
        }
        svg_line_chart(path, rta, series, xlabel="R_T A [Ohm um^2]",
                       ylabel="relative cooling", title="fig3: transparency sweep",
                       log_x=True)


def _cmd_sweep(args) -> int:
    cfg = load_config(args.config)
    result = _sweep_result(cfg, args.figure)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / f"{args.figure}.csv"
    write_sweep_csv(csv_path, result, _meta(cfg))
    print(f"wrote {csv_path}")
    if result.errors:
        print(f"{len(result.errors)} of {len(result.rows)} points failed; "
              "see the status column", file=sys.stderr)
    if args.svg:
        svg_path = out / f"{args.figure}.svg"
        _sweep_svg(result, args.figure, svg_path)
        print(f"wrote {svg_path}")
    return 0


def _cmd_bte(args) -> int:
    cfg = load_config(args.config)
    b = cfg.bte
    if args.action == "solve":
        sol = solve_steady(b.geometry, b.medium, b.T_hot, b.T_cold, b.grid)
        print(f"Q = {sol.Q:.6g} W between {b.T_hot:g} K and {b.T_cold:g} K "
              f"({sol.iterations} sweeps, conservation residual {sol.residual:.3g})")
        if args.out:
            out = Path(args.out)
            out.mkdir(parents=True, exist_ok=True)
            dx = b.geometry.length / b.grid.n_x
            rows = [
                (k, k * dx, flux)
                for k, flux in enumerate(sol.flux_profile)
            ]
            write_csv(out / "bte_flux_profile.csv",
                      ("interface", "x_m", "flux_W_m2"), rows,
                      _meta(cfg, Q_W=f"{sol.Q:.12g}"))
            print(f"wrote {out / 'bte_flux_profile.csv'}")
        return 0
    if args.action == "fit":
        curve = conductance_curve(b.geometry, b.medium, b.fit_T_grid, b.grid)
        fit = fit_power_law(curve)
        print(f"fitted n = {fit.channel.n:.4f}, alpha = {fit.channel.alpha:.6g} "
              f"K^n/W (log-rms {fit.log_rms:.3g})")
        if args.out:
            out = Path(args.out)
            out.mkdir(parents=True, exist_ok=True)
            rows = [(p.T, p.G, p.residual) for p in curve]
            write_csv(out / "bte_curve.csv", ("T_K", "G_W_per_K", "residual"), rows,
                      _meta(cfg, fitted_n=f"{fit.channel.n:.12g}",
                            fitted_alpha=f"{fit.channel.alpha:.12g}"))
            print(f"wrote {out / 'bte_curve.csv'}")
            if args.svg:
                svg_line_chart(out / "bte_curve.svg",
                               [p.T for p in curve], {"G(T)": [p.G for p in curve]},
                               xlabel="T [K]", ylabel="G [W/K]",
                               title="constriction conductance", log_x=True)
                print(f"wrote {out / 'bte_curve.svg'}")
        return 0
    raise ConfigError(f"unknown bte action {args.action!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cryostage",
        description="Phonon-blocked tunnel-junction refrigerator design explorer",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_mat = sub.add_parser("materials", help="superconductor presets")
    p_mat.add_argument("action", choices=["list"])
    p_mat.set_defaults(func=_cmd_materials)

    p_stage = sub.add_parser("stage", help="single-stage heat balance")
    p_stage.add_argument("action", choices=["solve"])
    p_stage.add_argument("--config", type=Path, default=None)
    p_stage.add_argument("--out", type=Path, default=None)
    p_stage.set_defaults(func=_cmd_stage)

    p_casc = sub.add_parser("cascade", help="hot-to-cold stage cascade")
    p_casc.add_argument("action", choices=["solve"])
    p_casc.add_argument("--config", type=Path, default=None)
    p_casc.add_argument("--out", type=Path, default=None)
    p_casc.set_defaults(func=_cmd_cascade)

    p_sweep = sub.add_parser("sweep", help="design-map sweeps")
    p_sweep.add_argument("figure", choices=["fig2c", "fig2d", "fig2e", "fig2f", "fig3"])
    p_sweep.add_argument("--config", type=Path, default=None)
    p_sweep.add_argument("--out", type=Path, required=True)
    p_sweep.add_argument("--svg", action="store_true", help="also write an SVG plot")
    p_sweep.set_defaults(func=_cmd_sweep)

    p_bte = sub.add_parser("bte", help="constriction transport solver")
    p_bte.add_argument("action", choices=["solve", "fit"])
    p_bte.add_argument("--config", type=Path, default=None)
    p_bte.add_argument("--out", type=Path, default=None)
    p_bte.add_argument("--svg", action="store_true")
    p_bte.set_defaults(func=_cmd_bte)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except NumericError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
