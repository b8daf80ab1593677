"""Command line front end: solve, sa, convergence, conditioning, bench.

Every command reads a key=value config file, writes CSV files into the output
directory, and exits 0 only when all requested outputs were written. CSV
fields carry 17 significant digits so reruns round-trip doubles exactly.
"""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .analysis import (ErrorReport, _report_from_solution, bench_solve,
                       conditioning_study, convergence_sweep)
from .fourier import FourierGrid, synthesize_derivative, synthesize_field
from .gegenbauer import build_basis, time_grid
from .problems import ConfigError, SolverConfig, load_config, parse_config_pairs
from .semianalytic import sa_coefficient_map, sa_field
from .solver import evaluate_u, evaluate_ux, solve_modes


@dataclass(frozen=True)
class RunManifest:
    command: str
    config_path: Path
    output_dir: Path
    seed: int = 0
    parallel: bool = False


def _fmt(value) -> str:
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{float(value):.17g}"


def _write_csv(path: Path, header, rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([cell if isinstance(cell, str) else _fmt(cell)
                             for cell in row])


def _ensure_outdir(path: Path) -> None:
    if path.exists() and not path.is_dir():
        raise OSError(f"output directory {path} exists and is not a directory")
    path.mkdir(parents=True, exist_ok=True)


def _load(manifest: RunManifest):
    problem, config = load_config(manifest.config_path)
    extras = parse_config_pairs(manifest.config_path)
    t_final = float(extras.get("t_final", problem.T))
    # t_final is the terminal time of the run: it becomes the solve horizon.
    problem = problem.with_horizon(t_final)
    return problem, config, extras, t_final


def _parse_range(text: str, key: str) -> list[int]:
    # "a" | "a:b" | "a:step:b", inclusive ends, colon syntax.
    parts = text.split(":")
    try:
        nums = [int(p) for p in parts]
    except ValueError as exc:
        raise ConfigError(f"invalid value for key '{key}': {text!r}") from exc
    if len(nums) == 1:
        return nums
    if len(nums) == 2:
        lo, hi, step = nums[0], nums[1], 1
    elif len(nums) == 3:
        lo, step, hi = nums
    else:
        raise ConfigError(f"invalid value for key '{key}': {text!r}")
    if step <= 0 or hi < lo:
        raise ConfigError(f"invalid value for key '{key}': {text!r}")
    return list(range(lo, hi + 1, step))


def _parse_float_list(text: str, key: str) -> list[float]:
    try:
        return [float(p) for p in text.split(",") if p.strip()]
    except ValueError as exc:
        raise ConfigError(f"invalid value for key '{key}': {text!r}") from exc


def _parse_int_list(text: str, key: str) -> list[int]:
    if ":" in text:
        return _parse_range(text, key)
    try:
        return [int(p) for p in text.split(",") if p.strip()]
    except ValueError as exc:
        raise ConfigError(f"invalid value for key '{key}': {text!r}") from exc


def _solution_rows(problem, config, times, u_of_t, ux_of_t):
    grid = FourierGrid(L=problem.L, N=config.N)
    has_exact = problem.exact is not None
    rows = []
    for t in times:
        u = u_of_t(t)
        ux = ux_of_t(t)
        for j, x in enumerate(grid.nodes):
            row = [x, t, u[j], ux[j]]
            if has_exact:
                exact = float(problem.exact(x, t))
                row += [exact, abs(u[j] - exact)]
            rows.append(row)
    header = ["x", "t", "u", "ux"]
    if has_exact:
        header += ["u_exact", "abs_err"]
    return header, rows


def _report_rows(report):
    header = ["N", "M", "lambda", "N0", "t_final", "pointwise_max", "dne"]
    n, m, lam, n0, t_final = report.grid_desc
    return header, [[n, m, lam, n0, t_final, report.pointwise_max, report.dne]]


def cmd_solve(manifest: RunManifest) -> None:
    problem, config, _, t_final = _load(manifest)
    sol = solve_modes(problem, config, parallel=manifest.parallel)
    grid = sol.grid

    times = [float(t) for t in sol.time_grid.nodes] + [t_final]
    header, rows = _solution_rows(
        problem, config, times,
        lambda t: evaluate_u(sol, grid, t),
        lambda t: evaluate_ux(sol, grid, t))
    _write_csv(manifest.output_dir / "solution.csv", header, rows)

    coeff_rows = []
    for k in sorted(sol.psi):
        for l, t_node in enumerate(sol.time_grid.nodes):
            value = sol.psi[k][l]
            coeff_rows.append([k, l, t_node, value.real, value.imag])
    _write_csv(manifest.output_dir / "coefficients.csv",
               ["k", "l", "t_node", "re_psi", "im_psi"], coeff_rows)

    if problem.exact is not None:
        header, rows = _report_rows(_report_from_solution(sol, t_final))
        _write_csv(manifest.output_dir / "report.csv", header, rows)


def cmd_sa(manifest: RunManifest) -> None:
    problem, config, _, t_final = _load(manifest)
    field = sa_field(problem, config.N, config.N0)
    grid = FourierGrid(L=problem.L, N=config.N)
    tgrid = time_grid(build_basis(config.lam, config.M), problem.T)

    def u_of_t(t):
        return synthesize_field(sa_coefficient_map(field, t), grid,
                                float(problem.g(t)))

    def ux_of_t(t):
        return synthesize_derivative(sa_coefficient_map(field, t), grid)

    times = [float(t) for t in tgrid.nodes] + [t_final]
    header, rows = _solution_rows(problem, config, times, u_of_t, ux_of_t)
    _write_csv(manifest.output_dir / "solution.csv", header, rows)

    if problem.exact is not None:
        numeric = u_of_t(t_final)
        exact = np.asarray(problem.exact(grid.nodes, t_final), dtype=float)
        diff = numeric - exact
        report = ErrorReport(
            pointwise_max=float(np.max(np.abs(diff))),
            dne=float(np.sqrt(problem.L / config.N * np.sum(diff ** 2))),
            grid_desc=(config.N, config.M, config.lam, config.N0, t_final))
        header, rows = _report_rows(report)
        _write_csv(manifest.output_dir / "report.csv", header, rows)


def cmd_convergence(manifest: RunManifest) -> None:
    problem, config, extras, t_final = _load(manifest)
    n_range = _parse_range(extras.get("N_range", str(config.N)), "N_range")
    m_range = _parse_range(extras.get("M_range", str(config.M)), "M_range")
    result = convergence_sweep(problem, n_range, m_range, config.lam, t_final)
    _write_csv(manifest.output_dir / "sweep.csv",
               ["N", "M", "dne", "log10_dne"], result.rows)


def cmd_conditioning(manifest: RunManifest) -> None:
    problem, config, extras, _ = _load(manifest)
    lams = _parse_float_list(extras.get("lambda_list", str(config.lam)),
                             "lambda_list")
    ms = _parse_int_list(extras.get("M_list", str(config.M)), "M_list")
    reports, _ = conditioning_study(problem, config, lams, ms)
    rows = [[r.kind, r.n, r.lam, r.M, r.sigma_max, r.sigma_min, r.cond]
            for r in reports]
    _write_csv(manifest.output_dir / "conditioning.csv",
               ["matrix", "n", "lambda", "M", "sigma_max", "sigma_min", "cond"],
               rows)


def cmd_bench(manifest: RunManifest) -> None:
    problem, config, extras, _ = _load(manifest)
    repeats = int(extras.get("repeats", "5"))
    result = bench_solve(problem, config, repeats, parallel=manifest.parallel)
    ratio = "" if result.parallel_ratio is None else _fmt(result.parallel_ratio)
    _write_csv(manifest.output_dir / "bench.csv",
               ["repeats", "median_total_s", "assembly_s", "solve_s",
                "synthesis_s", "parallel_ratio"],
               [[repeats, result.median_total, result.stages["assembly"],
                 result.stages["solve"], result.stages["synthesis"], ratio]])


_COMMANDS = {
    "solve": cmd_solve,
    "sa": cmd_sa,
    "convergence": cmd_convergence,
    "conditioning": cmd_conditioning,
    "bench": cmd_bench,
}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="adspectral",
        description="Spectral advection-diffusion solver and analysis toolkit")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
            ("solve", "run the collocation solve and write solution CSVs"),
            ("sa", "evaluate the closed-form solution and write CSVs"),
            ("convergence", "sweep (N, M) cells and write error norms"),
            ("conditioning", "singular-value study of TQ and mode matrices"),
            ("bench", "wall-clock timing of the solve stages")):
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("--config", required=True, help="key=value config file")
        cmd.add_argument("--out", required=True, help="output directory for CSVs")
        cmd.add_argument("--parallel", action="store_true",
                         help="solve independent mode systems concurrently")
        cmd.add_argument("--seed", type=int, default=0,
                         help="seed recorded for randomized studies")
    args = parser.parse_args(argv)

    manifest = RunManifest(command=args.command,
                           config_path=Path(args.config),
                           output_dir=Path(args.out),
                           seed=args.seed,
                           parallel=args.parallel)
    np.random.seed(manifest.seed)
    try:
        _ensure_outdir(manifest.output_dir)
        _COMMANDS[manifest.command](manifest)
    except (ConfigError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
