"""Error metrics, convergence sweeps, conditioning studies, and timing."""

from __future__ import annotations

import time
import warnings
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .fourier import FourierGrid
from .gegenbauer import build_basis, build_integration_matrix, shift_integration_matrix
from .problems import ADProblem, SolverConfig
from .solver import (SpectralSolution, _complete_solution, _prepare,
                     _solve_positive_modes, evaluate_u, mode_rate, solve_modes)

JACOBI_TOL = 1e-14
JACOBI_MAX_SWEEPS = 60


@dataclass(frozen=True)
class ErrorReport:
    """Pointwise max and discrete norm of the error on the spatial grid at t_final."""

    pointwise_max: float
    dne: float
    grid_desc: tuple  # (N, M, lam, N0, t_final)


@dataclass(frozen=True)
class ConditioningReport:
    """Extreme singular values and condition number of one studied matrix."""

    kind: str  # "TQ" or "A"
    n: int     # mode index for kind "A"; 0 for the integration matrix itself
    lam: float
    M: int
    sigma_max: float
    sigma_min: float
    cond: float


@dataclass(frozen=True)
class SweepResult:
    """Rows (N, M, dne, log10 dne) plus log-error slopes versus M per N."""

    rows: list
    slopes: dict


@dataclass(frozen=True)
class BenchResult:
    """Median wall-clock seconds, total and per stage; informational only."""

    median_total: float
    stages: dict
    parallel_ratio: Optional[float] = None


def _report_from_solution(sol: SpectralSolution, t_final: float) -> ErrorReport:
    problem, config = sol.problem, sol.config
    grid = sol.grid
    numeric = evaluate_u(sol, grid, t_final)
    exact = np.asarray(problem.exact(grid.nodes, t_final), dtype=float)
    diff = numeric - exact
    dne = float(np.sqrt(problem.L / config.N * np.sum(diff ** 2)))
    return ErrorReport(
        pointwise_max=float(np.max(np.abs(diff))),
        dne=dne,
        grid_desc=(config.N, config.M, config.lam, config.N0, t_final),
    )


def error_report(problem: ADProblem, config: SolverConfig, t_final: float,
                 parallel: bool = False) -> ErrorReport:
    """Solve with horizon t_final and compare to the exact solution there.

    t_final is treated as the terminal time of the run: the mode systems are
    collocated on (0, t_final) and the coefficients interpolated to its
    endpoint, which is never a collocation node.
    """
    if problem.exact is None:
        raise ValueError("error_report requires a problem with an exact solution")
    if not t_final > 0:
        raise ValueError(f"t_final must be positive; got {t_final}")
    sol = solve_modes(problem.with_horizon(t_final), config, parallel=parallel)
    return _report_from_solution(sol, t_final)


def convergence_sweep(problem: ADProblem, N_range: Sequence[int],
                      M_range: Sequence[int], lam: float,
                      t_final: Optional[float] = None) -> SweepResult:
    """One error report per (N, M) cell, N0 = N + 2 throughout."""
    if not len(N_range) or not len(M_range):
        raise ValueError("N_range and M_range must be nonempty")
    t_final = problem.T if t_final is None else t_final
    rows = []
    for N in sorted(set(int(n) for n in N_range)):
        for M in sorted(set(int(m) for m in M_range)):
            config = SolverConfig(N=N, M=M, N0=N + 2, lam=lam)
            report = error_report(problem, config, t_final)
            log_dne = float(np.log10(report.dne)) if report.dne > 0 else -np.inf
            rows.append((N, M, report.dne, log_dne))
    slopes = {}
    for N in sorted(set(r[0] for r in rows)):
        ms = np.array([r[1] for r in rows if r[0] == N], dtype=float)
        logs = np.array([r[3] for r in rows if r[0] == N], dtype=float)
        finite = np.isfinite(logs)
        if finite.sum() >= 2:
            slopes[N] = float(np.polyfit(ms[finite], logs[finite], 1)[0])
        else:
            slopes[N] = float("nan")
    return SweepResult(rows=rows, slopes=slopes)


def jacobi_svd(matrix, tol: float = JACOBI_TOL,
               max_sweeps: int = JACOBI_MAX_SWEEPS):
    """One-sided Jacobi SVD of a real or complex matrix with m >= n rows.

    Columns are orthogonalized pairwise by plane rotations (with a phase
    absorption step in the complex case) until every normalized column inner
    product falls below tol. Returns (U, s, Vh) with s descending; small
    singular values retain high relative accuracy.
    """
    a = np.asarray(matrix)
    if a.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    m, n = a.shape
    if m < n:
        raise ValueError("one-sided Jacobi requires at least as many rows as columns")
    dtype = complex if np.iscomplexobj(a) else float
    u = np.array(a, dtype=dtype)
    v = np.eye(n, dtype=dtype)

    for _ in range(max_sweeps):
        off = 0.0
        for i in range(n - 1):
            for j in range(i + 1, n):
                x = u[:, i]
                y = u[:, j]
                aa = np.vdot(x, x).real
                bb = np.vdot(y, y).real
                # sqrt before multiplying: the product itself can underflow
                # for near-null columns of rank-deficient inputs
                denom = np.sqrt(aa) * np.sqrt(bb)
                if denom == 0.0:
                    continue
                c = np.vdot(x, y)
                rel = abs(c) / denom
                off = max(off, rel)
                if rel <= tol:
                    continue
                cab = abs(c)
                phase = c / cab
                zeta = (bb - aa) / (2.0 * cab)
                sgn = 1.0 if zeta >= 0.0 else -1.0
                tt = sgn / (abs(zeta) + np.hypot(1.0, zeta))
                cs = 1.0 / np.sqrt(1.0 + tt * tt)
                sn = cs * tt
                yp = np.conj(phase) * y
                new_i = cs * x - sn * yp
                new_j = sn * x + cs * yp
                u[:, i] = new_i
                u[:, j] = new_j
                xv = v[:, i]
                yv = np.conj(phase) * v[:, j]
                v_i = cs * xv - sn * yv
                v_j = sn * xv + cs * yv
                v[:, i] = v_i
                v[:, j] = v_j
        if off <= tol:
            break
    else:
        warnings.warn(
            f"one-sided Jacobi SVD stopped after {max_sweeps} sweeps "
            f"with off-measure {off:.2e}", RuntimeWarning)

    sing = np.sqrt(np.sum(np.abs(u) ** 2, axis=0))
    order = np.argsort(-sing, kind="stable")
    sing = sing[order]
    u = u[:, order]
    v = v[:, order]
    nonzero = sing > 0
    u[:, nonzero] = u[:, nonzero] / sing[nonzero]
    return u, sing, np.conj(v.T)


def singular_values(matrix) -> np.ndarray:
    """Full singular spectrum of a square matrix, descending."""
    a = np.asarray(matrix)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix; got shape {a.shape}")
    _, sing, _ = jacobi_svd(a)
    return sing


def _extreme_singular(matrix) -> tuple[float, float]:
    sing = singular_values(matrix)
    return float(sing[0]), float(sing[-1])


def conditioning_study(problem: ADProblem, config: SolverConfig,
                       lambda_list: Sequence[float],
                       M_list: Sequence[int]):
    """Condition numbers of TQ and of A at the fundamental and Nyquist modes.

    Returns (reports, flags). Flags summarize the empirical trends:
    ``peak_at_nyquist`` (cond at n = N/2 dominates the sampled modes whenever
    mu, nu are not both zero), ``sigma_min_monotone_negative_lam`` (smallest
    singular value of Q shrinks as lam decreases below 0, per M), and
    ``fundamental_max_cond`` (largest observed cond at n = 1).
    """
    if not len(lambda_list) or not len(M_list):
        raise ValueError("lambda_list and M_list must be nonempty")
    lams = sorted(set(float(l) for l in lambda_list))
    Ms = sorted(set(int(m) for m in M_list))
    half = config.N // 2
    modes = sorted({1, half})

    reports = []
    transport = problem.mu != 0 or problem.nu != 0
    peak_ok = True
    sigma_min_by_M = {M: [] for M in Ms}

    for lam in lams:
        for M in Ms:
            basis = build_basis(lam, M)
            tq = shift_integration_matrix(build_integration_matrix(basis), problem.T)
            smax, smin = _extreme_singular(tq.entries)
            reports.append(ConditioningReport(
                kind="TQ", n=0, lam=lam, M=M,
                sigma_max=smax, sigma_min=smin, cond=smax / smin))
            sigma_min_by_M[M].append(smin)
            conds = {}
            for n in modes:
                alpha = mode_rate(problem, n)
                a = np.eye(M + 1, dtype=complex) + alpha * tq.entries
                smax, smin = _extreme_singular(a)
                conds[n] = smax / smin
                reports.append(ConditioningReport(
                    kind="A", n=n, lam=lam, M=M,
                    sigma_max=smax, sigma_min=smin, cond=smax / smin))
            if transport and len(modes) > 1:
                peak_ok = peak_ok and conds[half] >= conds[1] * (1.0 - 1e-9)

    monotone = True
    neg = [i for i, lam in enumerate(lams) if lam < 0.0]
    for M in Ms:
        smins = [sigma_min_by_M[M][i] for i in neg]
        monotone = monotone and all(a <= b * (1.0 + 1e-9)
                                    for a, b in zip(smins, smins[1:]))

    flags = {
        "peak_at_nyquist": peak_ok,
        "sigma_min_monotone_negative_lam": monotone,
        "fundamental_max_cond": max(
            (r.cond for r in reports if r.kind == "A" and r.n == 1),
            default=float("nan")),
    }
    return reports, flags


def bench_solve(problem: ADProblem, config: SolverConfig, repeats: int,
                parallel: bool = False) -> BenchResult:
    """Median wall-clock time of assembly, solves, and synthesis stages."""
    if repeats < 3:
        raise ValueError(f"repeats must be >= 3; got {repeats}")
    stage_names = ("assembly", "solve", "synthesis")
    samples = {name: [] for name in stage_names}
    totals = []
    ratios = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        basis, tq, tgrid, spectrum = _prepare(problem, config)
        t1 = time.perf_counter()
        solved = _solve_positive_modes(problem, config, tq, spectrum, parallel=False)
        t2 = time.perf_counter()
        sol = _complete_solution(problem, config, basis, tgrid, solved)
        grid = sol.grid
        for t in tgrid.nodes:
            evaluate_u(sol, grid, float(t))
        t3 = time.perf_counter()
        samples["assembly"].append(t1 - t0)
        samples["solve"].append(t2 - t1)
        samples["synthesis"].append(t3 - t2)
        totals.append(t3 - t0)
        if parallel:
            p0 = time.perf_counter()
            _solve_positive_modes(problem, config, tq, spectrum, parallel=True)
            p1 = time.perf_counter()
            ratios.append((t2 - t1) / max(p1 - p0, 1e-12))
    stages = {name: float(np.median(vals)) for name, vals in samples.items()}
    ratio = float(np.median(ratios)) if ratios else None
    return BenchResult(median_total=float(np.median(totals)), stages=stages,
                       parallel_ratio=ratio)
