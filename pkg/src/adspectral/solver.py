"""Per-mode integral-collocation systems, direct solves, and field evaluation.

Each nonzero Fourier mode n of the spatial-derivative antiderivative obeys a
Volterra integral equation whose collocated form is the dense complex system

    (I + alpha_n (T/2) Q) psi_n = u0_hat_n * ones,

solved for n = 1 .. N/2 only; negative modes follow by conjugation and the
zero mode from the zero-sum constraint of the coefficient vector.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from .fourier import FourierGrid, InitialSpectrum, dft_coefficients, \
    synthesize_derivative, synthesize_field
from .gegenbauer import GegenbauerBasis, IntegrationMatrix, TimeGrid, \
    bary_interpolate, build_basis, build_integration_matrix, \
    shift_integration_matrix, time_grid
from .problems import ADProblem, SolverConfig

# A pivot below this fraction of ||A||_inf marks the system as numerically
# singular; reported, never regularized.
PIVOT_RTOL = 1e-14


class ModeSolveError(RuntimeError):
    """A mode system was numerically singular or ill-conditioned."""

    def __init__(self, mode: int, detail: str):
        super().__init__(f"mode {mode}: {detail}")
        self.mode = mode


@dataclass(frozen=True)
class ModeSystem:
    """Collocated system for one positive mode index."""

    n: int
    alpha: complex
    matrix: np.ndarray
    rhs: np.ndarray


@dataclass(frozen=True)
class SpectralSolution:
    """Nodal Fourier coefficients psi_k(t_l) on the mode x time-node grid."""

    config: SolverConfig
    problem: ADProblem
    basis: GegenbauerBasis
    time_grid: TimeGrid
    psi: dict

    @property
    def grid(self) -> FourierGrid:
        return FourierGrid(L=self.problem.L, N=self.config.N)


def mode_rate(problem: ADProblem, n: int) -> complex:
    """Decay/rotation rate alpha_n = w_n (nu w_n + mu i) with w_n = 2 pi n / L."""
    omega = 2.0 * np.pi * n / problem.L
    return complex(omega * (problem.nu * omega + problem.mu * 1j))


def assemble_mode(n: int, problem: ADProblem, config: SolverConfig,
                  tq: IntegrationMatrix, spectrum: InitialSpectrum) -> ModeSystem:
    """Assemble I + alpha_n TQ and the replicated right-hand side for mode n."""
    if not 1 <= n <= config.N // 2:
        raise ValueError(f"mode index must be in 1..{config.N // 2}; got {n}")
    alpha = mode_rate(problem, n)
    size = tq.order + 1
    matrix = np.eye(size, dtype=complex) + alpha * tq.entries
    rhs = np.full(size, spectrum.mode(n), dtype=complex)
    return ModeSystem(n=n, alpha=alpha, matrix=matrix, rhs=rhs)


def _solve_system(system: ModeSystem) -> np.ndarray:
    if system.alpha == 0:
        # Identity system; skip the factorization entirely.
        return system.rhs.copy()
    lu, piv = lu_factor(system.matrix)
    scale = np.linalg.norm(system.matrix, np.inf)
    pivot_min = float(np.min(np.abs(np.diag(lu))))
    if pivot_min < PIVOT_RTOL * scale:
        raise ModeSolveError(
            system.n,
            f"singular or ill-conditioned system "
            f"(pivot {pivot_min:.3e} below {PIVOT_RTOL:.0e} * ||A|| = {PIVOT_RTOL * scale:.3e})",
        )
    return lu_solve((lu, piv), system.rhs)


def _prepare(problem: ADProblem, config: SolverConfig):
    basis = build_basis(config.lam, config.M)
    tq = shift_integration_matrix(build_integration_matrix(basis), problem.T)
    tgrid = time_grid(basis, problem.T)
    x0 = problem.L * np.arange(config.N0) / config.N0
    spectrum = dft_coefficients(np.asarray(problem.u0(x0), dtype=float), config.N0)
    return basis, tq, tgrid, spectrum


def _solve_positive_modes(problem: ADProblem, config: SolverConfig,
                          tq: IntegrationMatrix, spectrum: InitialSpectrum,
                          parallel: bool = False) -> list[np.ndarray]:
    systems = [assemble_mode(n, problem, config, tq, spectrum)
               for n in range(1, config.N // 2 + 1)]
    if parallel and len(systems) > 1:
        # The systems are independent; results are collected in mode order so
        # the output is identical to the serial loop.
        with ThreadPoolExecutor() as pool:
            return list(pool.map(_solve_system, systems))
    return [_solve_system(system) for system in systems]


def _complete_solution(problem: ADProblem, config: SolverConfig,
                       basis: GegenbauerBasis, tgrid: TimeGrid,
                       solved: list[np.ndarray]) -> SpectralSolution:
    half = config.N // 2
    psi = {}
    zero = np.zeros(config.M + 1)
    for n, vec in zip(range(1, half + 1), solved):
        zero = zero - 2.0 * vec.real
        psi[n] = vec
        psi[-n] = np.conj(vec)
    psi[0] = zero.astype(complex)
    psi = {k: psi[k] for k in range(-half, half + 1)}
    for vec in psi.values():
        vec.setflags(write=False)
    return SpectralSolution(config=config, problem=problem, basis=basis,
                            time_grid=tgrid, psi=psi)


def solve_modes(problem: ADProblem, config: SolverConfig,
                parallel: bool = False) -> SpectralSolution:
    """Solve all positive-mode systems and complete the coefficient table.

    Negative modes are the exact conjugates of the positive ones and the zero
    mode is -2 sum_k Re(psi_k), enforcing the zero-sum constraint.
    """
    basis, tq, tgrid, spectrum = _prepare(problem, config)
    solved = _solve_positive_modes(problem, config, tq, spectrum, parallel=parallel)
    return _complete_solution(problem, config, basis, tgrid, solved)


def coefficients_at(sol: SpectralSolution, t: float) -> dict:
    """Interpolate every mode's nodal coefficients to time t in [0, T].

    The map s = 2 t / T - 1 reuses the reference-interval barycentric
    weights; real weights preserve conjugate symmetry exactly.
    """
    T = sol.problem.T
    if not 0.0 <= t <= T:
        raise ValueError(f"t must lie in [0, {T}]; got {t}")
    s = 2.0 * t / T - 1.0
    return {k: complex(bary_interpolate(sol.basis, vec, s))
            for k, vec in sol.psi.items()}


def evaluate_u(sol: SpectralSolution, x_grid: FourierGrid, t: float) -> np.ndarray:
    """Solution values at the grid nodes and time t."""
    coeffs = coefficients_at(sol, t)
    return synthesize_field(coeffs, x_grid, float(sol.problem.g(t)))


def evaluate_ux(sol: SpectralSolution, x_grid: FourierGrid, t: float) -> np.ndarray:
    """Spatial-derivative values at the grid nodes and time t."""
    coeffs = coefficients_at(sol, t)
    return synthesize_derivative(coeffs, x_grid)
