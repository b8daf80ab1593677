"""Error metrics, sweeps, the one-sided Jacobi SVD, and conditioning studies."""

import dataclasses

import numpy as np
import pytest
from numpy.testing import assert_allclose

from adspectral import (ADProblem, SolverConfig, bench_solve,
                        conditioning_study, convergence_sweep, error_report,
                        evaluate_u, jacobi_svd, singular_values, solve_modes)
from adspectral import test_problem as builtin_problem
from adspectral.gegenbauer import build_basis, build_integration_matrix, \
    shift_integration_matrix


class TestErrorReport:
    def test_identical_fields_give_exact_zero(self):
        # The solve is deterministic, so an exact sampler wrapping the
        # solver's own output must produce a bitwise-zero error.
        problem = builtin_problem(1)
        config = SolverConfig(N=4, M=6, N0=6)
        t_final = 0.15
        reference = solve_modes(problem.with_horizon(t_final), config)
        grid = reference.grid
        synthetic = dataclasses.replace(
            problem, exact=lambda x, t: evaluate_u(reference, grid, t))
        report = error_report(synthetic, config, t_final)
        assert report.pointwise_max == 0.0
        assert report.dne == 0.0

    def test_tp1_table_value(self):
        report = error_report(builtin_problem(1),
                              SolverConfig(N=4, M=8, N0=6, lam=-0.4), 0.1)
        assert 1.6445e-13 <= report.pointwise_max <= 1.6445e-11

    def test_tp2_table_value(self):
        report = error_report(builtin_problem(2),
                              SolverConfig(N=4, M=7, N0=6, lam=-0.4), 1.0)
        assert 7.0965e-12 <= report.pointwise_max <= 7.0965e-10

    def test_dne_bounded_by_pointwise(self):
        problem = builtin_problem(2)
        report = error_report(problem, SolverConfig(N=8, M=5, N0=10), 0.7)
        assert report.dne <= np.sqrt(problem.L) * report.pointwise_max + 1e-300

    def test_dne_two_computations_agree(self):
        problem = builtin_problem(1)
        config = SolverConfig(N=8, M=6, N0=10)
        t_final = 0.2
        report = error_report(problem, config, t_final)
        sol = solve_modes(problem.with_horizon(t_final), config)
        grid = sol.grid
        errs = evaluate_u(sol, grid, t_final) - problem.exact(grid.nodes, t_final)
        via_norm = float(np.sqrt(problem.L) * np.linalg.norm(errs) / np.sqrt(config.N))
        assert report.dne == pytest.approx(via_norm, rel=1e-14)

    def test_requires_exact_solution(self):
        problem = ADProblem(mu=0.0, nu=1.0, L=2.0, T=1.0,
                            u0=lambda x: np.sin(np.pi * x),
                            g=lambda t: 0.0 * np.asarray(t))
        with pytest.raises(ValueError, match="exact"):
            error_report(problem, SolverConfig(N=4, M=6, N0=6), 0.5)

    def test_rejects_nonpositive_t_final(self):
        with pytest.raises(ValueError, match="t_final"):
            error_report(builtin_problem(1), SolverConfig(N=4, M=6, N0=6), 0.0)

    def test_grid_desc_contents(self):
        config = SolverConfig(N=4, M=8, N0=6, lam=-0.4)
        report = error_report(builtin_problem(1), config, 0.1)
        assert report.grid_desc == (4, 8, -0.4, 6, 0.1)


class TestConvergenceSweep:
    def test_temporal_decay_spans_eight_decades(self):
        result = convergence_sweep(builtin_problem(1), [4], range(4, 13),
                                   -0.4, 0.2)
        logs = [row[3] for row in result.rows]
        assert logs[0] - logs[-1] >= 8.0
        assert result.slopes[4] < -1.0

    def test_spatial_direction_is_flat(self):
        result = convergence_sweep(builtin_problem(1), range(4, 23, 2), [12],
                                   -0.4, 0.2)
        dnes = [row[2] for row in result.rows]
        assert len(result.rows) == 10
        assert np.log10(max(dnes) / min(dnes)) <= 1.0

    def test_single_cell(self):
        result = convergence_sweep(builtin_problem(2), [4], [6], -0.4)
        assert len(result.rows) == 1
        assert result.rows[0][0] == 4 and result.rows[0][1] == 6

    def test_rows_sorted_by_keys(self):
        result = convergence_sweep(builtin_problem(1), [8, 4], [6, 5], -0.4, 0.1)
        keys = [(row[0], row[1]) for row in result.rows]
        assert keys == sorted(keys)

    def test_empty_range_rejected(self):
        with pytest.raises(ValueError, match="nonempty"):
            convergence_sweep(builtin_problem(1), [], [4], -0.4)


class TestJacobiSvd:
    def test_identity(self):
        assert_allclose(singular_values(np.eye(5)), np.ones(5), atol=0.0)

    def test_diagonal_absolute_values(self):
        assert_allclose(singular_values(np.diag([3.0, 2.0, -1.0])),
                        [3.0, 2.0, 1.0], atol=1e-15)

    def test_two_by_two_closed_form(self):
        # Analytic SVD of [[1/2, 1/2 - 1/sqrt(3)], [1/2 + 1/sqrt(3), 1/2]]:
        # sigma^2 are the roots of s^4 - (5/3) s^2 + 1/9.
        q = build_integration_matrix(build_basis(0.5, 1))
        got = singular_values(q.entries)
        expected = np.sqrt([(5 + np.sqrt(21)) / 6, (5 - np.sqrt(21)) / 6])
        assert_allclose(got, expected, rtol=1e-14)

    @pytest.mark.parametrize("complex_entries", [False, True])
    def test_random_matrices_match_lapack(self, complex_entries):
        rng = np.random.default_rng(9)
        for _ in range(5):
            a = rng.standard_normal((20, 20))
            if complex_entries:
                a = a + 1j * rng.standard_normal((20, 20))
            u, s, vh = jacobi_svd(a)
            reference = np.linalg.svd(a, compute_uv=False)
            assert_allclose(s, reference, rtol=1e-10, atol=1e-12)
            reconstruction = (u * s) @ vh
            assert np.max(np.abs(a - reconstruction)) <= 1e-10 * np.max(np.abs(a))

    def test_orthogonality_of_factors(self):
        rng = np.random.default_rng(10)
        a = rng.standard_normal((12, 12))
        u, s, vh = jacobi_svd(a)
        assert_allclose(u.T @ u, np.eye(12), atol=1e-13)
        assert_allclose(vh @ vh.T, np.eye(12), atol=1e-13)

    def test_rectangular_tall_matrix(self):
        rng = np.random.default_rng(11)
        a = rng.standard_normal((30, 8))
        _, s, _ = jacobi_svd(a)
        assert_allclose(s, np.linalg.svd(a, compute_uv=False), rtol=1e-10)

    def test_wide_matrix_rejected(self):
        with pytest.raises(ValueError, match="rows"):
            jacobi_svd(np.ones((3, 5)))

    def test_singular_values_requires_square(self):
        with pytest.raises(ValueError, match="square"):
            singular_values(np.ones((3, 5)))

    def test_rank_deficient(self):
        a = np.outer(np.arange(1.0, 6.0), np.ones(5))
        s = singular_values(a)
        assert s[0] == pytest.approx(np.linalg.norm(a, 2), rel=1e-12)
        assert_allclose(s[1:], 0.0, atol=1e-12)


class TestConditioning:
    def test_shift_leaves_condition_number_invariant(self):
        q = build_integration_matrix(build_basis(-0.4, 20))
        tq = shift_integration_matrix(q, 0.37)
        sq = singular_values(q.entries)
        stq = singular_values(tq.entries)
        assert sq[0] / sq[-1] == pytest.approx(stq[0] / stq[-1], rel=1e-12)

    def test_fundamental_mode_well_conditioned(self):
        # Comparison-table settings: horizon 0.1.
        problem = builtin_problem(1).with_horizon(0.1)
        config = SolverConfig(N=4, M=10, N0=6)
        reports, flags = conditioning_study(problem, config, [-0.4], [10, 40])
        for report in reports:
            if report.kind == "A" and report.n == 1:
                assert 1.0 <= report.cond <= 2.0
        assert flags["fundamental_max_cond"] <= 2.0

    def test_no_transport_gives_exact_identity(self):
        problem = ADProblem(mu=0.0, nu=0.0, L=2.0, T=1.0,
                            u0=lambda x: np.sin(np.pi * x),
                            g=lambda t: 0.0 * np.asarray(t))
        config = SolverConfig(N=4, M=8, N0=6)
        reports, _ = conditioning_study(problem, config, [-0.4], [8])
        a_reports = [r for r in reports if r.kind == "A"]
        assert a_reports and all(r.cond == 1.0 for r in a_reports)

    def test_sigma_min_shrinks_toward_degenerate_lambda(self):
        problem = builtin_problem(1)
        config = SolverConfig(N=4, M=10, N0=6)
        reports, flags = conditioning_study(
            problem, config, [-0.4999, -0.49, -0.4], [40])
        assert flags["sigma_min_monotone_negative_lam"]
        smin = {r.lam: r.sigma_min for r in reports if r.kind == "TQ"}
        assert smin[-0.4] / smin[-0.4999] >= 100.0

    def test_peak_conditioning_at_nyquist(self):
        problem = ADProblem(mu=1.0, nu=1.0, L=2.0, T=0.2,
                            u0=lambda x: np.sin(np.pi * x),
                            g=lambda t: 0.0 * np.asarray(t))
        config = SolverConfig(N=50, M=4, N0=52)
        reports, flags = conditioning_study(problem, config, [-0.4], [4])
        assert flags["peak_at_nyquist"]
        conds = {r.n: r.cond for r in reports if r.kind == "A"}
        assert conds[25] > conds[1]

    def test_report_cardinality(self):
        problem = builtin_problem(1)
        config = SolverConfig(N=4, M=4, N0=6)
        reports, _ = conditioning_study(problem, config,
                                        [-0.4, 0.0, 0.5], [4, 12])
        assert sum(r.kind == "TQ" for r in reports) == 6
        assert sum(r.kind == "A" for r in reports) == 12
        assert all(r.cond >= 1.0 for r in reports)

    def test_empty_lists_rejected(self):
        with pytest.raises(ValueError, match="nonempty"):
            conditioning_study(builtin_problem(1), SolverConfig(N=4, M=4, N0=6),
                               [], [4])


class TestBench:
    def test_stage_breakdown_structure(self):
        result = bench_solve(builtin_problem(1), SolverConfig(N=4, M=10, N0=6),
                             repeats=3)
        assert set(result.stages) == {"assembly", "solve", "synthesis"}
        assert result.median_total > 0.0
        assert all(v >= 0.0 for v in result.stages.values())
        assert result.parallel_ratio is None

    def test_parallel_ratio_reported(self):
        result = bench_solve(builtin_problem(1), SolverConfig(N=8, M=8, N0=10),
                             repeats=3, parallel=True)
        assert result.parallel_ratio is not None and result.parallel_ratio > 0.0

    def test_repeats_floor(self):
        with pytest.raises(ValueError, match="repeats"):
            bench_solve(builtin_problem(1), SolverConfig(N=4, M=4, N0=6),
                        repeats=2)
