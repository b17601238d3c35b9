"""Finite-difference solvers and the diffeomorphism-PDE bound checks."""

import numpy as np
import pytest

from legendreflow.curves import uniform_grid
from legendreflow.errors import ValidationError
from legendreflow.fd import (
    FDGrid,
    PhiState,
    gradient_bound_envelope,
    solve_beta_fd,
    solve_phi_fd,
    tangent_velocity_form_check,
)
from legendreflow.spectral import (
    SpectralBeta,
    evolve_beta,
    evolve_curve,
    reconstruct_centered_curve,
)


class TestFDGrid:
    def test_rejects_unknown_scheme(self):
        with pytest.raises(ValidationError):
            FDGrid(num_points=64, dt=1e-3, scheme="leapfrog")

    def test_rejects_degenerate_parameters(self):
        with pytest.raises(ValidationError):
            FDGrid(num_points=4, dt=1e-3)
        with pytest.raises(ValidationError):
            FDGrid(num_points=64, dt=0.0)

    def test_stability_bound_value(self):
        grid = FDGrid(num_points=64, dt=1e-3)
        du = 2.0 * np.pi / 64
        assert abs(grid.stable_dt_beta(2) - 4 * du * du / 2) < 1e-15


class TestSolveBetaFD:
    def test_crank_nicolson_matches_exact(self):
        num = 256
        u = uniform_grid(num)
        grid = FDGrid(num_points=num, dt=1e-3, scheme="crank_nicolson")
        approx = solve_beta_fd(np.cos(2 * u), 1, 0.25, grid)
        exact = np.exp(-0.75) * np.cos(2 * u)
        assert np.max(np.abs(approx - exact)) < 5e-5

    def test_pure_reaction(self):
        num = 128
        grid = FDGrid(num_points=num, dt=1e-3)
        approx = solve_beta_fd(np.ones(num), 1, 0.25, grid)
        assert np.max(np.abs(approx - np.exp(0.25))) < 1e-7

    def test_refinement_order(self):
        s = SpectralBeta.from_modes(1, modes={2: (1.0, 0.0)})

        def err(num, dt):
            u = uniform_grid(num)
            grid = FDGrid(num_points=num, dt=dt, scheme="crank_nicolson")
            approx = solve_beta_fd(evolve_beta(s, 0.0, u), 1, 0.25, grid)
            return np.max(np.abs(approx - evolve_beta(s, 0.25, u)))

        order = np.log2(err(256, 1e-3) / err(512, 5e-4))
        assert order >= 1.9

    def test_explicit_euler_stable_run(self):
        num = 64
        u = uniform_grid(num)
        grid = FDGrid(num_points=num, dt=2e-3, scheme="explicit_euler")
        assert grid.dt <= grid.stable_dt_beta(1)
        approx = solve_beta_fd(np.cos(2 * u), 1, 0.2, grid)
        exact = np.exp(-0.6) * np.cos(2 * u)
        assert np.max(np.abs(approx - exact)) < 5e-3

    def test_explicit_euler_instability_rejected(self):
        num = 256
        grid = FDGrid(num_points=num, dt=1e-2, scheme="explicit_euler")
        with pytest.raises(ValidationError, match="dt <="):
            solve_beta_fd(np.cos(2 * uniform_grid(num)), 1, 0.1, grid)

    def test_sample_count_mismatch_rejected(self):
        grid = FDGrid(num_points=64, dt=1e-3)
        with pytest.raises(ValidationError):
            solve_beta_fd(np.ones(32), 1, 0.1, grid)


class TestSolvePhiFD:
    def test_identity_is_a_fixed_point(self):
        num = 128
        state0 = PhiState(periodic_part=np.zeros(num))
        grid = FDGrid(num_points=num, dt=5e-4, scheme="explicit_euler")
        traj = solve_phi_fd(state0, lambda u, t: np.ones_like(u), 1.0, grid)
        assert np.max(np.abs(traj.final.periodic_part)) < 1e-14

    def test_gradient_relaxes_to_one(self):
        # unforced case: the periodic part dissipates and d_u phi -> 1; the
        # linearized mode-1 rate is e^{-t}, so 0.2 e^{-2} ~ 0.027 at t = 2
        # and the deviation passes 1e-3 only near t = ln 200 ~ 5.3
        num = 128
        u = uniform_grid(num)
        state0 = PhiState.from_phi(u + 0.2 * np.sin(u))
        grid = FDGrid(num_points=num, dt=2e-4, scheme="explicit_euler")
        traj = solve_phi_fd(state0, lambda v, t: np.ones_like(v), 2.0, grid)
        dev = max(abs(traj.max_gradient[-1] - 1.0), abs(1.0 - traj.min_gradient[-1]))
        assert abs(dev - 0.2 * np.exp(-2.0)) < 0.2 * 0.2 * np.exp(-2.0)
        longer = solve_phi_fd(traj.final, lambda v, t: np.ones_like(v), 4.0, grid)
        dev_late = max(abs(longer.max_gradient[-1] - 1.0),
                       abs(1.0 - longer.min_gradient[-1]))
        assert dev_late < 1e-3

    def test_winding_conserved(self):
        num = 128
        u = uniform_grid(num)
        state0 = PhiState.from_phi(u + 0.2 * np.sin(u))
        grid = FDGrid(num_points=num, dt=2e-4, scheme="explicit_euler")
        traj = solve_phi_fd(state0, lambda v, t: np.ones_like(v), 1.0, grid)
        assert max(traj.winding_residual) < 1e-8

    def test_forced_gradient_bounds(self):
        num = 128
        u = uniform_grid(num)
        state0 = PhiState.from_phi(u + 0.2 * np.sin(u))
        grid = FDGrid(num_points=num, dt=2e-4, scheme="explicit_euler")
        traj = solve_phi_fd(state0, lambda v, t: np.ones_like(v), 2.0, grid,
                            forcing=lambda v, t: 0.1 * np.sin(v))
        rows = gradient_bound_envelope(traj, lambda t: 0.1)
        for t, lo_bound, lo, hi, hi_bound in rows:
            assert lo_bound - 1e-12 <= lo
            assert hi <= hi_bound + 1e-12


class TestTangentVelocityForm:
    def test_single_mode(self):
        s = SpectralBeta.from_modes(1, modes={2: (1.0, 0.0)})
        curve = reconstruct_centered_curve(s, 256)
        a = evolve_curve(s, curve, 0.5)
        b = evolve_curve(s, curve, 0.5 + 1e-5)
        assert tangent_velocity_form_check(a, b) < 1e-8

    def test_mean_mode_velocity_purely_normal(self):
        s = SpectralBeta.from_modes(1, a0=2.0)
        curve = reconstruct_centered_curve(s, 256)
        a = evolve_curve(s, curve, 0.3)
        b = evolve_curve(s, curve, 0.3 + 1e-5)
        assert tangent_velocity_form_check(a, b) < 1e-9

    def test_mixed_modes(self):
        s = SpectralBeta.from_modes(1, modes={2: (1.0, 0.0), 5: (0.0, 0.4)})
        curve = reconstruct_centered_curve(s, 512)
        a = evolve_curve(s, curve, 0.5)
        b = evolve_curve(s, curve, 0.5 + 1e-5)
        assert tangent_velocity_form_check(a, b) < 1e-6

    def test_large_step_rejected(self):
        s = SpectralBeta.from_modes(1, a0=1.0)
        curve = reconstruct_centered_curve(s, 128)
        a = evolve_curve(s, curve, 0.0)
        b = evolve_curve(s, curve, 0.1)
        with pytest.raises(ValidationError):
            tangent_velocity_form_check(a, b)

    def test_normal_field_is_static(self):
        s = SpectralBeta.from_modes(1, modes={2: (1.0, 0.0)})
        curve = reconstruct_centered_curve(s, 256)
        a = evolve_curve(s, curve, 0.2)
        b = evolve_curve(s, curve, 0.2 + 1e-5)
        assert np.max(np.abs(b.curve.normals - a.curve.normals)) < 1e-10
