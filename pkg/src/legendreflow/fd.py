"""Independent finite-difference oracles.

Two solvers, both deliberately ignorant of the spectral closed forms:

* the linear beta equation d_t beta = d_uu beta / n^2 + beta on the periodic
  grid (explicit Euler or Crank-Nicolson with a cyclic tridiagonal solve),
  used to cross-check the spectral solution at its advertised order;
* the quasi-linear circle-diffeomorphism PDE
      d_t phi = phi_uu / (phi_u^2 (l o phi)^2) - F(phi, t)
  with the exponential gradient envelope e^{-M(t)} min phi_0' <= phi_u <=
  e^{M(t)} max phi_0', M(t) = int_0^t max_u d_u F.

phi is stored as identity plus a periodic part, so the degree-1 constraint
int phi_u du = 2*pi holds structurally.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse
import scipy.sparse.linalg

from .errors import LegendreFlowError, ValidationError
from .curves import periodic_diff, uniform_grid

SCHEMES = ("explicit_euler", "crank_nicolson")


@dataclass(frozen=True)
class FDGrid:
    """Discretization record: N periodic points, step dt, scheme name."""

    num_points: int
    dt: float
    scheme: str = "crank_nicolson"

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ValidationError(f"unknown scheme {self.scheme!r}; pick from {SCHEMES}")
        if self.num_points < 8 or self.dt <= 0.0:
            raise ValidationError("need num_points >= 8 and dt > 0")

    @property
    def du(self):
        return 2.0 * np.pi / self.num_points

    def stable_dt_beta(self, n):
        """Explicit-Euler stability bound for the beta equation."""
        return n * n * self.du * self.du / 2.0


def _periodic_laplacian(num, du):
    main = np.full(num, -2.0)
    off = np.ones(num - 1)
    lap = scipy.sparse.diags([off, main, off], [-1, 0, 1], format="lil")
    lap[0, -1] = 1.0
    lap[-1, 0] = 1.0
    return (lap / (du * du)).tocsc()


def solve_beta_fd(beta0, n, final_time, grid: FDGrid):
    """March the beta equation to final_time on the periodic grid.

    Crank-Nicolson factorizes the cyclic tridiagonal system once and reuses
    it every step; explicit Euler enforces its stability bound up front.
    """
    beta = np.asarray(beta0, dtype=float).copy()
    if beta.shape[0] != grid.num_points:
        raise ValidationError(
            f"beta0 has {beta.shape[0]} samples but the grid expects {grid.num_points}")
    steps = int(round(final_time / grid.dt))
    if abs(steps * grid.dt - final_time) > 1e-12 * max(1.0, final_time):
        raise ValidationError("final_time must be an integer number of steps")
    lap = _periodic_laplacian(grid.num_points, grid.du)
    op = lap / (n * n) + scipy.sparse.identity(grid.num_points, format="csc")
    if grid.scheme == "explicit_euler":
        bound = grid.stable_dt_beta(n)
        if grid.dt > bound:
            raise ValidationError(
                f"explicit Euler unstable at dt = {grid.dt:g}; "
                f"use dt <= {bound:g}")
        op = op.tocsr()
        for _ in range(steps):
            beta = beta + grid.dt * (op @ beta)
        return beta
    # Crank-Nicolson with the compact (Pade) tridiagonal spatial operator:
    # M d_t beta = (L/n^2 + M) beta with M = I + (du^2/12) L; the plain
    # 3-point operator's truncation error would exceed the advertised
    # agreement tolerance at moderate N. Both step matrices stay cyclic
    # tridiagonal.
    eye = scipy.sparse.identity(grid.num_points, format="csc")
    mass = (eye + (grid.du * grid.du / 12.0) * lap).tocsc()
    stiff = (lap / (n * n) + mass).tocsc()
    lhs = scipy.sparse.linalg.factorized((mass - 0.5 * grid.dt * stiff).tocsc())
    rhs_op = (mass + 0.5 * grid.dt * stiff).tocsr()
    for _ in range(steps):
        beta = lhs(rhs_op @ beta)
    return beta


@dataclass(frozen=True)
class PhiState:
    """Circle diffeomorphism phi = u + periodic part, plus its data fields."""

    periodic_part: np.ndarray

    @property
    def num_points(self):
        return self.periodic_part.shape[0]

    @property
    def phi(self):
        return uniform_grid(self.num_points) + self.periodic_part

    def gradient(self):
        return 1.0 + periodic_diff(self.periodic_part)

    @classmethod
    def from_phi(cls, phi_samples):
        phi_samples = np.asarray(phi_samples, dtype=float)
        return cls(periodic_part=phi_samples - uniform_grid(phi_samples.shape[0]))


@dataclass
class PhiTrajectory:
    times: list = field(default_factory=list)
    states: list = field(default_factory=list)
    min_gradient: list = field(default_factory=list)
    max_gradient: list = field(default_factory=list)
    winding_residual: list = field(default_factory=list)

    def record(self, t, state: PhiState):
        grad = state.gradient()
        du = 2.0 * np.pi / state.num_points
        self.times.append(float(t))
        self.states.append(state)
        self.min_gradient.append(float(np.min(grad)))
        self.max_gradient.append(float(np.max(grad)))
        self.winding_residual.append(abs(float(du * np.sum(grad)) - 2.0 * np.pi))

    @property
    def final(self) -> PhiState:
        return self.states[-1]


def solve_phi_fd(state0: PhiState, ell_field, final_time, grid: FDGrid,
                 forcing=None, record_every=10):
    """Explicit stepping of the diffeomorphism PDE on the periodic part.

    ell_field and forcing are callables (u_array, t) -> array; forcing None
    means F == 0 (the special flow's case).  Every accepted step must keep
    d_u phi positive; a violation triggers step-size halving (at most 10
    times) before a hard failure citing the gradient bound.
    """
    if forcing is None:
        forcing = lambda u, t: np.zeros_like(u)
    num = state0.num_points
    if num != grid.num_points:
        raise ValidationError("state and grid sample counts differ")
    du = grid.du
    part = state0.periodic_part.copy()
    u = uniform_grid(num)
    trajectory = PhiTrajectory()
    trajectory.record(0.0, PhiState(periodic_part=part.copy()))

    dt = grid.dt
    t = 0.0
    halvings = 0
    step_index = 0
    while t < final_time - 1e-14:
        dt_step = min(dt, final_time - t)
        phi = u + part
        grad = 1.0 + (np.roll(part, -1) - np.roll(part, 1)) / (2.0 * du)
        second = (np.roll(part, -1) - 2.0 * part + np.roll(part, 1)) / (du * du)
        ell = np.asarray(ell_field(phi, t), dtype=float)
        rate = second / (grad * grad * ell * ell) - forcing(phi, t)
        candidate = part + dt_step * rate
        new_grad = 1.0 + (np.roll(candidate, -1) - np.roll(candidate, 1)) / (2.0 * du)
        if np.any(new_grad <= 0.0):
            halvings += 1
            if halvings > 10:
                raise LegendreFlowError(
                    "d_u phi lost positivity even after 10 step halvings; the "
                    "gradient bound cannot be maintained at this resolution")
            dt *= 0.5
            continue
        part = candidate
        t += dt_step
        step_index += 1
        if step_index % record_every == 0 or t >= final_time - 1e-14:
            trajectory.record(t, PhiState(periodic_part=part.copy()))
    return trajectory


def gradient_bound_envelope(trajectory: PhiTrajectory, max_du_forcing):
    """Prop-style envelope check data for a forcing with known max d_u F.

    max_du_forcing is a callable t -> max_u d_u F(., t); returns a list of
    (t, lower_bound, min_grad, max_grad, upper_bound) rows using
    M(t) = int_0^t max d_u F dtau (trapezoid over the recorded times).
    """
    g0_min = trajectory.min_gradient[0]
    g0_max = trajectory.max_gradient[0]
    times = np.asarray(trajectory.times)
    rates = np.array([max_du_forcing(t) for t in times])
    m_of_t = np.concatenate([[0.0], np.cumsum(
        0.5 * np.diff(times) * (rates[:-1] + rates[1:]))])
    rows = []
    for t, m, lo, hi in zip(times, m_of_t, trajectory.min_gradient,
                            trajectory.max_gradient):
        rows.append((float(t), float(np.exp(-m) * g0_min), float(lo),
                     float(hi), float(np.exp(m) * g0_max)))
    return rows


def tangent_velocity_form_check(state_a, state_b):
    """Residual of the tangent-velocity identity between two nearby states.

    Computes T = <dX/dt, mu> from the position difference and compares with
    d_u beta / l^2 at the midpoint time (F == 0 for the special flow).
    Returns the max-norm residual relative to the beta scale.
    """
    dt = state_b.t - state_a.t
    if not 0.0 < dt <= 1e-4:
        raise ValidationError("states must be ordered with 0 < dt <= 1e-4")
    num = state_a.curve.grid_size
    u = state_a.curve.grid
    n = int(round(state_a.curvature.ell[0]))
    mu = np.stack([np.cos(n * u), np.sin(n * u)], axis=-1)
    velocity = (state_b.curve.positions - state_a.curve.positions) / dt
    t_num = np.sum(velocity * mu, axis=1)
    beta_mid = 0.5 * (state_a.curvature.beta + state_b.curvature.beta)
    from .spectral import spectral_derivative
    t_exact = spectral_derivative(beta_mid) / (n * n)
    scale = max(1.0, float(np.max(np.abs(beta_mid))))
    return float(np.max(np.abs(t_num - t_exact))) / scale
