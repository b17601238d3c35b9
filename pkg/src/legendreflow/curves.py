"""Sampled Legendre curves, moving frames and Legendre curvature.

A Legendre curve is a pair (X, nu) of a closed plane frontal X with its unit
normal field nu, sampled on a uniform periodic grid u_j = 2*pi*j/N.  The
tangent direction is mu = J nu (rotation by +pi/2), and the Legendre
curvature is the pair

    l    = <d_u nu, mu>      (frame rotation speed),
    beta = <d_u X,  mu>      (signed speed along mu; X is singular at beta=0).

Sampled data is differentiated with centered second-order periodic
differences; everything spectral lives in :mod:`legendreflow.spectral`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    ConvexityError,
    GridTooCoarseError,
    InconsistentNormalFieldError,
    ValidationError,
)

UNIT_NORM_TOL = 1e-12
ROTATION_INDEX_TOL = 1e-6


def uniform_grid(n_samples):
    """Uniform periodic grid on [0, 2*pi), endpoint excluded."""
    return np.linspace(0.0, 2.0 * np.pi, n_samples, endpoint=False)


def periodic_diff(values, axis=0):
    """Centered second-order derivative on the periodic grid."""
    values = np.asarray(values, dtype=float)
    n = values.shape[axis]
    du = 2.0 * np.pi / n
    return (np.roll(values, -1, axis=axis) - np.roll(values, 1, axis=axis)) / (2.0 * du)


def frame_from_normal(nu):
    """Rotate a unit normal anticlockwise by pi/2: mu = J nu = (-nu_y, nu_x)."""
    nu = np.asarray(nu, dtype=float)
    norm = np.hypot(nu[..., 0], nu[..., 1])
    bad = np.abs(norm - 1.0) > UNIT_NORM_TOL
    if np.any(bad):
        offending = float(np.atleast_1d(norm)[np.atleast_1d(bad)][0])
        raise ValidationError(f"normal is not a unit vector: |nu| = {offending!r}")
    return np.stack([-nu[..., 1], nu[..., 0]], axis=-1)


@dataclass(frozen=True)
class LegendreCurve:
    """Closed sampled frontal with unit normal field.

    positions and normals are (N, 2) arrays over the uniform grid; index
    arithmetic is modulo N.
    """

    positions: np.ndarray
    normals: np.ndarray

    def __post_init__(self):
        pos = np.ascontiguousarray(np.asarray(self.positions, dtype=float))
        nor = np.ascontiguousarray(np.asarray(self.normals, dtype=float))
        if pos.ndim != 2 or pos.shape[1] != 2 or pos.shape != nor.shape:
            raise ValidationError("positions and normals must both have shape (N, 2)")
        object.__setattr__(self, "positions", pos)
        object.__setattr__(self, "normals", nor)
        pos.setflags(write=False)
        nor.setflags(write=False)

    @property
    def grid_size(self):
        return self.positions.shape[0]

    @property
    def grid(self):
        return uniform_grid(self.grid_size)

    def validate(self, frontal_tol=None):
        """Check the unit-normal and frontal invariants.

        The frontal residual max |<dX/du, nu>| is O(du^2) for smooth data;
        the default tolerance scales with du^2 and the tangential speed.
        """
        norms = np.linalg.norm(self.normals, axis=1)
        if np.max(np.abs(norms - 1.0)) > UNIT_NORM_TOL:
            raise ValidationError(
                f"non-unit normal: worst |nu| = {norms[np.argmax(np.abs(norms - 1.0))]!r}"
            )
        dX = periodic_diff(self.positions)
        residual = np.max(np.abs(np.sum(dX * self.normals, axis=1)))
        if frontal_tol is None:
            du = 2.0 * np.pi / self.grid_size
            speed = max(1.0, float(np.max(np.abs(dX))))
            frontal_tol = 50.0 * du * du * speed
        if residual > frontal_tol:
            raise ValidationError(
                f"frontal condition violated: max |<dX/du, nu>| = {residual:g} "
                f"> {frontal_tol:g}"
            )
        return residual

    def frontal_residual(self):
        dX = periodic_diff(self.positions)
        return float(np.max(np.abs(np.sum(dX * self.normals, axis=1))))


@dataclass(frozen=True)
class LegendreCurvature:
    """Sampled Legendre curvature pair (l, beta)."""

    ell: np.ndarray
    beta: np.ndarray

    def __post_init__(self):
        ell = np.asarray(self.ell, dtype=float)
        beta = np.asarray(self.beta, dtype=float)
        if ell.shape != beta.shape or ell.ndim != 1:
            raise ValidationError("ell and beta must be 1-d arrays of equal length")
        object.__setattr__(self, "ell", ell)
        object.__setattr__(self, "beta", beta)

    @property
    def is_l_convex(self):
        return bool(np.all(self.ell > 0.0))


@dataclass(frozen=True)
class AngleField:
    """Unwrapped angle Theta with nu = (sin Theta, -cos Theta)."""

    theta: np.ndarray
    rotation_index: int

    def theta_closing(self):
        """Theta(2*pi), fixed by the rotation index bookkeeping."""
        return float(self.theta[0]) + 2.0 * np.pi * self.rotation_index


def curvature_from_samples(curve: LegendreCurve) -> LegendreCurvature:
    """Legendre curvature by centered periodic differences, O(du^2)."""
    if curve.grid_size < 8:
        raise GridTooCoarseError(
            f"need at least 8 samples, got {curve.grid_size}"
        )
    mu = frame_from_normal(curve.normals)
    d_nu = periodic_diff(curve.normals)
    d_X = periodic_diff(curve.positions)
    ell = np.sum(d_nu * mu, axis=1)
    beta = np.sum(d_X * mu, axis=1)
    return LegendreCurvature(ell=ell, beta=beta)


def angle_unwrap(curve: LegendreCurve) -> AngleField:
    """Continuous angle samples and the rotation index of the normal field.

    Requires an l-convex curve so that Theta is strictly increasing and the
    nearest-branch continuation (neighbor jumps < pi) is unambiguous.
    """
    nu = curve.normals
    # nu = (sin Theta, -cos Theta)  =>  Theta = atan2(nu_x, -nu_y)
    raw = np.arctan2(nu[:, 0], -nu[:, 1])
    theta = np.unwrap(raw)
    increments = np.diff(theta)
    # total turning over one period, wrapping the last sample back to the first
    last_jump = (raw[0] - raw[-1] + np.pi) % (2.0 * np.pi) - np.pi
    total = (theta[-1] - theta[0]) + last_jump
    if np.any(increments <= 0.0) or last_jump <= 0.0:
        raise ConvexityError("angle field is not monotone; curve is not l-convex")
    index = total / (2.0 * np.pi)
    n = int(np.round(index))
    if abs(index - n) >= ROTATION_INDEX_TOL or n < 1:
        raise InconsistentNormalFieldError(
            f"rotation index {index!r} is not within {ROTATION_INDEX_TOL:g} of a "
            "positive integer"
        )
    # sanity: the unwrap must reproduce the normal field
    recon = np.stack([np.sin(theta), -np.cos(theta)], axis=1)
    if np.max(np.abs(recon - nu)) > 1e-10:
        raise InconsistentNormalFieldError("unwrapped angle does not reproduce nu")
    return AngleField(theta=theta, rotation_index=n)


def check_closure(beta, n):
    """Closure residual of a curve rebuilt from beta with nu = (sin nu, -cos nu).

    Returns the trapezoid quadrature of integral(beta * (cos(n u), sin(n u)) du)
    over one period; the curve closes iff the residual vanishes.  Under the
    module's Fourier normalization this equals pi * (a_n, b_n).
    """
    beta = np.asarray(beta, dtype=float)
    u = uniform_grid(beta.shape[0])
    du = 2.0 * np.pi / beta.shape[0]
    rx = du * np.sum(beta * np.cos(n * u))
    ry = du * np.sum(beta * np.sin(n * u))
    return np.array([rx, ry])


@dataclass(frozen=True)
class GeometricResiduals:
    """Max-norm residuals of the governing equations for an exact flow state."""

    flow_equation: float   # d_t beta - (d_uu beta / n^2 + beta)
    general_beta_equation: float  # d_t beta - (N l + d_u T) with N=beta/l, T=d_u beta/l^2
    grid_size: int = field(default=0)

    @property
    def max_residual(self):
        return max(self.flow_equation, self.general_beta_equation)


def residual_geometric_equations(flow, t, n, num_samples=512):
    """Residuals of the beta evolution equations for a spectral flow state.

    ``flow`` is a SpectralBeta; d_t beta is evaluated analytically from the
    mode sum and compared against d_uu beta / n^2 + beta, and against the
    general form N*l + d_u T with N = beta/l and T = d_u beta / l^2, l == n.
    Both vanish identically for the exact solution; the returned values are
    pure floating-point noise.
    """
    from .spectral import evolve_beta, evolve_beta_time_derivative, evolve_beta_derivative

    u = uniform_grid(num_samples)
    beta = evolve_beta(flow, t, u)
    beta_t = evolve_beta_time_derivative(flow, t, u)
    beta_uu = evolve_beta_derivative(flow, t, u, order=2)
    flow_res = np.max(np.abs(beta_t - (beta_uu / n**2 + beta)))
    # N l + d_u T with N = beta/l, T = d_u beta / l^2 and l == n
    d_u_T = beta_uu / n**2
    general_res = np.max(np.abs(beta_t - (beta * n / n + d_u_T)))
    return GeometricResiduals(
        flow_equation=float(flow_res),
        general_beta_equation=float(general_res),
        grid_size=num_samples,
    )
