"""Zero tracking and (2,3)-cusp classification for the evolving beta.

A zero of beta(., t) marks a singular point of the flowing frontal; it is a
(2,3)-cusp when d_u beta != 0 there (l = n > 0 always holds for the special
flow).  The zero count z(t) is non-increasing in t, and each strict drop
happens exactly at a degenerate zero with beta = d_u beta = 0.

All thresholds scale with ||beta(., t)||_inf since the modes grow or decay
exponentially.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq, least_squares

from .errors import DegenerateStateError, InvariantViolationError, ValidationError
from .spectral import SpectralBeta, evolve_beta, evolve_beta_derivative

DERIVATIVE_THRESHOLD = 1e-8     # relative: simple cusp iff |d_u beta| > thr * scale
TANGENTIAL_THRESHOLD = 1e-10    # relative: |beta| dips below this at a touch point
ROOT_TOL = 1e-13                # relative: bisection target for |beta| at a root
SEPARATION = 1e-6               # minimum u-distance between reported zeros
EVENT_DT = 1e-6                 # bisection resolution for strict-decrease times


@dataclass(frozen=True)
class Zero:
    location: float
    derivative: float
    kind: str  # "simple_cusp" | "degenerate"


@dataclass(frozen=True)
class CuspReport:
    t: float
    zeros: tuple
    scale: float

    @property
    def count(self):
        return len(self.zeros)


@dataclass(frozen=True)
class DecreaseEvent:
    """One strict decrease of z(t), with its degenerate-zero witness."""

    interval: tuple
    t_event: float
    count_before: int
    count_after: int
    witness_u: float
    witness_beta: float
    witness_dbeta: float


def _dense_grid(s: SpectralBeta):
    return np.linspace(0.0, 2.0 * np.pi, max(2048, 32 * max(1, s.truncation)),
                       endpoint=False)


def find_zeros(s: SpectralBeta, t) -> CuspReport:
    """All zeros of beta(., t) on [0, 2*pi), classified.

    Sign changes on a dense grid are refined by Brent bisection; tangential
    (even-touch) zeros, invisible to the sign scan, are recovered from local
    minima of |beta| that dip below the tangential threshold.
    """
    if t < 0:
        raise ValidationError(f"time must be >= 0, got {t}")
    grid = _dense_grid(s)
    values = evolve_beta(s, t, grid)
    scale = float(np.max(np.abs(values)))
    if scale == 0.0:
        raise DegenerateStateError("beta(., t) is identically zero")

    def f(u):
        return float(evolve_beta(s, t, np.array([u]))[0])

    num = grid.shape[0]
    step = 2.0 * np.pi / num
    roots = []
    sign = np.sign(values)
    for j in range(num):
        a, b = values[j], values[(j + 1) % num]
        if sign[j] == 0.0:
            roots.append(grid[j])
        elif a * b < 0.0:
            lo, hi = grid[j], grid[j] + step
            roots.append(brentq(f, lo, hi, xtol=ROOT_TOL * max(scale, 1e-300),
                                rtol=8.9e-16))

    # tangential zeros: local minima of |beta| below threshold
    absval = np.abs(values)
    local_min = (absval <= np.roll(absval, 1)) & (absval <= np.roll(absval, -1))
    for j in np.nonzero(local_min & (absval < TANGENTIAL_THRESHOLD * scale))[0]:
        u0 = grid[j]
        # polish on |beta|^2 by a couple of derivative-root steps
        for _ in range(8):
            d1 = float(evolve_beta_derivative(s, t, np.array([u0]))[0])
            d2 = float(evolve_beta_derivative(s, t, np.array([u0]), order=2)[0])
            b0 = f(u0)
            g = 2.0 * b0 * d1
            h = 2.0 * (d1 * d1 + b0 * d2)
            if h <= 0.0:
                break
            u0 = u0 - g / h
        if abs(f(u0)) < TANGENTIAL_THRESHOLD * scale:
            roots.append(float(np.mod(u0, 2.0 * np.pi)))

    roots = sorted(np.mod(roots, 2.0 * np.pi))
    pruned = []
    for r in roots:
        if pruned and (r - pruned[-1] < SEPARATION):
            continue
        pruned.append(r)
    # the seam: first and last may be the same zero modulo 2*pi
    if len(pruned) > 1 and (pruned[0] + 2.0 * np.pi - pruned[-1]) < SEPARATION:
        pruned.pop()

    zeros = []
    for r in pruned:
        d = float(evolve_beta_derivative(s, t, np.array([r]))[0])
        kind = "simple_cusp" if abs(d) > DERIVATIVE_THRESHOLD * scale else "degenerate"
        zeros.append(Zero(location=float(r), derivative=d, kind=kind))
    return CuspReport(t=float(t), zeros=tuple(zeros), scale=scale)


def zero_count_series(s: SpectralBeta, times):
    """(t, z(t)) over a strictly increasing positive time grid.

    Raises InvariantViolationError if the count ever increases -- that would
    contradict the zero-number monotonicity of the flow.
    """
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or np.any(times <= 0.0) or np.any(np.diff(times) <= 0.0):
        raise ValidationError("times must be strictly increasing and positive")
    series = [(float(t), find_zeros(s, t).count) for t in times]
    for (t0, z0), (t1, z1) in zip(series, series[1:]):
        if z1 > z0:
            raise InvariantViolationError(
                f"zero count increased from {z0} at t={t0:g} to {z1} at t={t1:g}"
            )
    return series


def _zero_count(s, t):
    return find_zeros(s, t).count


def _refine_witness(s, u0, t0):
    """Solve beta = d_u beta = 0 for (u, t) near the event estimate."""
    scale = max(float(np.max(np.abs(evolve_beta(s, t0, _dense_grid(s))))), 1e-300)

    def residual(x):
        u, t = x
        t = max(t, 1e-12)
        return np.array([
            float(evolve_beta(s, t, np.array([u]))[0]) / scale,
            float(evolve_beta_derivative(s, t, np.array([u]))[0]) / scale,
        ])

    sol = least_squares(residual, x0=np.array([u0, t0]), xtol=1e-15, ftol=1e-15,
                        gtol=1e-15)
    u, t = sol.x
    return float(np.mod(u, 2.0 * np.pi)), float(t)


def detect_strict_decrease(s: SpectralBeta, series):
    """Locate and certify every strict decrease in a zero-count series.

    Each drop interval is bisected in t to EVENT_DT resolution; at the
    refined event time a degenerate zero (beta = d_u beta = 0) is solved for
    and reported as the witness.
    """
    events = []
    for (t_lo, z_lo), (t_hi, z_hi) in zip(series, series[1:]):
        cur_t, cur_z = t_lo, z_lo
        while cur_z > z_hi:
            lo, hi = cur_t, t_hi
            z_ref = cur_z
            while hi - lo > EVENT_DT:
                mid = 0.5 * (lo + hi)
                if _zero_count(s, mid) < z_ref:
                    hi = mid
                else:
                    lo = mid
            t_event = 0.5 * (lo + hi)
            z_after = _zero_count(s, hi)

            # initial witness guess: most degenerate grid point just before
            grid = _dense_grid(s)
            vals = np.abs(evolve_beta(s, t_event, grid))
            derivs = np.abs(evolve_beta_derivative(s, t_event, grid))
            u0 = grid[np.argmin(np.hypot(vals, derivs))]
            wu, wt = _refine_witness(s, u0, t_event)
            scale = float(np.max(np.abs(evolve_beta(s, wt, grid))))
            wbeta = float(evolve_beta(s, wt, np.array([wu]))[0])
            wdbeta = float(evolve_beta_derivative(s, wt, np.array([wu]))[0])
            events.append(DecreaseEvent(
                interval=(float(t_lo), float(t_hi)),
                t_event=float(t_event),
                count_before=int(z_ref),
                count_after=int(z_after),
                witness_u=wu,
                witness_beta=wbeta / scale,
                witness_dbeta=wdbeta / scale,
            ))
            cur_t, cur_z = hi, z_after
    return events
