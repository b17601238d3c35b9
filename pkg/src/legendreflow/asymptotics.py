"""Long-time behavior: centering, rescaled convergence and decay rates.

The centroid (1/2pi) int X(., t) du is conserved by the flow, so the center
point p is read off the initial curve.  With leading surviving mode m, the
rescaled flow (X(., t) - p)/e^{(1 - m^2/n^2) t} converges to the profile
X*_{n, m, a_m, b_m}; the error is a finite sum of sub-leading modes, each
decaying at an exact exponential rate, so the fitted slope of log(error)
matches lambda_{k'} - lambda_m to rounding (k' the next surviving mode).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .curves import LegendreCurve
from .errors import LegendreFlowError, ValidationError
from .selfsimilar import SelfSimilarProfile, profile_position
from .spectral import SpectralBeta, eigenvalue

LEADING_TOL = 1e-12


@dataclass(frozen=True)
class ConvergenceReport:
    leading_mode: int
    center: np.ndarray
    errors: tuple          # ((t, scaled sup-norm error), ...)
    fitted_rate: float | None
    predicted_rate: float | None
    exactly_self_similar: bool = False
    envelope_bounded: bool = field(default=True)


def center_point(curve: LegendreCurve):
    """Conserved centroid p = (1/2pi) int X du, trapezoid quadrature."""
    return curve.positions.mean(axis=0)


def leading_mode(s: SpectralBeta):
    """(m, a_m, b_m) of the first surviving band; m = 0 iff a_0 != 0."""
    coeff_scale = max(float(np.max(np.abs(s.cos_coeffs))),
                      float(np.max(np.abs(s.sin_coeffs))))
    threshold = LEADING_TOL * coeff_scale
    if abs(s.a0) > threshold:
        return 0, s.a0, 0.0
    for k in range(1, s.truncation + 1):
        ak, bk = float(s.cos_coeffs[k]), float(s.sin_coeffs[k])
        if abs(ak) > threshold or abs(bk) > threshold:
            return k, ak, bk
    raise ValidationError("no surviving mode found")


def _surviving_modes(s: SpectralBeta):
    m0, a0, b0 = leading_mode(s)
    coeff_scale = max(float(np.max(np.abs(s.cos_coeffs))),
                      float(np.max(np.abs(s.sin_coeffs))))
    threshold = LEADING_TOL * coeff_scale
    modes = []
    if abs(s.a0) > threshold:
        modes.append((0, s.a0, 0.0))
    for k in range(1, s.truncation + 1):
        ak, bk = float(s.cos_coeffs[k]), float(s.sin_coeffs[k])
        if abs(ak) > threshold or abs(bk) > threshold:
            modes.append((k, ak, bk))
    return modes


def _mode_profile(n, k, ak, bk, u):
    """Position profile of one beta mode (the k-mode's self-similar shape)."""
    if k == 0:
        return profile_position(SelfSimilarProfile(n=n, m=0, c1=ak, c2=0.0), u)
    return profile_position(SelfSimilarProfile(n=n, m=k, c1=ak, c2=bk), u)


def scaled_error(s: SpectralBeta, initial_curve: LegendreCurve, t,
                 num_samples=1024):
    """sup_u |(X(u,t) - p)/lambda*(t) - X*_{n,m,a_m,b_m}(u)|.

    Evaluated through the exact mode decomposition
        X(u, t) - p = sum_k e^{lambda_k t} V_k(u),
    so the sub-leading remainder is formed without the catastrophic
    cancellation a direct large-t evaluation of X would suffer.
    """
    if t < 0:
        raise ValidationError(f"time must be >= 0, got {t}")
    m, _, _ = leading_mode(s)
    if m == s.n:
        raise LegendreFlowError(
            "leading mode equals the rotation index; impossible for a closed "
            "curve (internal inconsistency)"
        )
    u = np.linspace(0.0, 2.0 * np.pi, num_samples, endpoint=False)
    lam_m = eigenvalue(s.n, m)
    remainder = np.zeros((num_samples, 2))
    for k, ak, bk in _surviving_modes(s):
        if k == m:
            continue
        remainder += np.exp((eigenvalue(s.n, k) - lam_m) * t) \
            * _mode_profile(s.n, k, ak, bk, u)
    return float(np.max(np.abs(remainder)))


def predicted_decay_rate(s: SpectralBeta):
    """lambda_{k'} - lambda_m for the two leading surviving modes, or None."""
    modes = _surviving_modes(s)
    if len(modes) < 2:
        return None
    m = modes[0][0]
    # the slowest-decaying contaminant relative to the leading mode
    gaps = [eigenvalue(s.n, k) - eigenvalue(s.n, m) for k, _, _ in modes[1:]]
    return max(gaps)


def fit_decay_rate(s: SpectralBeta, initial_curve: LegendreCurve,
                   times=None) -> ConvergenceReport:
    """Least-squares slope of log(scaled error) vs t, with the sharp-rate
    contract |fitted - predicted| < 0.01 |predicted| left to the caller.

    Underflowing samples (error < 1e-14) trigger one window-shrink retry; a
    single-mode input is reported as exactly self-similar instead of fitted.
    """
    if times is None:
        times = np.linspace(1.0, 6.0, 6)
    times = np.asarray(times, dtype=float)
    if times.shape[0] < 5:
        raise ValidationError("need at least 5 sample times for the fit")
    p = center_point(initial_curve)
    m, _, _ = leading_mode(s)
    predicted = predicted_decay_rate(s)
    if predicted is None:
        return ConvergenceReport(
            leading_mode=m, center=p, errors=(), fitted_rate=None,
            predicted_rate=None, exactly_self_similar=True)

    def sample(ts):
        return [(float(t), scaled_error(s, initial_curve, t)) for t in ts]

    errors = sample(times)
    if any(e < 1e-14 for _, e in errors):
        times = times[0] + (times - times[0]) * 0.5
        errors = sample(times)
        if any(e <= 0.0 for _, e in errors):
            raise LegendreFlowError(
                "scaled error underflowed even after shrinking the fit window")
    ts = np.array([t for t, _ in errors])
    logs = np.log([e for _, e in errors])
    slope, _ = np.polyfit(ts, logs, 1)

    # weaker epsilon-envelope with epsilon = (k'^2 - m^2)/2: the error times
    # e^{-(1 - (m^2 + eps)/n^2 - lambda_m) t} must stay bounded
    kp_gap = predicted  # = lambda_k' - lambda_m
    eps_rate = 0.5 * kp_gap  # strictly slower envelope than the sharp rate
    ratios = [e * np.exp(-eps_rate * t) for t, e in errors]
    envelope_ok = bool(max(ratios) <= ratios[0] * (1.0 + 1e-9))

    return ConvergenceReport(
        leading_mode=m, center=p, errors=tuple(errors),
        fitted_rate=float(slope), predicted_rate=float(predicted),
        exactly_self_similar=False, envelope_bounded=envelope_ok)


def derivative_gap_sup(s: SpectralBeta, t, order, num_samples=2048):
    """sup_u |d_u^i (beta - beta_leading)(u, t)| / lambda*(t).

    Used to evidence that the convergence holds at every derivative order:
    each sub-leading mode just picks up a k^i factor.
    """
    m, _, _ = leading_mode(s)
    u = np.linspace(0.0, 2.0 * np.pi, num_samples, endpoint=False)
    lam_m = eigenvalue(s.n, m)
    total = np.zeros(num_samples)
    for k, ak, bk in _surviving_modes(s):
        if k == m or k == 0:
            continue
        gap = np.exp((eigenvalue(s.n, k) - lam_m) * t) * float(k) ** order
        phase = order % 4
        cos_ku, sin_ku = np.cos(k * u), np.sin(k * u)
        if phase == 0:
            term = ak * cos_ku + bk * sin_ku
        elif phase == 1:
            term = -ak * sin_ku + bk * cos_ku
        elif phase == 2:
            term = -(ak * cos_ku + bk * sin_ku)
        else:
            term = ak * sin_ku - bk * cos_ku
        total = total + gap * term
    return float(np.max(np.abs(total)))
