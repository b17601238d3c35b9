"""Exact Fourier-spectral solution of the special inverse curvature flow.

With l == n frozen, beta solves d_t beta = d_uu beta / n^2 + beta, which
diagonalizes over the trigonometric modes with eigenvalues

    lambda_k = 1 - k^2 / n^2.

The flow state is therefore completely described by the truncated Fourier
coefficient set of beta_0 together with the rotation index n, and both beta
and the flowing curve X have closed forms -- no time stepping anywhere.

Normalization: a_0 = (1/2pi) int beta_0, a_k = (1/pi) int beta_0 cos(ku),
b_k = (1/pi) int beta_0 sin(ku), so that the synthesis

    beta_0(u) = a_0 + sum_k a_k cos(ku) + b_k sin(ku)

is an identity for band-limited data.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .curves import LegendreCurve, LegendreCurvature, uniform_grid
from .errors import NotClosedError, PointCurveError, ValidationError

CLOSURE_COEFF_TOL = 1e-8


def eigenvalue(n, k):
    """lambda_k = 1 - k^2/n^2 for the mode-k eigenfunctions."""
    if n < 1:
        raise ValidationError(f"rotation index must be >= 1, got {n}")
    return 1.0 - (k * k) / (n * n)


@dataclass(frozen=True)
class SpectralBeta:
    """Truncated Fourier coefficients of beta_0 plus the rotation index.

    cos_coeffs[k] holds a_k for k = 0..K (cos_coeffs[0] is the mean mode a_0),
    sin_coeffs[k] holds b_k (sin_coeffs[0] is unused and zero).
    """

    n: int
    cos_coeffs: np.ndarray
    sin_coeffs: np.ndarray

    def __post_init__(self):
        a = np.atleast_1d(np.asarray(self.cos_coeffs, dtype=float))
        b = np.atleast_1d(np.asarray(self.sin_coeffs, dtype=float))
        if a.shape != b.shape or a.ndim != 1:
            raise ValidationError("coefficient arrays must be 1-d and equally long")
        if self.n < 1:
            raise ValidationError(f"rotation index must be >= 1, got {self.n}")
        if b[0] != 0.0:
            raise ValidationError("sin_coeffs[0] must be zero")
        if not np.any(a) and not np.any(b):
            raise PointCurveError("all coefficients vanish; beta_0 describes a point")
        if self.n < a.shape[0]:
            if abs(a[self.n]) > 1e-10 or abs(b[self.n]) > 1e-10:
                raise NotClosedError(
                    f"n-band coefficients (a_{self.n}, b_{self.n}) = "
                    f"({a[self.n]:g}, {b[self.n]:g}) violate the closure constraint"
                )
        object.__setattr__(self, "cos_coeffs", a)
        object.__setattr__(self, "sin_coeffs", b)
        a.setflags(write=False)
        b.setflags(write=False)

    @classmethod
    def from_modes(cls, n, a0=0.0, modes=None):
        """Build from a sparse mode table {k: (a_k, b_k)}."""
        modes = dict(modes or {})
        top = max([0, *modes.keys()])
        a = np.zeros(top + 1)
        b = np.zeros(top + 1)
        a[0] = a0
        for k, (ak, bk) in modes.items():
            if k < 1:
                raise ValidationError("mode indices must be >= 1")
            a[k] = ak
            b[k] = bk
        return cls(n=n, cos_coeffs=a, sin_coeffs=b)

    @property
    def a0(self):
        return float(self.cos_coeffs[0])

    @property
    def truncation(self):
        return self.cos_coeffs.shape[0] - 1

    @property
    def modes(self):
        """Sorted (k, a_k, b_k) tuples of the nonzero modes, k >= 1."""
        out = []
        for k in range(1, self.truncation + 1):
            if self.cos_coeffs[k] != 0.0 or self.sin_coeffs[k] != 0.0:
                out.append((k, float(self.cos_coeffs[k]), float(self.sin_coeffs[k])))
        return out

    def eigenvalues(self):
        k = np.arange(self.truncation + 1)
        return 1.0 - (k * k) / (self.n * self.n)


def analyze_beta(beta0, n, truncation=None):
    """Discrete trigonometric projection of beta_0 samples.

    Direct O(N K) projection; exact (up to rounding) for trigonometric
    polynomials of degree <= K sampled on N >= 2K + 2 points.
    """
    beta0 = np.asarray(beta0, dtype=float)
    num = beta0.shape[0]
    if truncation is None:
        truncation = num // 2 - 1
    if num < 2 * truncation + 2:
        raise ValidationError(
            f"need N >= 2K + 2 samples for K = {truncation}, got N = {num}"
        )
    if np.max(np.abs(beta0)) == 0.0:
        raise PointCurveError("beta_0 is identically zero; the curve is a point")
    u = uniform_grid(num)
    k = np.arange(1, truncation + 1)
    a = np.empty(truncation + 1)
    b = np.zeros(truncation + 1)
    a[0] = np.mean(beta0)
    # (2/N) sum beta cos(k u_j) is the discrete form of (1/pi) int beta cos(ku)
    a[1:] = (2.0 / num) * (np.cos(np.outer(k, u)) @ beta0)
    b[1:] = (2.0 / num) * (np.sin(np.outer(k, u)) @ beta0)
    if n <= truncation and (abs(a[n]) > CLOSURE_COEFF_TOL or abs(b[n]) > CLOSURE_COEFF_TOL):
        raise NotClosedError(
            f"(a_{n}, b_{n}) = ({a[n]:g}, {b[n]:g}); beta_0 does not close a curve"
        )
    if n <= truncation:
        a[n] = 0.0
        b[n] = 0.0
    return SpectralBeta(n=n, cos_coeffs=a, sin_coeffs=b)


def synthesize_beta(s: SpectralBeta, u):
    """beta_0 evaluated from the coefficient set (t = 0 mode sum)."""
    return evolve_beta(s, 0.0, u)


def truncation_residual(s: SpectralBeta, beta0):
    """sup-norm mismatch between beta_0 samples and the truncated synthesis."""
    beta0 = np.asarray(beta0, dtype=float)
    u = uniform_grid(beta0.shape[0])
    return float(np.max(np.abs(beta0 - synthesize_beta(s, u))))


def _mode_tables(s: SpectralBeta, u):
    u = np.asarray(u, dtype=float)
    k = np.arange(1, s.truncation + 1)
    ku = np.multiply.outer(k, u)
    return k, np.cos(ku), np.sin(ku)


def evolve_beta(s: SpectralBeta, t, u):
    """beta(u, t) = e^t a_0 + sum_k e^{lambda_k t} (a_k cos ku + b_k sin ku)."""
    if t < 0:
        raise ValidationError(f"time must be >= 0, got {t}")
    u = np.asarray(u, dtype=float)
    k, cos_ku, sin_ku = _mode_tables(s, u)
    growth = np.exp(eigenvalue(s.n, k) * t)
    out = np.exp(t) * s.a0 * np.ones_like(u)
    out += (growth * s.cos_coeffs[1:]) @ cos_ku
    out += (growth * s.sin_coeffs[1:]) @ sin_ku
    return out


def evolve_beta_derivative(s: SpectralBeta, t, u, order=1):
    """order-th u-derivative of beta(., t), exact mode-wise."""
    u = np.asarray(u, dtype=float)
    k, cos_ku, sin_ku = _mode_tables(s, u)
    growth = np.exp(eigenvalue(s.n, k) * t) * k**order
    quarter = order % 4
    if quarter == 0:
        ca, cb = cos_ku, sin_ku
    elif quarter == 1:
        ca, cb = -sin_ku, cos_ku
    elif quarter == 2:
        ca, cb = -cos_ku, -sin_ku
    else:
        ca, cb = sin_ku, -cos_ku
    out = (growth * s.cos_coeffs[1:]) @ ca
    out += (growth * s.sin_coeffs[1:]) @ cb
    return out


def evolve_beta_time_derivative(s: SpectralBeta, t, u):
    """d_t beta, analytic: each mode picks up a lambda_k factor."""
    u = np.asarray(u, dtype=float)
    k, cos_ku, sin_ku = _mode_tables(s, u)
    lam = eigenvalue(s.n, k)
    growth = lam * np.exp(lam * t)
    out = np.exp(t) * s.a0 * np.ones_like(u)
    out += (growth * s.cos_coeffs[1:]) @ cos_ku
    out += (growth * s.sin_coeffs[1:]) @ sin_ku
    return out


def _sin_over(p, u):
    """Antiderivative kernel: int_0^u cos(p v) dv = sin(pu)/p, or u at p = 0."""
    if p == 0:
        return np.asarray(u, dtype=float).copy()
    return np.sin(p * u) / p


def _one_minus_cos_over(p, u):
    """Antiderivative kernel: int_0^u sin(p v) dv = (1 - cos(pu))/p, or 0 at p = 0."""
    if p == 0:
        return np.zeros_like(np.asarray(u, dtype=float))
    return (1.0 - np.cos(p * u)) / p


def position_increment(s: SpectralBeta, u):
    """int_0^u beta_0(v) mu(v) dv with mu = (cos nv, sin nv), mode-exact.

    Every product of trig functions is expanded by product-to-sum before
    integrating, so the result is exact up to rounding.
    """
    u = np.asarray(u, dtype=float)
    n = s.n
    x = s.a0 * _sin_over(n, u)
    y = s.a0 * _one_minus_cos_over(n, u)
    for k, ak, bk in s.modes:
        if ak != 0.0:
            x = x + 0.5 * ak * (_sin_over(k + n, u) + _sin_over(k - n, u))
            y = y + 0.5 * ak * (_one_minus_cos_over(n + k, u) + _one_minus_cos_over(n - k, u))
        if bk != 0.0:
            x = x + 0.5 * bk * (_one_minus_cos_over(k + n, u) + _one_minus_cos_over(k - n, u))
            y = y + 0.5 * bk * (_sin_over(k - n, u) - _sin_over(k + n, u))
    return np.stack([x, y], axis=-1)


def reconstruct_initial_curve(s: SpectralBeta, base_point=(0.0, 0.0), num_samples=512):
    """X_0(u) = base_point + int_0^u beta_0 mu dv, nu_0(u) = (sin nu, -cos nu)."""
    closure = position_increment(s, np.array([2.0 * np.pi]))[0]
    if np.max(np.abs(closure)) > 1e-10:
        raise NotClosedError(
            f"closure residual {tuple(closure)} is nonzero; beta_0 does not "
            "trace a closed curve"
        )
    u = uniform_grid(num_samples)
    positions = np.asarray(base_point, dtype=float) + position_increment(s, u)
    normals = np.stack([np.sin(s.n * u), -np.cos(s.n * u)], axis=-1)
    return LegendreCurve(positions=positions, normals=normals)


def reconstruct_centered_curve(s: SpectralBeta, num_samples=512):
    """Like reconstruct_initial_curve but with zero position mean."""
    curve = reconstruct_initial_curve(s, (0.0, 0.0), num_samples)
    centroid = curve.positions.mean(axis=0)
    return LegendreCurve(positions=curve.positions - centroid, normals=curve.normals)


@dataclass(frozen=True)
class FlowState:
    """Evaluated flow snapshot at time t, with l == n frozen."""

    t: float
    curve: LegendreCurve
    curvature: LegendreCurvature


def spectral_derivative(samples, axis=0):
    """FFT derivative on the periodic grid; exact for band-limited samples."""
    samples = np.asarray(samples, dtype=float)
    num = samples.shape[axis]
    freqs = np.fft.rfftfreq(num, d=1.0 / num)
    coeffs = np.fft.rfft(samples, axis=axis)
    shape = [1] * samples.ndim
    shape[axis] = -1
    coeffs = coeffs * (1j * freqs).reshape(shape)
    if num % 2 == 0:
        # zero the Nyquist derivative; it is pure noise for real data
        index = [slice(None)] * samples.ndim
        index[axis] = -1
        coeffs[tuple(index)] = 0.0
    return np.fft.irfft(coeffs, n=num, axis=axis)


def growth_factor(lam, t):
    """g(t) = (e^{lam t} - 1)/lam with the removable lam = 0 branch = t."""
    lam = np.asarray(lam, dtype=float)
    out = np.where(lam == 0.0, t, np.expm1(np.where(lam == 0.0, 1.0, lam) * t)
                   / np.where(lam == 0.0, 1.0, lam))
    return out


def evolve_curve(s: SpectralBeta, initial_curve: LegendreCurve, t,
                 consistency_tol=1e-8) -> FlowState:
    """Closed-form flow position at time t.

    X(u,t) = X_0(u) + sum_k g_k(t) [ beta_k(u)/n nu(u) + beta_k'(u)/n^2 mu(u) ]
    where beta_k is the k-th mode of beta_0 and g_k(t) = (e^{lambda_k t}-1)/lambda_k.
    nu stays frozen at (sin nu, -cos nu).
    """
    if t < 0:
        raise ValidationError(f"time must be >= 0, got {t}")
    u = initial_curve.grid
    n = s.n
    nu = np.stack([np.sin(n * u), -np.cos(n * u)], axis=-1)
    mu = np.stack([np.cos(n * u), np.sin(n * u)], axis=-1)

    beta0 = synthesize_beta(s, u)
    dX = spectral_derivative(initial_curve.positions)
    scale = max(1.0, float(np.max(np.abs(beta0))))
    mismatch = np.max(np.abs(dX - beta0[:, None] * mu))
    if mismatch > consistency_tol * scale:
        raise ValidationError(
            f"initial curve inconsistent with the coefficient set: "
            f"max |d_u X0 - beta_0 mu| = {mismatch:g}"
        )

    displacement = growth_factor(eigenvalue(n, 0), t) * (s.a0 / n) * nu
    for k, ak, bk in s.modes:
        g = growth_factor(eigenvalue(n, k), t)
        mode = ak * np.cos(k * u) + bk * np.sin(k * u)
        mode_du = k * (-ak * np.sin(k * u) + bk * np.cos(k * u))
        displacement = displacement + g * (mode[:, None] * nu / n
                                           + mode_du[:, None] * mu / n**2)
    positions = initial_curve.positions + displacement
    curve = LegendreCurve(positions=positions, normals=nu)
    curvature = LegendreCurvature(ell=np.full(u.shape[0], float(n)),
                                  beta=evolve_beta(s, t, u))
    return FlowState(t=float(t), curve=curve, curvature=curvature)
