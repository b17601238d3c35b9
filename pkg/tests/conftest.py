"""Shared fixtures and random-data helpers for the suite."""

import numpy as np
import pytest

from legendreflow.spectral import SpectralBeta


def random_closed_spectral(rng, max_index=3, max_truncation=8):
    """Random band-limited SpectralBeta with the n band zeroed (closed curve)."""
    n = int(rng.integers(1, max_index + 1))
    top = int(rng.integers(n + 1, max_truncation + 1))
    a = rng.normal(size=top + 1)
    b = rng.normal(size=top + 1)
    b[0] = 0.0
    a[n] = 0.0
    b[n] = 0.0
    # keep the mean mode modest so zero counts stay interesting
    a[0] *= 0.2
    if not np.any(a) and not np.any(b):
        a[0] = 1.0
    return SpectralBeta(n=n, cos_coeffs=a, sin_coeffs=b)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
