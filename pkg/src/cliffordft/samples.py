"""Standard decaying test fields: Gaussians, Hermite-Gaussians, bumps."""

from __future__ import annotations

import numpy as np
from numpy.polynomial.hermite import hermval

from .algebra import Multivector, Signature
from .field import Grid, SampledField


def _constant(sig: Signature, amplitude) -> np.ndarray:
    if isinstance(amplitude, Multivector):
        return amplitude.coeffs
    c = np.zeros(sig.dim)
    c[0] = float(amplitude)
    return c


def gaussian(sig: Signature, grid: Grid, k: float = 0.5, amplitude=1.0, center=None) -> SampledField:
    """``amplitude * exp(-k |x - center|^2)``; ``amplitude`` may be a multivector."""
    mesh = grid.mesh()
    center = np.zeros(grid.n) if center is None else np.asarray(center, dtype=float)
    r2 = sum((m - c) ** 2 for m, c in zip(mesh, center))
    g = np.exp(-k * r2)
    return SampledField(sig, grid, g[..., None] * _constant(sig, amplitude))


def hermite_function(x: np.ndarray, degree: int, width: float = 1.0) -> np.ndarray:
    coef = np.zeros(degree + 1)
    coef[degree] = 1.0
    s = x / width
    return hermval(s, coef) * np.exp(-0.5 * s * s)


def random_hermite_gaussian(
    sig: Signature,
    grid: Grid,
    rng: np.random.Generator,
    max_degree: int = 3,
    terms: int = 3,
    width_range: tuple[float, float] = (0.8, 1.25),
) -> SampledField:
    """Sum of products of Hermite functions with random multivector weights.

    All terms share one width, drawn from ``width_range``.
    """
    mesh = grid.mesh()
    width = rng.uniform(*width_range)
    values = np.zeros(grid.shape + (sig.dim,))
    for _ in range(terms):
        degs = rng.integers(0, max_degree + 1, size=grid.n)
        prof = np.ones(grid.shape)
        for m, d in zip(mesh, degs):
            prof = prof * hermite_function(m, int(d), width)
        scale = 1.0 / max(1.0, float(np.abs(prof).max()))
        values += prof[..., None] * scale * rng.normal(size=sig.dim)
    return SampledField(sig, grid, values)


def bump(sig: Signature, grid: Grid, radius: float = 3.0, amplitude=1.0) -> SampledField:
    """Smooth compactly supported ``exp(1 - 1 / (1 - (|x|/radius)^2))``."""
    s = grid.radius_sq() / radius**2
    prof = np.zeros(grid.shape)
    inside = s < 1
    prof[inside] = np.exp(1.0 - 1.0 / (1.0 - s[inside]))
    return SampledField(sig, grid, prof[..., None] * _constant(sig, amplitude))
