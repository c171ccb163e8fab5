"""Builders for the interaction potentials used in experiments and tests."""

from __future__ import annotations

import numpy as np
from scipy.special import ive

from .grids import GridFunction, TorusGrid


def neg_cosine(grid: TorusGrid, amplitude: float = 1.0) -> GridFunction:
    """W(x) = -amplitude * cos(2 pi x / L) (d=1) or the separable sum (d=2)."""
    if grid.d == 1:
        x = grid.axis_centers()
        return GridFunction(grid, -amplitude * np.cos(2 * np.pi * x / grid.L))
    X, Y = grid.centers()
    vals = -amplitude * (np.cos(2 * np.pi * X / grid.L) + np.cos(2 * np.pi * Y / grid.L))
    return GridFunction(grid, vals)


def resonant(grid: TorusGrid, weights: dict) -> GridFunction:
    """Cosine-mode potential W(x) = sum_m w_m cos(2 pi m x / L), d=1.

    `weights` maps positive mode numbers to (typically negative) weights,
    e.g. {1: -1.0, 2: -1.0} for the classic resonant pair.
    """
    if grid.d != 1:
        raise ValueError("resonant potentials are built in d=1")
    x = grid.axis_centers()
    vals = np.zeros(grid.n)
    for m, w in sorted(weights.items()):
        m = int(m)
        if m < 1:
            raise ValueError(f"mode numbers must be positive, got {m}")
        if m >= grid.n // 2:
            raise ValueError(f"mode {m} at or above Nyquist for n={grid.n}")
        vals += float(w) * np.cos(2 * np.pi * m * x / grid.L)
    return GridFunction(grid, vals)


def bump_weights(kappa: float, modes: int, amplitude: float = 1.0) -> dict:
    """Cosine weights of the attractive von-Mises bump -A exp(kappa(cos x - 1)).

    Truncated at `modes` modes: w_m = -A * 2 e^{-kappa} I_m(kappa). Narrow
    bumps (large kappa) give many nearly-degenerate attractive modes and a
    strongly first-order transition.
    """
    ms = np.arange(1, modes + 1)
    return {int(m): float(-amplitude * 2.0 * ive(m, kappa)) for m in ms}


def from_samples(grid: TorusGrid, values) -> GridFunction:
    """Wrap raw samples (e.g. loaded from file) as a potential on `grid`."""
    return GridFunction(grid, np.asarray(values, dtype=float).reshape(grid.shape))
